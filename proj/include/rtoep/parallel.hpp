#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace rtoep {

/// Worker cap: RTOEP_THREADS when set (min 1), hardware concurrency otherwise.
inline int worker_count() {
    if (const char* env = std::getenv("RTOEP_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, count) on up to worker_count() threads. Work items
/// must be independent; each writes only its own result slot, so the outcome
/// is identical for any thread count.
inline void parallel_for(long count, const std::function<void(long)>& fn) {
    const int workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const int used = static_cast<int>(std::min<long>(workers, count));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(used));
    for (int w = 0; w < used; ++w) {
        pool.emplace_back([&fn, &errors, count, used, w]() {
            try {
                for (long i = w; i < count; i += used) fn(i);
            } catch (...) {
                errors[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace rtoep

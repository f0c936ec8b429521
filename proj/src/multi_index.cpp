#include "rtoep/multi_index.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rtoep/special.hpp"

namespace rtoep {

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
    if (e_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
    for (int v : e_)
        if (v < 0) throw std::invalid_argument("MultiIndex: entries must be non-negative");
}

MultiIndex MultiIndex::zeros(int n) { return MultiIndex(std::vector<int>(static_cast<size_t>(n), 0)); }

MultiIndex MultiIndex::unit(int n, int axis) {
    std::vector<int> e(static_cast<size_t>(n), 0);
    e.at(static_cast<size_t>(axis)) = 1;
    return MultiIndex(std::move(e));
}

int MultiIndex::order() const { return std::accumulate(e_.begin(), e_.end(), 0); }

MultiIndex MultiIndex::shifted(int axis, int delta) const {
    std::vector<int> e = e_;
    e.at(static_cast<size_t>(axis)) += delta;
    return MultiIndex(std::move(e));
}

double MultiIndex::log_factorial() const {
    double s = 0.0;
    for (int v : e_) s += rtoep::log_factorial(v);
    return s;
}

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << '(';
    for (size_t k = 0; k < e_.size(); ++k) {
        if (k) os << ',';
        os << e_[k];
    }
    os << ')';
    return os.str();
}

bool operator<(const MultiIndex& a, const MultiIndex& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    const int oa = a.order(), ob = b.order();
    if (oa != ob) return oa < ob;
    return a.e_ < b.e_;
}

namespace {
void enumerate_rec(int n, int axis, int remaining, std::vector<int>& cur,
                   std::vector<MultiIndex>& out) {
    if (axis == n - 1) {
        for (int v = 0; v <= remaining; ++v) {
            cur[static_cast<size_t>(axis)] = v;
            out.emplace_back(cur);
        }
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        cur[static_cast<size_t>(axis)] = v;
        enumerate_rec(n, axis + 1, remaining - v, cur, out);
    }
}
}  // namespace

std::vector<MultiIndex> multi_indices_upto(int n, int max_order) {
    if (n < 1) throw std::invalid_argument("multi_indices_upto: n must be >= 1");
    if (max_order < 0) throw std::invalid_argument("multi_indices_upto: max_order must be >= 0");
    std::vector<MultiIndex> out;
    out.reserve(static_cast<size_t>(multi_index_count(n, max_order)));
    std::vector<int> cur(static_cast<size_t>(n), 0);
    enumerate_rec(n, 0, max_order, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

long multi_index_count(int n, int max_order) {
    long c = 1;
    for (int k = 1; k <= n; ++k) c = c * (max_order + k) / k;
    return c;
}

}  // namespace rtoep

#pragma once

#include <string>
#include <vector>

namespace rtoep {

/// Multi-index p in Z_+^n. Comparison is graded-lexicographic so tables,
/// matrices and CSV rows all share one canonical deterministic order.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);

    static MultiIndex zeros(int n);
    static MultiIndex unit(int n, int axis);

    int dim() const { return static_cast<int>(e_.size()); }
    int order() const;  // |p| = p_1 + ... + p_n
    int operator[](int k) const { return e_[static_cast<size_t>(k)]; }
    const std::vector<int>& entries() const { return e_; }

    /// Index shifted by delta on one axis; entries must stay non-negative.
    MultiIndex shifted(int axis, int delta) const;

    double log_factorial() const;  // log(p!) = sum log(p_k!)
    std::string str() const;       // "(p1,...,pn)"

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e_ == b.e_; }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b);

private:
    std::vector<int> e_;
};

/// All p with |p| <= max_order, in graded-lexicographic order.
std::vector<MultiIndex> multi_indices_upto(int n, int max_order);

/// C(max_order + n, n).
long multi_index_count(int n, int max_order);

}  // namespace rtoep

#include "rtoep/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "rtoep/special.hpp"

namespace rtoep {

namespace {

constexpr int kHighOrder = 15;
constexpr int kLowOrder = 7;

using Vec = std::vector<std::complex<double>>;

struct Cell {
    std::vector<double> lo, hi;
    int depth = 0;
    long id = 0;
    Vec value;          // GL15 estimate
    double error = 0.0; // sup-norm GL15 vs GL7 difference
};

struct CellWorse {
    bool operator()(const Cell& a, const Cell& b) const {
        if (a.error != b.error) return a.error < b.error;
        return a.id > b.id;  // deterministic tie-break
    }
};

enum class CellClass { Outside, Inside, Straddle };

class Engine {
public:
    Engine(const Region& region, MeasureMode measure, int components,
           const std::function<void(const std::vector<double>&, std::complex<double>*)>& f,
           const QuadratureOptions& opts)
        : region_(region), measure_(measure), m_(components), f_(f), opts_(opts) {
        scratch_.assign(static_cast<size_t>(m_), {0.0, 0.0});
    }

    VectorQuadratureResult run() {
        const int n = region_.dim;
        std::priority_queue<Cell, std::vector<Cell>, CellWorse> queue;
        std::vector<Cell> retired;  // cells no longer refined
        long cells_used = 0;

        // seed grid
        const int per_axis = 1 << opts_.initial_splits;
        std::vector<int> idx(static_cast<size_t>(n), 0);
        while (true) {
            Cell c;
            c.lo.resize(static_cast<size_t>(n));
            c.hi.resize(static_cast<size_t>(n));
            for (int k = 0; k < n; ++k) {
                const double h = region_.upper[static_cast<size_t>(k)] / per_axis;
                c.lo[static_cast<size_t>(k)] = idx[static_cast<size_t>(k)] * h;
                c.hi[static_cast<size_t>(k)] = (idx[static_cast<size_t>(k)] + 1) * h;
            }
            c.id = next_id_++;
            if (evaluate(c)) {
                ++cells_used;
                queue.push(std::move(c));
            }
            int ax = 0;
            for (; ax < n; ++ax) {
                if (++idx[static_cast<size_t>(ax)] < per_axis) break;
                idx[static_cast<size_t>(ax)] = 0;
            }
            if (ax == n) break;
        }

        // running totals
        Vec total(static_cast<size_t>(m_), {0.0, 0.0});
        double total_err = 0.0;
        {
            auto q2 = queue;
            while (!q2.empty()) {
                add(total, q2.top().value);
                total_err += q2.top().error;
                q2.pop();
            }
        }

        auto tolerance_met = [&]() {
            double vmax = 0.0;
            for (const auto& v : total) vmax = std::max(vmax, std::abs(v));
            return total_err <= std::max(opts_.rel_tol * vmax, opts_.abs_tol);
        };

        while (!tolerance_met() && !queue.empty() && cells_used < opts_.max_cells) {
            Cell worst = queue.top();
            queue.pop();
            if (worst.depth >= opts_.max_depth) {
                retired.push_back(std::move(worst));  // keeps its contribution
                continue;
            }
            // remove its contribution, add children
            sub(total, worst.value);
            total_err -= worst.error;
            const long children = 1L << n;
            for (long ci = 0; ci < children; ++ci) {
                Cell child;
                child.lo.resize(static_cast<size_t>(n));
                child.hi.resize(static_cast<size_t>(n));
                for (int k = 0; k < n; ++k) {
                    const double mid = 0.5 * (worst.lo[static_cast<size_t>(k)] +
                                              worst.hi[static_cast<size_t>(k)]);
                    if ((ci >> k) & 1) {
                        child.lo[static_cast<size_t>(k)] = mid;
                        child.hi[static_cast<size_t>(k)] = worst.hi[static_cast<size_t>(k)];
                    } else {
                        child.lo[static_cast<size_t>(k)] = worst.lo[static_cast<size_t>(k)];
                        child.hi[static_cast<size_t>(k)] = mid;
                    }
                }
                child.depth = worst.depth + 1;
                child.id = next_id_++;
                if (evaluate(child)) {
                    ++cells_used;
                    add(total, child.value);
                    total_err += child.error;
                    queue.push(std::move(child));
                }
            }
        }

        // canonical accumulation: sum leaves in id order
        std::vector<Cell> leaves = std::move(retired);
        while (!queue.empty()) {
            leaves.push_back(queue.top());
            queue.pop();
        }
        std::sort(leaves.begin(), leaves.end(),
                  [](const Cell& a, const Cell& b) { return a.id < b.id; });
        VectorQuadratureResult res;
        res.value.assign(static_cast<size_t>(m_), {0.0, 0.0});
        res.error_estimate = 0.0;
        for (const auto& c : leaves) {
            add(res.value, c.value);
            res.error_estimate += c.error;
        }
        res.cells_used = cells_used;
        double vmax = 0.0;
        for (const auto& v : res.value) vmax = std::max(vmax, std::abs(v));
        res.converged = res.error_estimate <= std::max(opts_.rel_tol * vmax, opts_.abs_tol);
        return res;
    }

private:
    static void add(Vec& a, const Vec& b) {
        for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    }
    static void sub(Vec& a, const Vec& b) {
        for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    }

    CellClass classify(const Cell& c) const {
        // Downward closure: upper corner inside => whole cell inside; lower
        // corner outside => whole cell outside.
        if (region_.inside(c.hi)) return CellClass::Inside;
        if (!region_.inside(c.lo)) return CellClass::Outside;
        return CellClass::Straddle;
    }

    double measure_factor(const std::vector<double>& x) const {
        if (measure_ == MeasureMode::Lebesgue) return 1.0;
        double v = 1.0;
        for (double xv : x) v *= xv;
        return v;
    }

    void eval_point(const std::vector<double>& x, double w, Vec& acc) {
        f_(x, scratch_.data());
        const double factor = w * measure_factor(x);
        for (int i = 0; i < m_; ++i) {
            const auto v = scratch_[static_cast<size_t>(i)];
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::runtime_error("quadrature: integrand non-finite at a node");
            acc[static_cast<size_t>(i)] += factor * v;
        }
    }

    // Tensor GL over the full box.
    Vec tensor_box(const Cell& c, int order) {
        const int n = region_.dim;
        const GaussRule& rule = gauss_legendre(order);
        Vec acc(static_cast<size_t>(m_), {0.0, 0.0});
        std::vector<int> idx(static_cast<size_t>(n), 0);
        std::vector<double> x(static_cast<size_t>(n));
        while (true) {
            double w = 1.0;
            for (int k = 0; k < n; ++k) {
                const double a = c.lo[static_cast<size_t>(k)], b = c.hi[static_cast<size_t>(k)];
                const double half = 0.5 * (b - a);
                x[static_cast<size_t>(k)] =
                    0.5 * (a + b) + half * rule.nodes[static_cast<size_t>(idx[static_cast<size_t>(k)])];
                w *= half * rule.weights[static_cast<size_t>(idx[static_cast<size_t>(k)])];
            }
            eval_point(x, w, acc);
            int ax = 0;
            for (; ax < n; ++ax) {
                if (++idx[static_cast<size_t>(ax)] < order) break;
                idx[static_cast<size_t>(ax)] = 0;
            }
            if (ax == n) break;
        }
        return acc;
    }

    // Boundary crossing along the last axis above the outer point: largest t
    // in [lo_n, hi_n] still inside, located by bisection (membership is
    // monotone along each axis by downward closure).
    double crossing(std::vector<double>& x, double lo, double hi) const {
        const size_t last = static_cast<size_t>(region_.dim - 1);
        x[last] = hi;
        if (region_.inside(x)) return hi;
        x[last] = lo;
        if (!region_.inside(x)) return lo;
        double a = lo, b = hi;
        const double scale = std::max(1.0, std::abs(hi));
        while (b - a > 1e-15 * scale) {
            const double mid = 0.5 * (a + b);
            x[last] = mid;
            if (region_.inside(x))
                a = mid;
            else
                b = mid;
        }
        return a;
    }

    // Inner GL panel over [a, b] at fixed outer coordinates.
    void inner_panel(std::vector<double>& x, double a, double b, double w_outer, int order,
                     Vec& acc) {
        if (!(b > a)) return;
        const GaussRule& rule = gauss_legendre(order);
        const size_t last = static_cast<size_t>(region_.dim - 1);
        const double half = 0.5 * (b - a);
        for (int j = 0; j < order; ++j) {
            x[last] = 0.5 * (a + b) + half * rule.nodes[static_cast<size_t>(j)];
            eval_point(x, w_outer * half * rule.weights[static_cast<size_t>(j)], acc);
        }
    }

    // Largest x1 in [a, b] for which pred still holds; pred is monotone
    // (true below, false above) by downward closure.
    template <class Pred>
    static double outer_crossing(double a, double b, const Pred& pred) {
        if (pred(b)) return b;
        if (!pred(a)) return a;
        double lo = a, hi = b;
        const double scale = std::max(1.0, std::abs(b));
        while (hi - lo > 1e-15 * scale) {
            const double mid = 0.5 * (lo + hi);
            if (pred(mid))
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }

    // GL over the cell with the inner (last) axis clipped to the region.
    // For 2-d regions the outer interval is first split at the (unique, by
    // monotonicity of the boundary graph) points where the boundary exits
    // through the top and bottom cell edges, so each segment has a smooth
    // integrand and the GL15/GL7 estimate stays sharp.
    Vec tensor_resolved(const Cell& c, int order) {
        const int n = region_.dim;
        Vec acc(static_cast<size_t>(m_), {0.0, 0.0});
        const size_t last = static_cast<size_t>(n - 1);
        std::vector<double> x(static_cast<size_t>(n));

        if (n == 1) {
            const double t_max = crossing(x, c.lo[0], c.hi[0]);
            inner_panel(x, c.lo[0], t_max, 1.0, order, acc);
            return acc;
        }

        if (n == 2) {
            const double a1 = c.lo[0], b1 = c.hi[0];
            const double a2 = c.lo[1], b2 = c.hi[1];
            auto column_full = [&](double x1) {
                std::vector<double> p{x1, b2};
                return region_.inside(p);
            };
            auto column_occupied = [&](double x1) {
                std::vector<double> p{x1, a2};
                return region_.inside(p);
            };
            const double x_top = outer_crossing(a1, b1, column_full);
            const double x_bot = outer_crossing(std::max(x_top, a1), b1, column_occupied);
            const GaussRule& rule = gauss_legendre(order);
            // full columns on [a1, x_top]
            if (x_top > a1) {
                const double half = 0.5 * (x_top - a1);
                for (int j = 0; j < order; ++j) {
                    x[0] = 0.5 * (a1 + x_top) + half * rule.nodes[static_cast<size_t>(j)];
                    inner_panel(x, a2, b2, half * rule.weights[static_cast<size_t>(j)], order, acc);
                }
            }
            // graph columns on [x_top, x_bot]
            if (x_bot > x_top) {
                const double half = 0.5 * (x_bot - x_top);
                for (int j = 0; j < order; ++j) {
                    x[0] = 0.5 * (x_top + x_bot) + half * rule.nodes[static_cast<size_t>(j)];
                    const double t_max = crossing(x, a2, b2);
                    inner_panel(x, a2, t_max, half * rule.weights[static_cast<size_t>(j)], order,
                                acc);
                }
            }
            return acc;
        }

        // n >= 3: clipped columns without outer segmentation.
        const GaussRule& rule = gauss_legendre(order);
        std::vector<int> idx(static_cast<size_t>(n - 1), 0);
        while (true) {
            double w_outer = 1.0;
            for (int k = 0; k + 1 < n; ++k) {
                const double a = c.lo[static_cast<size_t>(k)], b = c.hi[static_cast<size_t>(k)];
                const double half = 0.5 * (b - a);
                x[static_cast<size_t>(k)] =
                    0.5 * (a + b) + half * rule.nodes[static_cast<size_t>(idx[static_cast<size_t>(k)])];
                w_outer *= half * rule.weights[static_cast<size_t>(idx[static_cast<size_t>(k)])];
            }
            const double t_max = crossing(x, c.lo[last], c.hi[last]);
            inner_panel(x, c.lo[last], t_max, w_outer, order, acc);
            int ax = 0;
            for (; ax + 1 < n; ++ax) {
                if (++idx[static_cast<size_t>(ax)] < order) break;
                idx[static_cast<size_t>(ax)] = 0;
            }
            if (ax + 1 == n) break;
        }
        return acc;
    }

    // Returns false when the cell is entirely outside (dropped).
    bool evaluate(Cell& c) {
        const CellClass cls = classify(c);
        if (cls == CellClass::Outside) return false;
        Vec high, low;
        if (cls == CellClass::Inside) {
            high = tensor_box(c, kHighOrder);
            low = tensor_box(c, kLowOrder);
        } else {
            high = tensor_resolved(c, kHighOrder);
            low = tensor_resolved(c, kLowOrder);
        }
        double err = 0.0;
        for (int i = 0; i < m_; ++i)
            err = std::max(err,
                           std::abs(high[static_cast<size_t>(i)] - low[static_cast<size_t>(i)]));
        c.value = std::move(high);
        c.error = err;
        return true;
    }

    const Region& region_;
    MeasureMode measure_;
    int m_;
    const std::function<void(const std::vector<double>&, std::complex<double>*)>& f_;
    QuadratureOptions opts_;
    long next_id_ = 0;
    Vec scratch_;
};

}  // namespace

Region Region::from_base(const DomainSpec& spec) {
    Region r;
    r.dim = spec.dimension;
    r.upper = spec.base_bounding_box;
    auto member = spec.base_membership;
    r.inside = [member](const std::vector<double>& x) {
        RadialPoint p;
        p.r = x;
        return member(p);
    };
    return r;
}

Region Region::from_base_squared(const DomainSpec& spec) {
    Region r;
    r.dim = spec.dimension;
    r.upper.reserve(spec.base_bounding_box.size());
    for (double u : spec.base_bounding_box) r.upper.push_back(u * u);
    auto member = spec.base_membership;
    r.inside = [member](const std::vector<double>& s) {
        RadialPoint p;
        p.r.reserve(s.size());
        for (double v : s) p.r.push_back(std::sqrt(std::max(v, 0.0)));
        return member(p);
    };
    return r;
}

Region Region::intersect_ball(double radius) const {
    Region r;
    r.dim = dim;
    r.upper.reserve(upper.size());
    for (double u : upper) r.upper.push_back(std::min(u, radius));
    auto base = inside;
    const double r2 = radius * radius;
    r.inside = [base, r2](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s < r2 && base(x);
    };
    return r;
}

VectorQuadratureResult integrate_region(
    const Region& region, MeasureMode measure, int components,
    const std::function<void(const std::vector<double>&, std::complex<double>*)>& integrand,
    const QuadratureOptions& opts) {
    if (region.dim < 1) throw std::invalid_argument("integrate_region: dimension must be >= 1");
    if (components < 1) throw std::invalid_argument("integrate_region: need >= 1 component");
    if (!(opts.rel_tol > 0.0)) throw std::invalid_argument("integrate_region: rel_tol must be > 0");
    if (opts.max_cells < 1) throw std::invalid_argument("integrate_region: budget must be >= 1");
    Engine engine(region, measure, components, integrand, opts);
    return engine.run();
}

QuadratureResult integrate_base(const DomainSpec& spec,
                                const std::function<double(const RadialPoint&)>& integrand,
                                const QuadratureOptions& opts) {
    const Region region = Region::from_base(spec);
    auto f = [&integrand](const std::vector<double>& x, std::complex<double>* out) {
        RadialPoint p;
        p.r = x;
        out[0] = integrand(p);
    };
    const VectorQuadratureResult vr = integrate_region(region, MeasureMode::Radial, 1, f, opts);
    return QuadratureResult{vr.value[0].real(), vr.error_estimate, vr.cells_used, vr.converged};
}

namespace {

AngularGrid make_angular_grid(int n, int degree) {
    AngularGrid grid;
    int nodes = 2 * std::max(degree, 0) + 1;
    if (nodes < 3) nodes = 3;
    grid.nodes_per_axis = nodes;
    grid.weight = std::pow(2.0 * M_PI / nodes, n);
    grid.theta.resize(static_cast<size_t>(nodes));
    for (int j = 0; j < nodes; ++j) grid.theta[static_cast<size_t>(j)] = 2.0 * M_PI * j / nodes;
    return grid;
}

}  // namespace

VectorQuadratureResult integrate_full_polar_batched(
    const Region& region, int dim, int components,
    const std::function<void(const RadialPoint&, const AngularGrid&, std::complex<double>*)>&
        radial_block,
    const QuadratureOptions& opts) {
    const AngularGrid grid = make_angular_grid(dim, opts.angular_degree);
    auto f = [&radial_block, &grid](const std::vector<double>& x, std::complex<double>* out) {
        RadialPoint p;
        p.r = x;
        radial_block(p, grid, out);
    };
    return integrate_region(region, MeasureMode::Radial, components, f, opts);
}

VectorQuadratureResult integrate_full_polar_batched(
    const DomainSpec& spec, int components,
    const std::function<void(const RadialPoint&, const AngularGrid&, std::complex<double>*)>&
        radial_block,
    const QuadratureOptions& opts) {
    return integrate_full_polar_batched(Region::from_base(spec), spec.dimension, components,
                                        radial_block, opts);
}

ComplexQuadratureResult integrate_full_polar(
    const DomainSpec& spec,
    const std::function<std::complex<double>(const PolarPoint&)>& integrand,
    const QuadratureOptions& opts) {
    const int n = spec.dimension;
    auto block = [n, &integrand](const RadialPoint& r, const AngularGrid& grid,
                                 std::complex<double>* out) {
        out[0] = {0.0, 0.0};
        const int nodes = grid.nodes_per_axis;
        std::vector<int> idx(static_cast<size_t>(n), 0);
        PolarPoint z(r, std::vector<double>(static_cast<size_t>(n), 0.0));
        while (true) {
            for (int k = 0; k < n; ++k)
                z.theta[static_cast<size_t>(k)] = grid.theta[static_cast<size_t>(idx[static_cast<size_t>(k)])];
            out[0] += grid.weight * integrand(z);
            int ax = 0;
            for (; ax < n; ++ax) {
                if (++idx[static_cast<size_t>(ax)] < nodes) break;
                idx[static_cast<size_t>(ax)] = 0;
            }
            if (ax == n) break;
        }
    };
    const VectorQuadratureResult vr = integrate_full_polar_batched(spec, 1, block, opts);
    return ComplexQuadratureResult{vr.value[0], vr.error_estimate, vr.cells_used, vr.converged};
}

QuadratureResult integrate_simplex(const std::function<double(const RadialPoint&)>& integrand,
                                   int n, double lambda, const QuadratureOptions& opts) {
    if (lambda <= -1.0) throw std::invalid_argument("integrate_simplex: lambda must be > -1");
    Region cube;
    cube.dim = n;
    cube.upper.assign(static_cast<size_t>(n), 1.0);
    cube.inside = [](const std::vector<double>&) { return true; };

    // Duffy: r_k = u_k (1 - r_1 - ... - r_{k-1}), Jacobian
    // prod_{j<n} (1-u_j)^{n-j}; weight (1 - sum r)^lambda = prod (1-u_j)^lambda.
    // Endpoint substitution u_j = 1 - v_j^2 turns each factor
    // (1-u_j)^{lambda+n-j} du_j into 2 v_j^{2(lambda+n-j)+1} dv_j.
    auto f = [n, lambda, &integrand](const std::vector<double>& v, std::complex<double>* out) {
        RadialPoint r;
        r.r.resize(static_cast<size_t>(n));
        double factor = 1.0;
        double remaining = 1.0;  // 1 - r_1 - ... - r_{k-1}
        for (int k = 0; k < n; ++k) {
            const double vk = v[static_cast<size_t>(k)];
            const double u = 1.0 - vk * vk;
            r.r[static_cast<size_t>(k)] = u * remaining;
            const double expo = 2.0 * (lambda + (n - 1 - k)) + 1.0;
            factor *= 2.0 * std::pow(vk, expo);
            remaining *= vk * vk;  // 1 - sum_{j<=k} r_j = prod_{j<=k} (1-u_j) = prod v_j^2
        }
        out[0] = factor * integrand(r);
    };
    const VectorQuadratureResult vr = integrate_region(cube, MeasureMode::Lebesgue, 1, f, opts);
    return QuadratureResult{vr.value[0].real(), vr.error_estimate, vr.cells_used, vr.converged};
}

}  // namespace rtoep

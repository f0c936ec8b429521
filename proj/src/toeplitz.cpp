#include "rtoep/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "rtoep/parallel.hpp"
#include "rtoep/special.hpp"

namespace rtoep {

double GammaSequence::at(const MultiIndex& p) const {
    auto it = values.find(p);
    if (it == values.end())
        throw std::out_of_range("GammaSequence: index " + p.str() + " outside truncation");
    return it->second;
}

namespace {

// int over tau(D) of a(r) r^{2p} mu(r) prod r_k dr_k for one symbol-tree
// node. Linear combinations distribute; annulus indicators restrict the
// region (exactly, via the downward-closed intersection) with a == 1.
QuadratureResult symbol_moment(const DomainSpec& domain, const SymbolNode& node,
                               const MultiIndex& p, const QuadratureOptions& opts_in) {
    const int n = domain.dimension;
    auto mu = domain.weight.evaluate;

    // power and indicator integrands are non-negative: pure relative control
    // so tiny high-order values (4^{-(p+1)} scale) stay accurate; opaque
    // closures may change sign and keep the caller's absolute floor
    QuadratureOptions opts = opts_in;
    if (node.type != SymbolNode::Type::RadialClosure)
        opts.abs_tol = std::min(opts.abs_tol, 1e-280);

    switch (node.type) {
        case SymbolNode::Type::LinComb: {
            QuadratureResult total{0.0, 0.0, 0, true};
            for (const auto& [coef, sub] : node.terms) {
                const QuadratureResult part = symbol_moment(domain, *sub, p, opts_in);
                total.value += coef * part.value;
                total.error_estimate += std::abs(coef) * part.error_estimate;
                total.cells_used += part.cells_used;
                total.converged = total.converged && part.converged;
            }
            return total;
        }
        case SymbolNode::Type::Annulus: {
            // 1_{inner <= |r| < outer}: difference of two ball-restricted moments
            auto restricted = [&](double radius) -> QuadratureResult {
                if (radius <= 0.0) return {0.0, 0.0, 0, true};
                const Region region = Region::from_base(domain).intersect_ball(radius);
                auto f = [&p, mu, n](const std::vector<double>& x, std::complex<double>* out) {
                    RadialPoint r;
                    r.r = x;
                    double v = mu(r);
                    for (int k = 0; k < n; ++k)
                        for (int j = 0; j < 2 * p[k]; ++j) v *= x[static_cast<size_t>(k)];
                    out[0] = v;
                };
                const auto vr = integrate_region(region, MeasureMode::Radial, 1, f, opts);
                return {vr.value[0].real(), vr.error_estimate, vr.cells_used, vr.converged};
            };
            const QuadratureResult outer = restricted(node.outer);
            const QuadratureResult inner = restricted(node.inner);
            return {outer.value - inner.value, outer.error_estimate + inner.error_estimate,
                    outer.cells_used + inner.cells_used, outer.converged && inner.converged};
        }
        case SymbolNode::Type::Power:
        case SymbolNode::Type::RadialClosure: {
            auto f = [&node, &p, n](const RadialPoint& r) {
                double v = 1.0;
                for (int k = 0; k < n; ++k)
                    for (int j = 0; j < 2 * p[k]; ++j) v *= r[k];
                if (node.type == SymbolNode::Type::Power) {
                    for (int k = 0; k < node.exponents.dim(); ++k)
                        for (int j = 0; j < node.exponents[k]; ++j) v *= r[k];
                } else {
                    v *= node.radial_fn(r);
                }
                return v;
            };
            auto weighted = [f, mu](const RadialPoint& r) { return f(r) * mu(r); };
            return integrate_base(domain, weighted, opts);
        }
        case SymbolNode::Type::AngularReZ:
            throw std::invalid_argument("compute_gamma: symbol is not separately radial");
    }
    throw std::logic_error("symbol_moment: unreachable");
}

}  // namespace

GammaSequence compute_gamma(const DomainSpec& domain, const SymbolSpec& a, int truncation,
                            const QuadratureOptions& opts) {
    if (a.kind != SymbolSpec::Kind::SeparatelyRadial)
        throw std::invalid_argument("compute_gamma: symbol must be separately radial");
    GammaSequence g;
    g.domain = domain;
    g.symbol = a;
    g.truncation = truncation;
    const NormalizationTable table = compute_alpha(domain, truncation, opts);
    const std::vector<MultiIndex> indices = multi_indices_upto(domain.dimension, truncation);
    std::vector<QuadratureResult> moments(indices.size());
    parallel_for(static_cast<long>(indices.size()), [&](long i) {
        moments[static_cast<size_t>(i)] =
            symbol_moment(domain, *a.root, indices[static_cast<size_t>(i)], opts);
    });
    for (size_t i = 0; i < indices.size(); ++i) {
        const MultiIndex& p = indices[i];
        const double alpha = table.at(p);
        g.values[p] = alpha * alpha * moments[i].value;
        g.error_estimate[p] = alpha * alpha * moments[i].error_estimate;
        if (!moments[i].converged) g.all_converged = false;
    }
    return g;
}

GammaSequence compute_gamma_ball(int n, double lambda, const SymbolSpec& a, int truncation,
                                 const QuadratureOptions& opts) {
    if (lambda <= -1.0) throw std::invalid_argument("compute_gamma_ball: lambda must be > -1");
    if (a.kind != SymbolSpec::Kind::SeparatelyRadial)
        throw std::invalid_argument("compute_gamma_ball: symbol must be separately radial");
    GammaSequence g;
    g.domain = catalog_lookup("ball-lambda", n, {.lambda = lambda});
    g.symbol = a;
    g.truncation = truncation;
    for (const MultiIndex& p : multi_indices_upto(n, truncation)) {
        // gamma = Gamma(n+|p|+lambda+1)/(p! Gamma(lambda+1)) *
        //         int over the simplex of a(sqrt(r)) r^p (1-sum r)^lambda dr
        auto f = [&a, &p, n](const RadialPoint& s) {
            RadialPoint root;
            root.r.reserve(static_cast<size_t>(n));
            double v = 1.0;
            for (int k = 0; k < n; ++k) {
                root.r.push_back(std::sqrt(std::max(s[k], 0.0)));
                for (int j = 0; j < p[k]; ++j) v *= s[k];
            }
            return v * a.eval_radial(root);
        };
        const QuadratureResult integral = integrate_simplex(f, n, lambda, opts);
        const double prefactor = std::exp(log_gamma(n + p.order() + lambda + 1.0) -
                                          p.log_factorial() - log_gamma(lambda + 1.0));
        g.values[p] = prefactor * integral.value;
        g.error_estimate[p] = prefactor * integral.error_estimate;
        if (!integral.converged) g.all_converged = false;
    }
    return g;
}

double OperatorMatrix::max_off_diagonal() const {
    double v = 0.0;
    const int m = size();
    for (int q = 0; q < m; ++q)
        for (int p = 0; p < m; ++p)
            if (p != q) v = std::max(v, std::abs(at(q, p)));
    return v;
}

double OperatorMatrix::max_hermitian_defect() const {
    double v = 0.0;
    const int m = size();
    for (int q = 0; q < m; ++q)
        for (int p = q; p < m; ++p)
            v = std::max(v, std::abs(at(q, p) - std::conj(at(p, q))));
    return v;
}

OperatorMatrix matrix_from_gamma(const GammaSequence& gamma) {
    OperatorMatrix M;
    M.index_set = multi_indices_upto(gamma.domain.dimension, gamma.truncation);
    const size_t m = M.index_set.size();
    M.entries.assign(m * m, {0.0, 0.0});
    for (size_t i = 0; i < m; ++i) M.entries[i * m + i] = gamma.at(M.index_set[i]);
    M.method = "diagonal-from-gamma";
    return M;
}

namespace {

// One brute-force oracle pass: entries[q][p] = int a e_p conj(e_q) mu dv for
// a single symbol-tree leaf, over an optionally restricted region. The
// angular transform is summed numerically at every torus node; nothing about
// the symbol's radial symmetry is used.
void oracle_accumulate(const DomainSpec& domain, const SymbolNode& node, double coefficient,
                       const NormalizationTable& table, const std::vector<MultiIndex>& indices,
                       const QuadratureOptions& opts, std::vector<std::complex<double>>& acc,
                       double& err, long& cells, bool& converged) {
    const int n = domain.dimension;
    const int m = static_cast<int>(indices.size());
    auto mu = domain.weight.evaluate;

    if (node.type == SymbolNode::Type::LinComb) {
        for (const auto& [c, sub] : node.terms)
            oracle_accumulate(domain, *sub, coefficient * c, table, indices, opts, acc, err, cells,
                              converged);
        return;
    }

    // region restriction for indicator factors; a == 1 on the restriction
    Region region = Region::from_base(domain);
    bool annulus_inner = false;
    double inner_radius = 0.0;
    if (node.type == SymbolNode::Type::Annulus) {
        region = region.intersect_ball(node.outer);
        if (node.inner > 0.0) {
            annulus_inner = true;
            inner_radius = node.inner;
        }
    }

    const int max_order = table.truncation;
    auto block = [&](const RadialPoint& r, const AngularGrid& grid, std::complex<double>* out) {
        for (int i = 0; i < m * m; ++i) out[i] = {0.0, 0.0};
        const int nodes = grid.nodes_per_axis;
        const double w_mu = grid.weight * mu(r);
        PolarPoint z(r, std::vector<double>(static_cast<size_t>(n), 0.0));
        std::vector<int> idx(static_cast<size_t>(n), 0);
        std::vector<std::vector<std::complex<double>>> zpow(
            static_cast<size_t>(n),
            std::vector<std::complex<double>>(static_cast<size_t>(max_order + 1)));
        std::vector<std::complex<double>> basis(static_cast<size_t>(m));
        while (true) {
            for (int k = 0; k < n; ++k) {
                z.theta[static_cast<size_t>(k)] =
                    grid.theta[static_cast<size_t>(idx[static_cast<size_t>(k)])];
                const std::complex<double> zk = z.z(k);
                zpow[static_cast<size_t>(k)][0] = {1.0, 0.0};
                for (int j = 1; j <= max_order; ++j)
                    zpow[static_cast<size_t>(k)][static_cast<size_t>(j)] =
                        zpow[static_cast<size_t>(k)][static_cast<size_t>(j - 1)] * zk;
            }
            double a_val = 1.0;
            switch (node.type) {
                case SymbolNode::Type::Power:
                    for (int k = 0; k < node.exponents.dim(); ++k)
                        for (int j = 0; j < node.exponents[k]; ++j) a_val *= r[k];
                    break;
                case SymbolNode::Type::Annulus:
                    a_val = 1.0;  // indicator folded into the region
                    break;
                case SymbolNode::Type::AngularReZ:
                    a_val = z.z(node.axis).real();
                    break;
                case SymbolNode::Type::RadialClosure:
                    a_val = node.radial_fn(r);
                    break;
                case SymbolNode::Type::LinComb:
                    throw std::logic_error("oracle: nested lincomb handled above");
            }
            for (int i = 0; i < m; ++i) {
                std::complex<double> e{1.0, 0.0};
                const MultiIndex& p = indices[static_cast<size_t>(i)];
                for (int k = 0; k < n; ++k)
                    e *= zpow[static_cast<size_t>(k)][static_cast<size_t>(p[k])];
                basis[static_cast<size_t>(i)] = e;  // z^p; alpha prefactors applied later
            }
            const double w_a = w_mu * a_val;
            for (int q = 0; q < m; ++q) {
                const std::complex<double> eq = std::conj(basis[static_cast<size_t>(q)]) * w_a;
                for (int p = 0; p < m; ++p)
                    out[q * m + p] += eq * basis[static_cast<size_t>(p)];
            }
            int ax = 0;
            for (; ax < n; ++ax) {
                if (++idx[static_cast<size_t>(ax)] < nodes) break;
                idx[static_cast<size_t>(ax)] = 0;
            }
            if (ax == n) break;
        }
    };

    auto run_region = [&](const Region& reg, double sign) {
        QuadratureOptions popts = opts;
        // frequencies: |p_k - q_k| <= P, plus 1 for the angular symbol;
        // 2P + 2 keeps the trapezoid rule exact with margin
        if (popts.angular_degree < 2 * max_order + 2) popts.angular_degree = 2 * max_order + 2;
        const VectorQuadratureResult vr =
            integrate_full_polar_batched(reg, n, m * m, block, popts);
        for (int i = 0; i < m * m; ++i)
            acc[static_cast<size_t>(i)] += sign * coefficient * vr.value[static_cast<size_t>(i)];
        err += std::abs(coefficient) * vr.error_estimate;
        cells += vr.cells_used;
        converged = converged && vr.converged;
    };

    run_region(region, 1.0);
    if (annulus_inner) run_region(Region::from_base(domain).intersect_ball(inner_radius), -1.0);
}

}  // namespace

OperatorMatrix matrix_oracle(const DomainSpec& domain, const SymbolSpec& a, int truncation,
                             const QuadratureOptions& opts) {
    OperatorMatrix M;
    M.index_set = multi_indices_upto(domain.dimension, truncation);
    const int m = static_cast<int>(M.index_set.size());
    M.entries.assign(static_cast<size_t>(m) * m, {0.0, 0.0});
    M.method = "oracle-integration";

    const NormalizationTable table = compute_alpha(domain, truncation, opts);
    double err = 0.0;
    long cells = 0;
    bool converged = true;
    oracle_accumulate(domain, *a.root, 1.0, table, M.index_set, opts, M.entries, err, cells,
                      converged);
    // fold in the (2 pi)^{-n} alpha_p alpha_q basis normalization
    const double front = std::pow(2.0 * M_PI, -domain.dimension);
    for (int q = 0; q < m; ++q)
        for (int p = 0; p < m; ++p)
            M.entries[static_cast<size_t>(q) * m + p] *=
                front * table.at(M.index_set[static_cast<size_t>(p)]) *
                table.at(M.index_set[static_cast<size_t>(q)]);
    M.error_estimate = err;
    M.converged = converged;
    return M;
}

double commutator_norm(const OperatorMatrix& A, const OperatorMatrix& B) {
    if (A.index_set != B.index_set)
        throw std::invalid_argument("commutator_norm: operator truncations differ");
    const int m = A.size();
    double frob2 = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            std::complex<double> ab{0.0, 0.0}, ba{0.0, 0.0};
            for (int k = 0; k < m; ++k) {
                ab += A.at(i, k) * B.at(k, j);
                ba += B.at(i, k) * A.at(k, j);
            }
            frob2 += std::norm(ab - ba);
        }
    }
    return std::sqrt(frob2);
}

SpectralReport spectral_report(const GammaSequence& gamma, const SpectralOptions& opts) {
    if (gamma.values.empty()) throw std::invalid_argument("spectral_report: empty sequence");
    SpectralReport rep;
    const int P = gamma.truncation;
    rep.shell_max.assign(static_cast<size_t>(P + 1), 0.0);

    std::vector<double> all;
    std::vector<double> outer;  // shells P-2..P
    for (const auto& [p, v] : gamma.values) {
        rep.operator_norm_estimate = std::max(rep.operator_norm_estimate, std::abs(v));
        rep.shell_max[static_cast<size_t>(p.order())] =
            std::max(rep.shell_max[static_cast<size_t>(p.order())], std::abs(v));
        all.push_back(v);
        if (p.order() >= P - 2) outer.push_back(v);
    }
    std::sort(all.begin(), all.end());
    for (double v : all) {
        if (rep.spectrum_sample.empty() ||
            std::abs(v - rep.spectrum_sample.back()) > opts.distinct_tol)
            rep.spectrum_sample.push_back(v);
    }

    // cluster outer-shell values by the absolute gap threshold; report means
    std::sort(outer.begin(), outer.end());
    size_t start = 0;
    for (size_t i = 1; i <= outer.size(); ++i) {
        if (i == outer.size() || outer[i] - outer[i - 1] > opts.cluster_gap) {
            double mean = 0.0;
            for (size_t j = start; j < i; ++j) mean += outer[j];
            rep.essential_spectrum_estimate.push_back(mean / static_cast<double>(i - start));
            start = i;
        }
    }

    rep.outer_shell_max = rep.shell_max[static_cast<size_t>(P)];
    rep.compact_verdict = rep.outer_shell_max < opts.compactness_threshold;
    return rep;
}

std::string gamma_sequence_csv(const GammaSequence& gamma) {
    std::ostringstream os;
    const int n = gamma.domain.dimension;
    for (int k = 1; k <= n; ++k) os << "p_" << k << ",";
    os << "gamma\n";
    char buf[64];
    for (const auto& [p, v] : gamma.values) {
        for (int k = 0; k < n; ++k) os << p[k] << ",";
        std::snprintf(buf, sizeof(buf), "%.16e", v);
        os << buf << "\n";
    }
    return os.str();
}

std::string spectral_report_json(const SpectralReport& rep) {
    std::ostringstream os;
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.16e", v);
        return std::string(buf);
    };
    os << "{\"norm\":" << num(rep.operator_norm_estimate) << ",\"spectrum\":[";
    for (size_t i = 0; i < rep.spectrum_sample.size(); ++i)
        os << (i ? "," : "") << num(rep.spectrum_sample[i]);
    os << "],\"essential\":[";
    for (size_t i = 0; i < rep.essential_spectrum_estimate.size(); ++i)
        os << (i ? "," : "") << num(rep.essential_spectrum_estimate[i]);
    os << "],\"compact\":" << (rep.compact_verdict ? "true" : "false")
       << ",\"outer_shell_max\":" << num(rep.outer_shell_max) << "}";
    return os.str();
}

}  // namespace rtoep

#include "rtoep/bergman.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "rtoep/parallel.hpp"
#include "rtoep/special.hpp"

namespace rtoep {

double NormalizationTable::at(const MultiIndex& p) const {
    auto it = alpha.find(p);
    if (it == alpha.end())
        throw std::out_of_range("NormalizationTable: index " + p.str() + " outside truncation");
    return it->second;
}

double ball_alpha_closed_form(int n, double lambda, const MultiIndex& p) {
    const double log_a2 = n * std::log(2.0 * M_PI) + log_gamma(n + p.order() + lambda + 1.0) -
                          p.log_factorial() - log_gamma(n + lambda + 1.0);
    return std::exp(0.5 * log_a2);
}

namespace {

// Moment integral m_q = int over tau(D) of r^{2q} mu(r) prod r_k dr_k.
// Ball domains go through the Duffy simplex route (exact geometry, the
// endpoint substitution absorbs the weight singularity); everything else
// uses the s_k = r_k^2 Lebesgue route over the squared base.
QuadratureResult moment_integral(const DomainSpec& domain, const MultiIndex& q,
                                 const QuadratureOptions& opts_in) {
    const int n = domain.dimension;
    // moments are integrals of positive integrands; drop the absolute floor
    // so high-order moments (values far below 1e-14) still converge to the
    // relative tolerance
    QuadratureOptions opts = opts_in;
    opts.abs_tol = std::min(opts.abs_tol, 1e-280);
    if (domain.is_ball) {
        const double lambda = domain.lambda;
        const double c_lambda =
            std::exp(log_gamma(n + lambda + 1.0) - log_gamma(lambda + 1.0) - n * std::log(M_PI));
        auto f = [&q, n](const RadialPoint& s) {
            double v = 1.0;
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < q[k]; ++j) v *= s[k];
            return v;
        };
        QuadratureResult res = integrate_simplex(f, n, lambda, opts);
        const double scale = c_lambda * std::pow(0.5, n);
        res.value *= scale;
        res.error_estimate *= scale;
        return res;
    }
    const Region region = Region::from_base_squared(domain);
    auto mu = domain.weight.evaluate;
    auto f = [&q, mu, n](const std::vector<double>& s, std::complex<double>* out) {
        double v = 1.0;
        RadialPoint r;
        r.r.resize(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) {
            r.r[static_cast<size_t>(k)] = std::sqrt(std::max(s[static_cast<size_t>(k)], 0.0));
            for (int j = 0; j < q[k]; ++j) v *= s[static_cast<size_t>(k)];
        }
        out[0] = v * mu(r);
    };
    const VectorQuadratureResult vr =
        integrate_region(region, MeasureMode::Lebesgue, 1, f, opts);
    const double scale = std::pow(0.5, n);
    return QuadratureResult{vr.value[0].real() * scale, vr.error_estimate * scale, vr.cells_used,
                            vr.converged};
}

}  // namespace

NormalizationTable compute_alpha(const DomainSpec& domain, int truncation,
                                 const QuadratureOptions& opts) {
    if (truncation < 0) throw std::invalid_argument("compute_alpha: truncation must be >= 0");
    NormalizationTable table;
    table.domain = domain;
    table.truncation = truncation;
    table.method = "quadrature";

    const std::vector<MultiIndex> indices = multi_indices_upto(domain.dimension, truncation);
    std::vector<QuadratureResult> moments(indices.size());
    parallel_for(static_cast<long>(indices.size()), [&](long i) {
        moments[static_cast<size_t>(i)] = moment_integral(domain, indices[static_cast<size_t>(i)], opts);
    });

    for (size_t i = 0; i < indices.size(); ++i) {
        const MultiIndex& p = indices[i];
        const QuadratureResult& m = moments[i];
        if (!(m.value > 0.0))
            throw std::runtime_error("compute_alpha: non-positive moment at p=" + p.str());
        table.alpha[p] = 1.0 / std::sqrt(m.value);
        // relative error of alpha is half the relative error of the moment
        table.error_estimate[p] = 0.5 * (m.error_estimate / m.value) * table.alpha[p];
        if (!m.converged) table.all_converged = false;
        if (domain.is_ball)
            table.alpha_closed[p] = ball_alpha_closed_form(domain.dimension, domain.lambda, p);
    }
    return table;
}

std::complex<double> basis_eval(const NormalizationTable& table, const MultiIndex& p,
                                const PolarPoint& z) {
    const double alpha = table.at(p);
    std::complex<double> zp{1.0, 0.0};
    for (int k = 0; k < p.dim(); ++k)
        for (int j = 0; j < p[k]; ++j) zp *= z.z(k);
    const int n = table.domain.dimension;
    return std::pow(2.0 * M_PI, -0.5 * n) * alpha * zp;
}

KernelSeries make_kernel_series(NormalizationTable table) {
    KernelSeries s;
    s.truncation = table.truncation;
    s.table = std::move(table);
    return s;
}

std::complex<double> kernel_eval(const KernelSeries& series, const PolarPoint& z,
                                 const PolarPoint& zeta) {
    const int n = series.table.domain.dimension;
    std::complex<double> sum{0.0, 0.0};
    for (const auto& [p, alpha] : series.table.alpha) {
        std::complex<double> term{1.0, 0.0};
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < p[k]; ++j) term *= z.z(k) * std::conj(zeta.z(k));
        sum += alpha * alpha * term;
    }
    return std::pow(2.0 * M_PI, -n) * sum;
}

std::complex<double> ball_kernel_closed_form(int n, double lambda, const PolarPoint& z,
                                             const PolarPoint& zeta) {
    std::complex<double> dot{0.0, 0.0};
    for (int k = 0; k < n; ++k) dot += z.z(k) * std::conj(zeta.z(k));
    return std::pow(std::complex<double>{1.0, 0.0} - dot, -(n + 1.0 + lambda));
}

double CoefficientVector::norm() const {
    double s = 0.0;
    for (const auto& [p, c] : entries) s += std::norm(c);
    return std::sqrt(s);
}

std::complex<double> CoefficientVector::at(const MultiIndex& p) const {
    auto it = entries.find(p);
    return it == entries.end() ? std::complex<double>{0.0, 0.0} : it->second;
}

CoefficientVector CoefficientVector::unit(const MultiIndex& p) {
    CoefficientVector c;
    c.entries[p] = {1.0, 0.0};
    return c;
}

std::complex<double> apply_Rstar(const NormalizationTable& table, const CoefficientVector& c,
                                 const PolarPoint& z) {
    const int n = table.domain.dimension;
    std::complex<double> sum{0.0, 0.0};
    for (const auto& [p, cp] : c.entries) {
        if (table.alpha.find(p) == table.alpha.end())
            throw std::out_of_range("apply_Rstar: coefficient support outside the table");
        std::complex<double> zp{1.0, 0.0};
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < p[k]; ++j) zp *= z.z(k);
        sum += table.at(p) * cp * zp;
    }
    return std::pow(2.0 * M_PI, -0.5 * n) * sum;
}

ApplyRResult apply_R(const NormalizationTable& table,
                     const std::function<std::complex<double>(const PolarPoint&)>& f,
                     const QuadratureOptions& opts) {
    const int n = table.domain.dimension;
    const std::vector<MultiIndex> indices = multi_indices_upto(n, table.truncation);
    const int m = static_cast<int>(indices.size());
    auto mu = table.domain.weight.evaluate;

    QuadratureOptions popts = opts;
    if (popts.angular_degree < 2 * table.truncation)
        popts.angular_degree = 2 * table.truncation + 2;  // covers f conj(z^p) products

    // c_p = (2 pi)^{-n/2} alpha_p * int f(z) conj(z)^p mu dv, all p in one pass
    auto block = [&](const RadialPoint& r, const AngularGrid& grid, std::complex<double>* out) {
        for (int i = 0; i < m; ++i) out[i] = {0.0, 0.0};
        const double w_mu = grid.weight * mu(r);
        const int nodes = grid.nodes_per_axis;
        std::vector<int> idx(static_cast<size_t>(n), 0);
        PolarPoint z(r, std::vector<double>(static_cast<size_t>(n), 0.0));
        // per-axis tables of conj(z_k)^j
        std::vector<std::vector<std::complex<double>>> conj_pow(
            static_cast<size_t>(n),
            std::vector<std::complex<double>>(static_cast<size_t>(table.truncation + 1)));
        while (true) {
            for (int k = 0; k < n; ++k) {
                z.theta[static_cast<size_t>(k)] =
                    grid.theta[static_cast<size_t>(idx[static_cast<size_t>(k)])];
                const std::complex<double> zc = std::conj(z.z(k));
                conj_pow[static_cast<size_t>(k)][0] = {1.0, 0.0};
                for (int j = 1; j <= table.truncation; ++j)
                    conj_pow[static_cast<size_t>(k)][static_cast<size_t>(j)] =
                        conj_pow[static_cast<size_t>(k)][static_cast<size_t>(j - 1)] * zc;
            }
            const std::complex<double> fv = w_mu * f(z);
            for (int i = 0; i < m; ++i) {
                std::complex<double> zp{1.0, 0.0};
                for (int k = 0; k < n; ++k)
                    zp *= conj_pow[static_cast<size_t>(k)][static_cast<size_t>(indices[static_cast<size_t>(i)][k])];
                out[i] += fv * zp;
            }
            int ax = 0;
            for (; ax < n; ++ax) {
                if (++idx[static_cast<size_t>(ax)] < nodes) break;
                idx[static_cast<size_t>(ax)] = 0;
            }
            if (ax == n) break;
        }
    };

    const VectorQuadratureResult vr = integrate_full_polar_batched(table.domain, m, block, popts);
    ApplyRResult res;
    const double front = std::pow(2.0 * M_PI, -0.5 * n);
    for (int i = 0; i < m; ++i) {
        const MultiIndex& p = indices[static_cast<size_t>(i)];
        res.coefficients.entries[p] = front * table.at(p) * vr.value[static_cast<size_t>(i)];
    }
    res.error_estimate = vr.error_estimate;
    res.converged = vr.converged;
    return res;
}

std::string normalization_table_csv(const NormalizationTable& table) {
    std::ostringstream os;
    const int n = table.domain.dimension;
    for (int k = 1; k <= n; ++k) os << "p_" << k << ",";
    os << "alpha_p,method,err_estimate\n";
    char buf[64];
    for (const auto& [p, alpha] : table.alpha) {
        for (int k = 0; k < n; ++k) os << p[k] << ",";
        std::snprintf(buf, sizeof(buf), "%.16e", alpha);
        os << buf << "," << table.method << ",";
        std::snprintf(buf, sizeof(buf), "%.16e", table.error_estimate.at(p));
        os << buf << "\n";
    }
    return os.str();
}

}  // namespace rtoep

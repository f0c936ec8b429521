#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>

#include "rtoep/domain.hpp"
#include "rtoep/quadrature.hpp"

namespace rtoep {

/// Normalization constants alpha_p = (integral of r^{2p} mu(r) prod r_k dr_k
/// over tau(D))^{-1/2} on the truncation set {|p| <= P}. For ball-lambda
/// domains the Gamma-ratio closed form is stored alongside the quadrature
/// values and cross-checked by the tests.
struct NormalizationTable {
    DomainSpec domain;
    int truncation = 0;
    std::map<MultiIndex, double> alpha;          // quadrature route
    std::map<MultiIndex, double> alpha_closed;   // ball only; empty otherwise
    std::map<MultiIndex, double> error_estimate; // per-index quadrature error
    std::string method;                          // "quadrature" | "gamma-closed-form"
    bool all_converged = true;

    double at(const MultiIndex& p) const;  // throws if p outside the table
};

NormalizationTable compute_alpha(const DomainSpec& domain, int truncation,
                                 const QuadratureOptions& opts = {});

/// Gamma-ratio closed form for the ball: alpha_p^2 = (2 pi)^n
/// Gamma(n+|p|+lambda+1) / (p! Gamma(n+lambda+1)), evaluated in log space.
double ball_alpha_closed_form(int n, double lambda, const MultiIndex& p);

/// e_p(z) = (2 pi)^{-n/2} alpha_p z^p.
std::complex<double> basis_eval(const NormalizationTable& table, const MultiIndex& p,
                                const PolarPoint& z);

/// Truncated Bergman kernel K_P(z, zeta) = (2 pi)^{-n} sum_{|p|<=P}
/// alpha_p^2 z^p conj(zeta)^p.
struct KernelSeries {
    NormalizationTable table;
    int truncation = 0;
};

KernelSeries make_kernel_series(NormalizationTable table);

std::complex<double> kernel_eval(const KernelSeries& series, const PolarPoint& z,
                                 const PolarPoint& zeta);

/// Weighted ball kernel (1 - sum z_k conj(zeta_k))^{-(n+1+lambda)}; the limit
/// of the series for the probability-normalized ball weight.
std::complex<double> ball_kernel_closed_form(int n, double lambda, const PolarPoint& z,
                                             const PolarPoint& zeta);

/// Finitely supported coefficient vector {c_p}.
struct CoefficientVector {
    std::map<MultiIndex, std::complex<double>> entries;

    double norm() const;  // l2
    std::complex<double> at(const MultiIndex& p) const;
    static CoefficientVector unit(const MultiIndex& p);
};

/// R* c = (2 pi)^{-n/2} sum alpha_p c_p z^p.
std::complex<double> apply_Rstar(const NormalizationTable& table, const CoefficientVector& c,
                                 const PolarPoint& z);

/// R f = { (2 pi)^{-n/2} alpha_p * integral of f(z) conj(z)^p mu(|z|) dv }.
/// One batched full-polar pass over all |p| <= truncation.
struct ApplyRResult {
    CoefficientVector coefficients;
    double error_estimate = 0.0;
    bool converged = false;
};

ApplyRResult apply_R(const NormalizationTable& table,
                     const std::function<std::complex<double>(const PolarPoint&)>& f,
                     const QuadratureOptions& opts = {});

/// CSV export: columns p_1..p_n, alpha_p, method, err_estimate.
std::string normalization_table_csv(const NormalizationTable& table);

}  // namespace rtoep

#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtoep/bergman.hpp"
#include "rtoep/domain.hpp"

namespace rtoep {

// ---------------------------------------------------------------------------
// Kernel-on-diagonal sources
// ---------------------------------------------------------------------------

/// K(z,z) as a function of r, with radial partials. All curvature and metric
/// quantities are derived from one of these sources; series-termwise partials
/// are exact for the truncation, the closed forms are exact, and finite
/// differences provide the independent cross-check route.
class RadialKernel {
public:
    virtual ~RadialKernel() = default;
    virtual int dim() const = 0;
    virtual double value(const RadialPoint& r) const = 0;
    virtual double d1(const RadialPoint& r, int k) const = 0;
    virtual double d2(const RadialPoint& r, int k, int l) const = 0;
    virtual double d3(const RadialPoint& r, int k) const = 0;  // pure third partial
    /// True when the source stays accurate arbitrarily close to the boundary
    /// (closed forms, manufactured kernels); false for truncated series.
    virtual bool exact_near_boundary() const { return false; }
};

/// Termwise-differentiated truncated kernel series K(r) = (2 pi)^{-n}
/// sum alpha_p^2 r^{2p}.
class SeriesKernel : public RadialKernel {
public:
    explicit SeriesKernel(NormalizationTable table);
    int dim() const override { return table_.domain.dimension; }
    double value(const RadialPoint& r) const override;
    double d1(const RadialPoint& r, int k) const override;
    double d2(const RadialPoint& r, int k, int l) const override;
    double d3(const RadialPoint& r, int k) const override;

private:
    NormalizationTable table_;
    double sum_derivative(const RadialPoint& r, const std::vector<int>& orders) const;
};

/// Closed-form weighted ball kernel on the diagonal:
/// K(r) = (1 - sum r_j^2)^{-(n+1+lambda)}.
class BallKernel : public RadialKernel {
public:
    BallKernel(int n, double lambda = 0.0) : n_(n), lambda_(lambda) {}
    int dim() const override { return n_; }
    double value(const RadialPoint& r) const override;
    double d1(const RadialPoint& r, int k) const override;
    double d2(const RadialPoint& r, int k, int l) const override;
    double d3(const RadialPoint& r, int k) const override;
    bool exact_near_boundary() const override { return true; }

private:
    int n_;
    double lambda_;
    double power(const RadialPoint& r, int extra) const;  // (1-rho)^{-(n+1+lambda+extra)}
};

// ---------------------------------------------------------------------------
// Multivariate polynomials (exact differentiable coefficient fields)
// ---------------------------------------------------------------------------

/// Sparse multivariate polynomial; the differentiable coefficient field used
/// by the Fefferman recursion.
class Poly {
public:
    explicit Poly(int n) : n_(n) {}
    static Poly constant(int n, double value);
    static Poly variable(int n, int axis);

    int dim() const { return n_; }
    bool is_zero() const { return coeff_.empty(); }
    Poly& add_term(const MultiIndex& m, double c);
    double eval(const RadialPoint& r) const;
    Poly derivative(int axis) const;

    Poly operator+(const Poly& other) const;
    Poly operator-(const Poly& other) const;
    Poly operator*(const Poly& other) const;
    Poly operator*(double scale) const;

private:
    int n_;
    std::map<MultiIndex, double> coeff_;
};

// ---------------------------------------------------------------------------
// Fefferman expansion K = phi * (-delta)^{-(n+1)} + psi * log(-delta)
// ---------------------------------------------------------------------------

struct FeffermanExpansion {
    int n = 0;  // complex dimension
    Poly phi;
    Poly psi;
    Poly delta;

    FeffermanExpansion(int n_, Poly phi_, Poly psi_, Poly delta_)
        : n(n_), phi(std::move(phi_)), psi(std::move(psi_)), delta(std::move(delta_)) {}

    double kernel_value(const RadialPoint& r) const;  // requires delta(r) < 0
};

/// Coefficient table of the partial-derivative recursion along one axis:
/// d^j K / d r_k^j = sum_l phi_jl (-delta)^{-(n+1+l)} + sum_{l>=1} psi_jl
/// delta^{-l} + psi_j0 log(-delta). The psi recursion carries the log-term
/// feed-in psi_j1 += psi_{j-1,0} * d delta/d r_k.
struct FeffermanTable {
    int n = 0;
    int axis = 0;
    int j_max = 0;
    Poly delta{1};
    std::vector<std::vector<Poly>> phi_jl;  // phi_jl[j][l], 0 <= l <= j
    std::vector<std::vector<Poly>> psi_jl;

    /// d^j K / d r_axis^j at r; j = 0 gives K itself. Throws at delta >= 0.
    double partial(int j, const RadialPoint& r) const;
};

FeffermanTable fefferman_coefficients(const FeffermanExpansion& exp, int axis, int j_max = 3);

/// RadialKernel view of a manufactured Fefferman kernel (pure partials per
/// axis only; mixed second partials are not provided by the recursion).
class FeffermanKernel : public RadialKernel {
public:
    FeffermanKernel(const FeffermanExpansion& exp, int dim_r);
    int dim() const override { return dim_r_; }
    double value(const RadialPoint& r) const override;
    double d1(const RadialPoint& r, int k) const override;
    double d2(const RadialPoint& r, int k, int l) const override;  // k == l only
    double d3(const RadialPoint& r, int k) const override;
    bool exact_near_boundary() const override { return true; }

private:
    int dim_r_;
    std::vector<FeffermanTable> tables_;  // one per axis
};

// ---------------------------------------------------------------------------
// Metric
// ---------------------------------------------------------------------------

enum class DerivativeMode { SeriesTermwise, FiniteDifference };

/// Which constant rescaling of the ball metric a curvature number refers to.
/// Values in different normalizations must not be compared without the
/// explicit 2/sqrt(n+1) conversion.
enum class MetricNormalization {
    SectionalNormalized,  // sectional curvature in [-1, -1/4]
    Bergman,              // metric from log K; (n+1)/4 times the normalized one
};

struct NormalizedCurvature {
    double value = 0.0;
};
struct BergmanCurvature {
    double value = 0.0;
};

/// Theorem identity for the ball: the Bergman-metric curvature is
/// 2/sqrt(n+1) times the normalized-metric one.
BergmanCurvature to_bergman(NormalizedCurvature c, int n);

/// F_kl(r) = 1/4 (d^2/dr_k dr_l + delta_kl / r_k d/dr_k) log K(z,z); the
/// polar-form metric is h = sum F_kl (dr_k dr_l + r_k r_l dtheta_k dtheta_l).
std::vector<std::vector<double>> metric_components(const RadialKernel& kernel,
                                                   const RadialPoint& r,
                                                   DerivativeMode mode = DerivativeMode::SeriesTermwise);

/// Metric field view over a kernel source with a pinned derivative mode.
struct MetricField {
    const RadialKernel* source = nullptr;
    DerivativeMode derivative_mode = DerivativeMode::SeriesTermwise;

    double F(const RadialPoint& r, int k, int l) const {
        const auto m = metric_components(*source, r, derivative_mode);
        return m[static_cast<size_t>(k)][static_cast<size_t>(l)];
    }
    std::vector<std::vector<double>> components(const RadialPoint& r) const {
        return metric_components(*source, r, derivative_mode);
    }
};

/// Interior guard used by all curvature evaluations: every r_k >= floor and
/// the point passes a membership-margin test when a domain is supplied.
constexpr double kCurvatureAxisFloor = 1e-6;

/// Max |h(d/dtheta_k, d/dr_l)| with the real metric rebuilt from Cartesian
/// central differences of log K; the polar block structure predicts 0.
double lagrangian_orthogonality_residual(const RadialKernel& kernel, const PolarPoint& z);

// ---------------------------------------------------------------------------
// Ball geodesic curvatures and second fundamental form
// ---------------------------------------------------------------------------

/// Euclidean radius of the circle realizing gamma_{z,k} inside the complex
/// geodesic phi_{z,k}: s_k = r_k / sqrt(1 - sum_{j != k} r_j^2).
double ball_axis_circle_radius(const RadialPoint& r, int k);
/// Pair version: s_kl = sqrt(r_k^2 + r_l^2) / sqrt(1 - sum_{j != k,l} r_j^2).
double ball_pair_circle_radius(const RadialPoint& r, int k, int l);

/// Geodesic curvature C_k(z) in the normalized metric; equals the
/// hyperbolic circle curvature C(s_k). Requires r_k > 0 and r inside the
/// open unit ball.
NormalizedCurvature ball_curvature_axis(const RadialPoint& r, int k);
NormalizedCurvature ball_curvature_pair(const RadialPoint& r, int k, int l);

/// Second fundamental form values Q_k, Q_kl of the torus-orbit foliation in
/// the d/dr frame (normalized metric). Components are the coefficients on
/// d/dr_1..d/dr_n; only slots k (and l) are nonzero on the ball.
struct SecondFundamentalData {
    std::vector<double> q_axis;        // Q_k
    std::vector<double> q_pair;        // Q_kl
    double collinearity_residual = 0.0;  // 0 by construction on the ball
};

SecondFundamentalData ball_second_fundamental(const RadialPoint& r, int k, int l);

/// II(d/dtheta_k, d/dtheta_l) = (Q_kl - Q_k - Q_l)/2 (polarization).
std::vector<double> ball_ii_mixed(const RadialPoint& r, int k, int l);

/// Normalized ball metric components (sectional curvature in [-1, -1/4]):
/// F_kl = 4 (delta_kl/(1-rho) + r_k r_l/(1-rho)^2), rho = sum r_j^2.
std::vector<std::vector<double>> ball_metric_normalized(const RadialPoint& r);

// ---------------------------------------------------------------------------
// Bergman-metric curvature Chat_k from the kernel
// ---------------------------------------------------------------------------

/// Chat_k from K and its pure partials up to third order along axis k
/// (the rational kernel formula). Throws Degeneracy when the 3/2-power
/// argument -(K')^2 + K K'' + K K'/r_k is not positive.
BergmanCurvature chat_k(const RadialKernel& kernel, const RadialPoint& r, int k);

struct DegenerateEvaluation : std::domain_error {
    using std::domain_error::domain_error;
};
struct DegenerateRay : std::domain_error {
    using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// Boundary asymptotics
// ---------------------------------------------------------------------------

struct RayScanSample {
    double distance = 0.0;  // 1 - scaling factor along the ray
    double chat = 0.0;
};

struct RayScanResult {
    std::vector<RayScanSample> samples;  // ordered by decreasing distance
    double limit = 0.0;                  // 2 / sqrt(n+1)
    double final_deviation = 0.0;        // |chat(last) - limit|
};

/// Samples Chat_k along the scaling ray t -> t*u, t -> 1, for u on the base
/// boundary. Rejects degenerate endpoints (u_k = 0 or d delta/d r_k(u) = 0)
/// with DegenerateRay. Series-backed kernels are refused within margin 0.05
/// of the boundary.
RayScanResult boundary_asymptotics_scan(const DomainSpec& spec, const RadialKernel& kernel,
                                        const RadialPoint& u, int k, int samples,
                                        double distance_min = 1e-4, double distance_max = 0.2);

// ---------------------------------------------------------------------------
// Hyperbolic-disk helpers
// ---------------------------------------------------------------------------

/// Geodesic curvature of the hyperbolic circle of Euclidean radius s:
/// C(s) = (1 + s^2) / (2 s).
double hyperbolic_circle_curvature(double s);
/// Hyperbolic radius rho with cosh^2(rho/2) = 1/(1 - s^2).
double hyperbolic_radius_from_euclidean(double s);
double euclidean_radius_from_hyperbolic(double rho);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// Per-point curvature values with their provenance.
struct CurvatureReport {
    RadialPoint point;
    std::vector<double> c_axis;                 // C_k, normalized metric (ball only)
    std::vector<std::vector<double>> c_pair;    // C_kl (ball only)
    std::vector<double> chat;                   // Chat_k, Bergman metric
    double qk_direction_check = 0.0;            // collinearity residual
    std::string provenance;                     // "closed-form" | "kernel-based"
    MetricNormalization chat_normalization = MetricNormalization::Bergman;
};

CurvatureReport ball_curvature_report(int n, double lambda, const RadialPoint& r);
CurvatureReport kernel_curvature_report(const RadialKernel& kernel, const RadialPoint& r);

// Finite-difference helper (central stencils with Richardson extrapolation);
// exposed because it is the oracle route for every derivative check.
double fd_derivative(const std::function<double(double)>& f, double x, int order,
                     double step);

}  // namespace rtoep

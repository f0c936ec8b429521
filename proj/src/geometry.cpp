#include "rtoep/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace rtoep {

namespace {

void require_axis(const RadialPoint& r, int k) {
    if (k < 0 || k >= r.dim()) throw std::invalid_argument("geometry: axis out of range");
}

double squared_norm(const RadialPoint& r) {
    double s = 0.0;
    for (double v : r.r) s += v * v;
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// SeriesKernel
// ---------------------------------------------------------------------------

SeriesKernel::SeriesKernel(NormalizationTable table) : table_(std::move(table)) {}

// K(r) = (2 pi)^{-n} sum alpha_p^2 prod r_k^{2 p_k}; orders[k] is the number
// of derivatives taken along axis k.
double SeriesKernel::sum_derivative(const RadialPoint& r, const std::vector<int>& orders) const {
    const int n = table_.domain.dimension;
    double sum = 0.0;
    for (const auto& [p, alpha] : table_.alpha) {
        double term = alpha * alpha;
        bool dead = false;
        for (int k = 0; k < n && !dead; ++k) {
            int e = 2 * p[k];
            double fac = 1.0;
            for (int d = 0; d < orders[static_cast<size_t>(k)]; ++d) {
                fac *= e;
                --e;
            }
            if (fac == 0.0) {
                dead = true;
                break;
            }
            term *= fac * std::pow(r[k], e);
        }
        if (!dead) sum += term;
    }
    return std::pow(2.0 * M_PI, -n) * sum;
}

double SeriesKernel::value(const RadialPoint& r) const {
    return sum_derivative(r, std::vector<int>(static_cast<size_t>(dim()), 0));
}
double SeriesKernel::d1(const RadialPoint& r, int k) const {
    require_axis(r, k);
    std::vector<int> o(static_cast<size_t>(dim()), 0);
    o[static_cast<size_t>(k)] = 1;
    return sum_derivative(r, o);
}
double SeriesKernel::d2(const RadialPoint& r, int k, int l) const {
    require_axis(r, k);
    require_axis(r, l);
    std::vector<int> o(static_cast<size_t>(dim()), 0);
    o[static_cast<size_t>(k)] += 1;
    o[static_cast<size_t>(l)] += 1;
    return sum_derivative(r, o);
}
double SeriesKernel::d3(const RadialPoint& r, int k) const {
    require_axis(r, k);
    std::vector<int> o(static_cast<size_t>(dim()), 0);
    o[static_cast<size_t>(k)] = 3;
    return sum_derivative(r, o);
}

// ---------------------------------------------------------------------------
// BallKernel: K = (1 - rho)^{-a}, rho = sum r_j^2, a = n + 1 + lambda
// ---------------------------------------------------------------------------

double BallKernel::power(const RadialPoint& r, int extra) const {
    const double u = 1.0 - squared_norm(r);
    if (!(u > 0.0)) throw DegenerateEvaluation("BallKernel: point outside the open ball");
    const double a = n_ + 1.0 + lambda_;
    return std::pow(u, -(a + extra));
}

double BallKernel::value(const RadialPoint& r) const { return power(r, 0); }

double BallKernel::d1(const RadialPoint& r, int k) const {
    require_axis(r, k);
    const double a = n_ + 1.0 + lambda_;
    return 2.0 * a * r[k] * power(r, 1);
}

double BallKernel::d2(const RadialPoint& r, int k, int l) const {
    require_axis(r, k);
    require_axis(r, l);
    const double a = n_ + 1.0 + lambda_;
    double v = 4.0 * a * (a + 1.0) * r[k] * r[l] * power(r, 2);
    if (k == l) v += 2.0 * a * power(r, 1);
    return v;
}

double BallKernel::d3(const RadialPoint& r, int k) const {
    require_axis(r, k);
    const double a = n_ + 1.0 + lambda_;
    return 12.0 * a * (a + 1.0) * r[k] * power(r, 2) +
           8.0 * a * (a + 1.0) * (a + 2.0) * r[k] * r[k] * r[k] * power(r, 3);
}

// ---------------------------------------------------------------------------
// Poly
// ---------------------------------------------------------------------------

Poly Poly::constant(int n, double value) {
    Poly p(n);
    if (value != 0.0) p.coeff_[MultiIndex::zeros(n)] = value;
    return p;
}

Poly Poly::variable(int n, int axis) {
    Poly p(n);
    p.coeff_[MultiIndex::unit(n, axis)] = 1.0;
    return p;
}

Poly& Poly::add_term(const MultiIndex& m, double c) {
    if (m.dim() != n_) throw std::invalid_argument("Poly: exponent dimension mismatch");
    if (c != 0.0) {
        coeff_[m] += c;
        if (coeff_[m] == 0.0) coeff_.erase(m);
    }
    return *this;
}

double Poly::eval(const RadialPoint& r) const {
    double s = 0.0;
    for (const auto& [m, c] : coeff_) {
        double t = c;
        for (int k = 0; k < n_; ++k)
            for (int j = 0; j < m[k]; ++j) t *= r[k];
        s += t;
    }
    return s;
}

Poly Poly::derivative(int axis) const {
    Poly out(n_);
    for (const auto& [m, c] : coeff_) {
        const int e = m[axis];
        if (e > 0) out.add_term(m.shifted(axis, -1), c * e);
    }
    return out;
}

Poly Poly::operator+(const Poly& other) const {
    Poly out = *this;
    for (const auto& [m, c] : other.coeff_) out.add_term(m, c);
    return out;
}

Poly Poly::operator-(const Poly& other) const {
    Poly out = *this;
    for (const auto& [m, c] : other.coeff_) out.add_term(m, -c);
    return out;
}

Poly Poly::operator*(const Poly& other) const {
    Poly out(n_);
    for (const auto& [ma, ca] : coeff_) {
        for (const auto& [mb, cb] : other.coeff_) {
            std::vector<int> e(static_cast<size_t>(n_));
            for (int k = 0; k < n_; ++k) e[static_cast<size_t>(k)] = ma[k] + mb[k];
            out.add_term(MultiIndex(std::move(e)), ca * cb);
        }
    }
    return out;
}

Poly Poly::operator*(double scale) const {
    Poly out(n_);
    for (const auto& [m, c] : coeff_) out.add_term(m, c * scale);
    return out;
}

// ---------------------------------------------------------------------------
// Fefferman expansion
// ---------------------------------------------------------------------------

double FeffermanExpansion::kernel_value(const RadialPoint& r) const {
    const double d = delta.eval(r);
    if (!(d < 0.0)) throw DegenerateEvaluation("Fefferman kernel: delta must be negative");
    return phi.eval(r) * std::pow(-d, -(n + 1.0)) + psi.eval(r) * std::log(-d);
}

FeffermanTable fefferman_coefficients(const FeffermanExpansion& exp, int axis, int j_max) {
    if (j_max < 0 || j_max > 3)
        throw std::invalid_argument("fefferman_coefficients: j_max must be in [0, 3]");
    FeffermanTable table;
    table.n = exp.n;
    table.axis = axis;
    table.j_max = j_max;
    table.delta = exp.delta;

    const Poly ddelta = exp.delta.derivative(axis);
    const int nd = exp.delta.dim();
    auto zero = [nd]() { return Poly(nd); };

    table.phi_jl.assign(static_cast<size_t>(j_max + 1), {});
    table.psi_jl.assign(static_cast<size_t>(j_max + 1), {});
    table.phi_jl[0] = {exp.phi};
    table.psi_jl[0] = {exp.psi};

    for (int j = 1; j <= j_max; ++j) {
        auto& phi_prev = table.phi_jl[static_cast<size_t>(j - 1)];
        auto& psi_prev = table.psi_jl[static_cast<size_t>(j - 1)];
        auto phi_at = [&](int l) { return (l >= 0 && l <= j - 1) ? phi_prev[static_cast<size_t>(l)] : zero(); };
        auto psi_at = [&](int l) { return (l >= 0 && l <= j - 1) ? psi_prev[static_cast<size_t>(l)] : zero(); };

        std::vector<Poly> phi_row, psi_row;
        for (int l = 0; l <= j; ++l) {
            // phi_jl = d phi_{j-1,l} / dr + (n + l) phi_{j-1,l-1} delta'
            Poly p = phi_at(l).derivative(axis) + phi_at(l - 1) * ddelta * static_cast<double>(exp.n + l);
            phi_row.push_back(std::move(p));

            // psi_jl = d psi_{j-1,l} / dr - (l - 1) psi_{j-1,l-1} delta',
            // plus the log-term feed-in psi_{j-1,0} delta' at l = 1
            Poly q = psi_at(l).derivative(axis) - psi_at(l - 1) * ddelta * static_cast<double>(l - 1);
            if (l == 1) q = q + psi_at(0) * ddelta;
            psi_row.push_back(std::move(q));
        }
        table.phi_jl[static_cast<size_t>(j)] = std::move(phi_row);
        table.psi_jl[static_cast<size_t>(j)] = std::move(psi_row);
    }
    return table;
}

double FeffermanTable::partial(int j, const RadialPoint& r) const {
    if (j < 0 || j > j_max) throw std::invalid_argument("FeffermanTable: j out of range");
    const double d = delta.eval(r);
    if (!(d < 0.0)) throw DegenerateEvaluation("FeffermanTable: delta must be negative");
    double sum = 0.0;
    for (int l = 0; l <= j; ++l) {
        const double phi_v = phi_jl[static_cast<size_t>(j)][static_cast<size_t>(l)].eval(r);
        sum += phi_v * std::pow(-d, -(n + 1.0 + l));
        if (l >= 1) {
            const double psi_v = psi_jl[static_cast<size_t>(j)][static_cast<size_t>(l)].eval(r);
            sum += psi_v * std::pow(d, -static_cast<double>(l));
        }
    }
    sum += psi_jl[static_cast<size_t>(j)][0].eval(r) * std::log(-d);
    return sum;
}

FeffermanKernel::FeffermanKernel(const FeffermanExpansion& exp, int dim_r) : dim_r_(dim_r) {
    for (int k = 0; k < dim_r; ++k) tables_.push_back(fefferman_coefficients(exp, k, 3));
}

double FeffermanKernel::value(const RadialPoint& r) const { return tables_[0].partial(0, r); }
double FeffermanKernel::d1(const RadialPoint& r, int k) const {
    require_axis(r, k);
    return tables_[static_cast<size_t>(k)].partial(1, r);
}
double FeffermanKernel::d2(const RadialPoint& r, int k, int l) const {
    require_axis(r, k);
    if (k != l)
        throw std::logic_error("FeffermanKernel: mixed partials are not provided by the recursion");
    return tables_[static_cast<size_t>(k)].partial(2, r);
}
double FeffermanKernel::d3(const RadialPoint& r, int k) const {
    require_axis(r, k);
    return tables_[static_cast<size_t>(k)].partial(3, r);
}

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

namespace {

double central_stencil(const std::function<double(double)>& f, double x, int order, double h) {
    switch (order) {
        case 1:
            return (f(x + h) - f(x - h)) / (2.0 * h);
        case 2:
            return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        case 3:
            return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) /
                   (2.0 * h * h * h);
        default:
            throw std::invalid_argument("fd_derivative: order must be 1, 2 or 3");
    }
}

}  // namespace

double fd_derivative(const std::function<double(double)>& f, double x, int order, double step) {
    // one Richardson level on the O(h^2) central stencils
    const double d_h = central_stencil(f, x, order, step);
    const double d_h2 = central_stencil(f, x, order, 0.5 * step);
    return (4.0 * d_h2 - d_h) / 3.0;
}

// ---------------------------------------------------------------------------
// Metric
// ---------------------------------------------------------------------------

BergmanCurvature to_bergman(NormalizedCurvature c, int n) {
    return BergmanCurvature{2.0 / std::sqrt(n + 1.0) * c.value};
}

namespace {

void curvature_guard(const RadialPoint& r, int k) {
    require_axis(r, k);
    if (!(r[k] >= kCurvatureAxisFloor))
        throw DegenerateEvaluation("geometry: r_k below the 1e-6 axis floor");
}

double log_kernel(const RadialKernel& kernel, const RadialPoint& r) {
    const double v = kernel.value(r);
    if (!(v > 0.0)) throw DegenerateEvaluation("geometry: kernel not positive at the point");
    return std::log(v);
}

// mixed second partial of log K by two nested Richardson first derivatives
double fd_mixed_log(const RadialKernel& kernel, const RadialPoint& r, int k, int l, double h) {
    auto dlog_dk = [&](double xl) {
        RadialPoint q = r;
        q[l] = xl;
        auto f = [&](double xk) {
            RadialPoint s = q;
            s[k] = xk;
            return log_kernel(kernel, s);
        };
        return fd_derivative(f, r[k], 1, h);
    };
    return fd_derivative(dlog_dk, r[l], 1, h);
}

}  // namespace

std::vector<std::vector<double>> metric_components(const RadialKernel& kernel,
                                                   const RadialPoint& r, DerivativeMode mode) {
    const int n = kernel.dim();
    if (r.dim() != n) throw std::invalid_argument("metric_components: dimension mismatch");
    for (int k = 0; k < n; ++k) curvature_guard(r, k);

    std::vector<std::vector<double>> F(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n), 0.0));
    if (mode == DerivativeMode::SeriesTermwise) {
        const double K = kernel.value(r);
        if (!(K > 0.0)) throw DegenerateEvaluation("metric_components: kernel not positive");
        std::vector<double> K1(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) K1[static_cast<size_t>(k)] = kernel.d1(r, k);
        for (int k = 0; k < n; ++k) {
            for (int l = k; l < n; ++l) {
                const double Kkl = kernel.d2(r, k, l);
                const double L2 = Kkl / K - K1[static_cast<size_t>(k)] * K1[static_cast<size_t>(l)] / (K * K);
                double f = L2;
                if (k == l) f += (K1[static_cast<size_t>(k)] / K) / r[k];
                F[static_cast<size_t>(k)][static_cast<size_t>(l)] = 0.25 * f;
                F[static_cast<size_t>(l)][static_cast<size_t>(k)] = 0.25 * f;
            }
        }
        return F;
    }

    // finite-difference route on log K; step sized for second-derivative
    // roundoff (eps/h^2) against Richardson truncation (h^4)
    for (int k = 0; k < n; ++k) {
        const double hk = 2e-3 * std::max(r[k], 0.25);
        for (int l = k; l < n; ++l) {
            double L2;
            if (k == l) {
                auto f = [&](double xk) {
                    RadialPoint q = r;
                    q[k] = xk;
                    return log_kernel(kernel, q);
                };
                L2 = fd_derivative(f, r[k], 2, hk);
            } else {
                L2 = fd_mixed_log(kernel, r, k, l, hk);
            }
            double f_val = L2;
            if (k == l) {
                auto f = [&](double xk) {
                    RadialPoint q = r;
                    q[k] = xk;
                    return log_kernel(kernel, q);
                };
                f_val += fd_derivative(f, r[k], 1, hk) / r[k];
            }
            F[static_cast<size_t>(k)][static_cast<size_t>(l)] = 0.25 * f_val;
            F[static_cast<size_t>(l)][static_cast<size_t>(k)] = 0.25 * f_val;
        }
    }
    return F;
}

double lagrangian_orthogonality_residual(const RadialKernel& kernel, const PolarPoint& z) {
    const int n = kernel.dim();
    if (z.dim() != n)
        throw std::invalid_argument("lagrangian_orthogonality_residual: dimension mismatch");
    for (int k = 0; k < n; ++k) curvature_guard(z.radius, k);

    // log K as a function of the 2n Cartesian coordinates
    std::vector<double> x0(static_cast<size_t>(2 * n));
    for (int k = 0; k < n; ++k) {
        const std::complex<double> zk = z.z(k);
        x0[static_cast<size_t>(2 * k)] = zk.real();
        x0[static_cast<size_t>(2 * k + 1)] = zk.imag();
    }
    auto L = [&](const std::vector<double>& x) {
        RadialPoint r;
        r.r.resize(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k)
            r.r[static_cast<size_t>(k)] = std::hypot(x[static_cast<size_t>(2 * k)],
                                                     x[static_cast<size_t>(2 * k + 1)]);
        return log_kernel(kernel, r);
    };

    const double h = 1e-4;
    auto second = [&](int a, int b) {
        if (a == b) {
            auto f = [&](double t) {
                std::vector<double> x = x0;
                x[static_cast<size_t>(a)] = t;
                return L(x);
            };
            return fd_derivative(f, x0[static_cast<size_t>(a)], 2, h);
        }
        auto outer = [&](double tb) {
            std::vector<double> x = x0;
            x[static_cast<size_t>(b)] = tb;
            auto f = [&](double ta) {
                std::vector<double> y = x;
                y[static_cast<size_t>(a)] = ta;
                return L(y);
            };
            return fd_derivative(f, x0[static_cast<size_t>(a)], 1, h);
        };
        return fd_derivative(outer, x0[static_cast<size_t>(b)], 1, h);
    };

    // g_{k lbar} = 1/4 [ (d_xk d_xl + d_yk d_yl) + i (d_xk d_yl - d_yk d_xl) ] log K
    std::vector<std::vector<std::complex<double>>> g(
        static_cast<size_t>(n), std::vector<std::complex<double>>(static_cast<size_t>(n)));
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            const double re = second(2 * k, 2 * l) + second(2 * k + 1, 2 * l + 1);
            const double im = second(2 * k, 2 * l + 1) - second(2 * k + 1, 2 * l);
            g[static_cast<size_t>(k)][static_cast<size_t>(l)] = 0.25 * std::complex<double>(re, im);
        }
    }

    // h(u, v) = Re sum g_{k lbar} u_k conj(v_l); tangent vectors of the polar
    // frame: d/dr_l ~ e^{i theta_l} e_l, d/dtheta_k ~ i z_k e_k
    double residual = 0.0;
    for (int k = 0; k < n; ++k) {
        const std::complex<double> w = std::complex<double>(0.0, 1.0) * z.z(k);  // d/dtheta_k
        for (int l = 0; l < n; ++l) {
            const std::complex<double> u = std::polar(1.0, z.theta[static_cast<size_t>(l)]);
            const std::complex<double> hval = g[static_cast<size_t>(k)][static_cast<size_t>(l)] * w * std::conj(u);
            residual = std::max(residual, std::abs(hval.real()));
        }
    }
    return residual;
}

// ---------------------------------------------------------------------------
// Ball curvatures
// ---------------------------------------------------------------------------

double ball_axis_circle_radius(const RadialPoint& r, int k) {
    curvature_guard(r, k);
    double others = 0.0;
    for (int j = 0; j < r.dim(); ++j)
        if (j != k) others += r[j] * r[j];
    const double R2 = 1.0 - others;
    if (!(R2 > 0.0) || !(squared_norm(r) < 1.0))
        throw DegenerateEvaluation("ball curvature: point outside the open ball");
    return r[k] / std::sqrt(R2);
}

double ball_pair_circle_radius(const RadialPoint& r, int k, int l) {
    require_axis(r, k);
    require_axis(r, l);
    if (k == l) throw std::invalid_argument("ball_pair_circle_radius: axes must differ");
    double others = 0.0;
    for (int j = 0; j < r.dim(); ++j)
        if (j != k && j != l) others += r[j] * r[j];
    const double R2 = 1.0 - others;
    const double rkl = std::hypot(r[k], r[l]);
    if (!(rkl > 0.0)) throw DegenerateEvaluation("ball curvature: r_k = r_l = 0");
    if (!(R2 > 0.0) || !(squared_norm(r) < 1.0))
        throw DegenerateEvaluation("ball curvature: point outside the open ball");
    return rkl / std::sqrt(R2);
}

double hyperbolic_circle_curvature(double s) {
    if (!(s > 0.0)) throw std::domain_error("hyperbolic_circle_curvature: s must be positive");
    return (1.0 + s * s) / (2.0 * s);
}

double hyperbolic_radius_from_euclidean(double s) {
    if (!(s > 0.0 && s < 1.0))
        throw std::domain_error("hyperbolic_radius_from_euclidean: s must lie in (0,1)");
    return 2.0 * std::atanh(s);
}

double euclidean_radius_from_hyperbolic(double rho) {
    if (!(rho > 0.0)) throw std::domain_error("euclidean_radius_from_hyperbolic: rho must be positive");
    return std::tanh(0.5 * rho);
}

NormalizedCurvature ball_curvature_axis(const RadialPoint& r, int k) {
    return NormalizedCurvature{hyperbolic_circle_curvature(ball_axis_circle_radius(r, k))};
}

NormalizedCurvature ball_curvature_pair(const RadialPoint& r, int k, int l) {
    return NormalizedCurvature{hyperbolic_circle_curvature(ball_pair_circle_radius(r, k, l))};
}

std::vector<std::vector<double>> ball_metric_normalized(const RadialPoint& r) {
    const int n = r.dim();
    const double u = 1.0 - squared_norm(r);
    if (!(u > 0.0)) throw DegenerateEvaluation("ball metric: point outside the open ball");
    std::vector<std::vector<double>> F(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            F[static_cast<size_t>(k)][static_cast<size_t>(l)] =
                4.0 * ((k == l ? 1.0 / u : 0.0) + r[k] * r[l] / (u * u));
    return F;
}

SecondFundamentalData ball_second_fundamental(const RadialPoint& r, int k, int l) {
    const int n = r.dim();
    curvature_guard(r, k);
    curvature_guard(r, l);
    if (k == l) throw std::invalid_argument("ball_second_fundamental: axes must differ");
    const auto F = ball_metric_normalized(r);

    SecondFundamentalData out;
    out.q_axis.assign(static_cast<size_t>(n), 0.0);
    out.q_pair.assign(static_cast<size_t>(n), 0.0);

    const double ck = ball_curvature_axis(r, k).value;
    const double theta_k2 = r[k] * r[k] * F[static_cast<size_t>(k)][static_cast<size_t>(k)];
    const double norm_rk = std::sqrt(F[static_cast<size_t>(k)][static_cast<size_t>(k)]);
    out.q_axis[static_cast<size_t>(k)] = -ck * theta_k2 / norm_rk;

    const double ckl = ball_curvature_pair(r, k, l).value;
    const double theta_kl2 = r[k] * r[k] * F[static_cast<size_t>(k)][static_cast<size_t>(k)] +
                             2.0 * r[k] * r[l] * F[static_cast<size_t>(k)][static_cast<size_t>(l)] +
                             r[l] * r[l] * F[static_cast<size_t>(l)][static_cast<size_t>(l)];
    const double norm_rkl = std::sqrt(F[static_cast<size_t>(k)][static_cast<size_t>(k)] +
                                      2.0 * F[static_cast<size_t>(k)][static_cast<size_t>(l)] +
                                      F[static_cast<size_t>(l)][static_cast<size_t>(l)]);
    const double c = -ckl * theta_kl2 / norm_rkl;
    out.q_pair[static_cast<size_t>(k)] = c;
    out.q_pair[static_cast<size_t>(l)] = c;

    out.collinearity_residual = 0.0;  // collinear by construction on the ball
    return out;
}

std::vector<double> ball_ii_mixed(const RadialPoint& r, int k, int l) {
    const auto data = ball_second_fundamental(r, k, l);
    const auto data_l = ball_second_fundamental(r, l, k);
    std::vector<double> out(static_cast<size_t>(r.dim()), 0.0);
    for (int j = 0; j < r.dim(); ++j)
        out[static_cast<size_t>(j)] = 0.5 * (data.q_pair[static_cast<size_t>(j)] -
                                             data.q_axis[static_cast<size_t>(j)] -
                                             data_l.q_axis[static_cast<size_t>(j)]);
    return out;
}

// ---------------------------------------------------------------------------
// Chat_k from the kernel
// ---------------------------------------------------------------------------

BergmanCurvature chat_k(const RadialKernel& kernel, const RadialPoint& r, int k) {
    curvature_guard(r, k);
    const double K = kernel.value(r);
    const double K1 = kernel.d1(r, k);
    const double K2 = kernel.d2(r, k, k);
    const double K3 = kernel.d3(r, k);
    const double rk = r[k];

    const double denom_arg = -K1 * K1 + K * K2 + K * K1 / rk;
    if (!(denom_arg > 0.0))
        throw DegenerateEvaluation("chat_k: degenerate metric (3/2-power argument not positive)");
    const double numer = 2.0 * K1 * K1 * K1 - 3.0 * K * K1 * K2 + K * K * K3 -
                         3.0 * K / rk * K1 * K1 + 3.0 * K * K / rk * K2 +
                         K * K / (rk * rk) * K1;
    return BergmanCurvature{numer / std::pow(denom_arg, 1.5)};
}

// ---------------------------------------------------------------------------
// Boundary asymptotics
// ---------------------------------------------------------------------------

RayScanResult boundary_asymptotics_scan(const DomainSpec& spec, const RadialKernel& kernel,
                                        const RadialPoint& u, int k, int samples,
                                        double distance_min, double distance_max) {
    if (samples < 2) throw std::invalid_argument("boundary_asymptotics_scan: need >= 2 samples");
    require_axis(u, k);
    if (!spec.defining_function)
        throw std::invalid_argument("boundary_asymptotics_scan: domain has no defining function");
    const double delta_u = spec.defining_function->value(u);
    if (std::abs(delta_u) > 1e-9)
        throw DegenerateRay("boundary_asymptotics_scan: endpoint is not on the boundary");
    if (!(std::abs(u[k]) > 1e-9))
        throw DegenerateRay("boundary_asymptotics_scan: endpoint has u_k = 0");
    if (!(std::abs(spec.defining_function->radial_partial(u, k)) > 1e-9))
        throw DegenerateRay("boundary_asymptotics_scan: d delta/d r_k vanishes at the endpoint");
    if (!kernel.exact_near_boundary() && distance_min < 0.05)
        throw std::invalid_argument(
            "boundary_asymptotics_scan: series kernels are refused within margin 0.05 of the boundary");

    RayScanResult out;
    out.limit = 2.0 / std::sqrt(spec.dimension + 1.0);
    const double ratio = std::pow(distance_min / distance_max,
                                  1.0 / static_cast<double>(samples - 1));
    double d = distance_max;
    for (int i = 0; i < samples; ++i) {
        RadialPoint r = u;
        for (double& v : r.r) v *= (1.0 - d);
        out.samples.push_back({d, chat_k(kernel, r, k).value});
        d *= ratio;
    }
    out.final_deviation = std::abs(out.samples.back().chat - out.limit);
    return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

CurvatureReport ball_curvature_report(int n, double lambda, const RadialPoint& r) {
    CurvatureReport rep;
    rep.point = r;
    rep.provenance = "closed-form";
    const BallKernel kernel(n, lambda);
    for (int k = 0; k < n; ++k) {
        rep.c_axis.push_back(ball_curvature_axis(r, k).value);
        rep.chat.push_back(chat_k(kernel, r, k).value);
    }
    rep.c_pair.assign(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            if (k != l)
                rep.c_pair[static_cast<size_t>(k)][static_cast<size_t>(l)] =
                    ball_curvature_pair(r, k, l).value;
    rep.qk_direction_check = 0.0;
    return rep;
}

CurvatureReport kernel_curvature_report(const RadialKernel& kernel, const RadialPoint& r) {
    CurvatureReport rep;
    rep.point = r;
    rep.provenance = "kernel-based";
    for (int k = 0; k < kernel.dim(); ++k) rep.chat.push_back(chat_k(kernel, r, k).value);
    rep.qk_direction_check = 0.0;
    return rep;
}

}  // namespace rtoep

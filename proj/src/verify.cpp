#include "rtoep/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "rtoep/bergman.hpp"
#include "rtoep/geometry.hpp"
#include "rtoep/toeplitz.hpp"

namespace rtoep {

namespace {

std::string detail_max(const char* what, double value, double tol) {
    std::ostringstream os;
    os << what << " " << value << " (tol " << tol << ")";
    return os.str();
}

RadialPoint random_interior_point(const DomainSpec& domain, std::mt19937& rng, double floor,
                                  double margin) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const int n = domain.dimension;
    while (true) {
        RadialPoint r;
        r.r.resize(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) {
            const double cap = domain.base_bounding_box[static_cast<size_t>(k)];
            r.r[static_cast<size_t>(k)] = floor + (cap - floor) * u01(rng);
        }
        RadialPoint pushed = r;
        for (auto& v : pushed.r) v *= 1.0 + margin;  // membership with margin
        if (domain.base_membership(pushed) && r.strictly_positive(floor * 0.5)) return r;
    }
}

SymbolSpec radial_power_symbol(int n) {
    std::vector<int> e(static_cast<size_t>(n), 0);
    e[0] = 2;
    return symbol_power(MultiIndex(std::move(e)));
}

CheckResult check_gamma_identity(const DomainSpec& domain, const VerifyOptions& opts) {
    std::vector<int> zero(static_cast<size_t>(domain.dimension), 0);
    const auto g = compute_gamma(domain, symbol_power(MultiIndex(zero)), opts.truncation);
    double worst = 0.0;
    for (const auto& [p, v] : g.values) worst = std::max(worst, std::abs(v - 1.0));
    return {"gamma-identity", g.all_converged && worst < opts.tol_gamma_identity,
            detail_max("max |gamma_1(p) - 1| =", worst, opts.tol_gamma_identity)};
}

CheckResult check_alpha_routes(const DomainSpec& domain, const VerifyOptions& opts) {
    const auto table = compute_alpha(domain, opts.truncation);
    double worst = 0.0;
    for (const auto& [p, a] : table.alpha)
        worst = std::max(worst, std::abs(a - table.alpha_closed.at(p)) / table.alpha_closed.at(p));
    return {"alpha-route-agreement", table.all_converged && worst < opts.tol_alpha_routes,
            detail_max("max rel |alpha_quad - alpha_gamma| =", worst, opts.tol_alpha_routes)};
}

CheckResult check_diagonality(const DomainSpec& domain, const VerifyOptions& opts) {
    QuadratureOptions q;
    q.rel_tol = 1e-9;
    const int P = std::min(opts.truncation, 4);
    double worst_off = 0.0, worst_diag = 0.0;
    bool converged = true;
    for (const SymbolSpec& a : {radial_power_symbol(domain.dimension), symbol_annulus(0.0, 0.5)}) {
        const auto M = matrix_oracle(domain, a, P, q);
        const auto g = compute_gamma(domain, a, P, q);
        converged = converged && M.converged && g.all_converged;
        worst_off = std::max(worst_off, M.max_off_diagonal());
        for (int i = 0; i < M.size(); ++i)
            worst_diag = std::max(worst_diag,
                                  std::abs(M.at(i, i).real() - g.at(M.index_set[static_cast<size_t>(i)])));
    }
    const bool pass = converged && worst_off < opts.tol_diagonality && worst_diag < opts.tol_diagonality;
    std::ostringstream os;
    os << "max off-diag " << worst_off << ", max diag dev " << worst_diag << " (tol "
       << opts.tol_diagonality << ")";
    return {"diagonality", pass, os.str()};
}

CheckResult check_commutativity(const DomainSpec& domain, const VerifyOptions& opts) {
    QuadratureOptions q;
    q.rel_tol = 1e-9;
    const int P = std::min(opts.truncation, 4);
    const auto A = matrix_oracle(domain, radial_power_symbol(domain.dimension), P, q);
    const auto B = matrix_oracle(domain, symbol_annulus(0.0, 0.5), P, q);
    const double radial_comm = commutator_norm(A, B);
    const auto C = matrix_oracle(domain, symbol_angular_re_z(0, domain.dimension), P, q);
    const double control = commutator_norm(C, A);
    const bool pass = radial_comm < opts.tol_commutator && control > opts.negative_control_floor;
    std::ostringstream os;
    os << "radial pair " << radial_comm << " (tol " << opts.tol_commutator
       << "), negative control " << control << " (floor " << opts.negative_control_floor << ")";
    return {"commutativity", pass, os.str()};
}

CheckResult check_metric_orthogonality(const DomainSpec& domain, const VerifyOptions& opts) {
    const int P = domain.dimension <= 2 ? 12 : 8;
    const SeriesKernel kernel(compute_alpha(domain, P));
    std::mt19937 rng(opts.seed);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    double worst = 0.0;
    for (int i = 0; i < opts.metric_sample_points; ++i) {
        const RadialPoint r = random_interior_point(domain, rng, 0.05, 0.3);
        std::vector<double> theta(static_cast<size_t>(domain.dimension));
        for (auto& t : theta) t = ang(rng);
        worst = std::max(worst, lagrangian_orthogonality_residual(kernel, PolarPoint(r, theta)));
    }
    return {"metric-orthogonality", worst < opts.tol_metric_cross,
            detail_max("max |h(dtheta, dr)| =", worst, opts.tol_metric_cross)};
}

CheckResult check_curvature_chain(const DomainSpec& domain, const VerifyOptions& opts) {
    const int n = domain.dimension;
    const BallKernel kernel(n, 0.0);
    std::mt19937 rng(opts.seed + 1);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    double worst = 0.0;
    bool in_range = true;
    int tested = 0;
    while (tested < opts.curvature_sample_points) {
        RadialPoint r;
        r.r.resize(static_cast<size_t>(n));
        double s = 0.0;
        for (auto& v : r.r) {
            v = u(rng);
            s += v * v;
        }
        if (s >= 0.9 * 0.9) continue;
        ++tested;
        for (int k = 0; k < n; ++k) {
            const auto ck = ball_curvature_axis(r, k);
            in_range = in_range && ck.value > 1.0;
            worst = std::max(worst,
                             std::abs(chat_k(kernel, r, k).value - to_bergman(ck, n).value));
            for (int l = 0; l < n; ++l)
                if (l != k) in_range = in_range && ball_curvature_pair(r, k, l).value > 1.0;
        }
    }
    std::ostringstream os;
    os << "max |Chat - 2/sqrt(n+1) C| = " << worst << " (tol " << opts.tol_curvature_chain
       << "), curvatures in (1,inf): " << (in_range ? "yes" : "no");
    return {"curvature-chain", worst < opts.tol_curvature_chain && in_range, os.str()};
}

CheckResult check_fefferman(const VerifyOptions& opts) {
    Poly phi = Poly::constant(2, 1.0);
    phi.add_term(MultiIndex({2, 0}), 1.0);
    Poly psi(2);
    psi.add_term(MultiIndex({0, 1}), 1.0);
    Poly delta = Poly::constant(2, -1.0);
    delta.add_term(MultiIndex({2, 0}), 1.0);
    delta.add_term(MultiIndex({0, 2}), 1.0);
    const FeffermanExpansion exp(2, phi, psi, delta);
    const auto table = fefferman_coefficients(exp, 0, 3);

    std::mt19937 rng(opts.seed + 2);
    std::uniform_real_distribution<double> u(0.1, 0.6);
    double worst = 0.0;
    int tested = 0;
    while (tested < 10) {
        const RadialPoint r = RadialPoint({u(rng), u(rng)});
        if (delta.eval(r) > -0.1) continue;
        ++tested;
        auto f = [&](double x) {
            RadialPoint q = r;
            q[0] = x;
            return exp.kernel_value(q);
        };
        for (int j = 1; j <= 3; ++j) {
            const double fd = fd_derivative(f, r[0], j, 1e-3);
            worst = std::max(worst, std::abs(table.partial(j, r) - fd) / std::max(1.0, std::abs(fd)));
        }
    }
    return {"fefferman-recursion", worst < opts.tol_fefferman,
            detail_max("max rel dev vs Richardson FD =", worst, opts.tol_fefferman)};
}

CheckResult check_rr_identity(const DomainSpec& domain, const VerifyOptions& opts) {
    const int P = std::min(opts.truncation, 3);
    const auto table = compute_alpha(domain, P);
    std::mt19937 rng(opts.seed + 3);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double worst = 0.0;
    bool converged = true;
    for (int rep = 0; rep < 3; ++rep) {
        CoefficientVector c;
        for (const MultiIndex& p : multi_indices_upto(domain.dimension, P))
            c.entries[p] = std::complex<double>{coef(rng), coef(rng)};
        const auto back =
            apply_R(table, [&](const PolarPoint& z) { return apply_Rstar(table, c, z); });
        converged = converged && back.converged;
        for (const auto& [p, cp] : back.coefficients.entries)
            worst = std::max(worst, std::abs(cp - c.at(p)));
    }
    return {"rr-star-identity", converged && worst < opts.tol_rr_identity,
            detail_max("max |RR*c - c| =", worst, opts.tol_rr_identity)};
}

}  // namespace

std::vector<CheckResult> run_verify(const DomainSpec& domain, const VerifyOptions& opts) {
    std::vector<CheckResult> out;
    out.push_back(check_gamma_identity(domain, opts));
    if (domain.is_ball) out.push_back(check_alpha_routes(domain, opts));
    out.push_back(check_diagonality(domain, opts));
    out.push_back(check_commutativity(domain, opts));
    out.push_back(check_metric_orthogonality(domain, opts));
    if (domain.is_ball) out.push_back(check_curvature_chain(domain, opts));
    out.push_back(check_fefferman(opts));
    out.push_back(check_rr_identity(domain, opts));
    return out;
}

}  // namespace rtoep

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "rtoep/bergman.hpp"
#include "rtoep/domain.hpp"
#include "rtoep/special.hpp"

using namespace rtoep;
using cplx = std::complex<double>;

namespace {

PolarPoint polar(std::vector<double> r, std::vector<double> th) {
    return PolarPoint(RadialPoint(std::move(r)), std::move(th));
}

// <f, g> over D with the domain weight, by scalar full-polar quadrature.
cplx inner_product(const DomainSpec& dom,
                   const std::function<cplx(const PolarPoint&)>& f,
                   const std::function<cplx(const PolarPoint&)>& g, int angular_degree) {
    QuadratureOptions opts;
    opts.rel_tol = 1e-11;
    opts.angular_degree = angular_degree;
    auto mu = dom.weight.evaluate;
    const auto res = integrate_full_polar(
        dom, [&](const PolarPoint& z) { return f(z) * std::conj(g(z)) * mu(z.radius); }, opts);
    REQUIRE(res.converged);
    return res.value;
}

}  // namespace

TEST_CASE("alpha_0 = (2 pi)^{n/2} for probability weights") {
    for (auto [name, n] : std::vector<std::pair<const char*, int>>{
             {"ball-lambda", 1}, {"ball-lambda", 2}, {"polydisk", 2}}) {
        const auto table = compute_alpha(catalog_lookup(name, n, {}), 0);
        REQUIRE(table.all_converged);
        CHECK(table.at(MultiIndex::zeros(n)) ==
              doctest::Approx(std::pow(2.0 * M_PI, 0.5 * n)).epsilon(1e-10));
    }
}

TEST_CASE("disk alpha_3: Gamma form and direct 1-d quadrature agree on sqrt(8 pi)") {
    // oracle 1: Gamma form 2 pi Gamma(5) / (3! Gamma(2)) = 8 pi
    const double gamma_form = 2.0 * M_PI * std::exp(log_gamma(5.0) - log_factorial(3) - log_gamma(2.0));
    CHECK(gamma_form == doctest::Approx(8.0 * M_PI).epsilon(1e-14));
    // oracle 2: alpha_3^{-2} = (1/pi) int_0^1 r^7 dr = 1/(8 pi) by direct GL
    const GaussRule& g = gauss_legendre(20);
    double moment = 0.0;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        const double r = 0.5 * (1.0 + g.nodes[i]);
        moment += 0.5 * g.weights[i] * std::pow(r, 7) / M_PI;
    }
    CHECK(1.0 / moment == doctest::Approx(gamma_form).epsilon(1e-12));

    const auto table = compute_alpha(catalog_lookup("ball-lambda", 1, {}), 3);
    CHECK(table.at(MultiIndex({3})) == doctest::Approx(std::sqrt(8.0 * M_PI)).epsilon(1e-10));
    CHECK(table.alpha_closed.at(MultiIndex({3})) ==
          doctest::Approx(std::sqrt(8.0 * M_PI)).epsilon(1e-13));
}

TEST_CASE("ball n=2 lambda=1: alpha_(1,2)^2 = (2 pi)^2 * 60, log-gamma vs quadrature") {
    const double expect = std::pow(2.0 * M_PI, 2) *
                          std::exp(log_gamma(7.0) - log_factorial(1) - log_factorial(2) - log_gamma(4.0));
    CHECK(expect == doctest::Approx(std::pow(2.0 * M_PI, 2) * 60.0).epsilon(1e-13));
    const auto table = compute_alpha(catalog_lookup("ball-lambda", 2, {.lambda = 1.0}), 3);
    const MultiIndex p({1, 2});
    CHECK(table.at(p) * table.at(p) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(table.alpha_closed.at(p) == doctest::Approx(std::sqrt(expect)).epsilon(1e-12));
}

TEST_CASE("ball quadrature route matches the closed form across lambda") {
    for (double lambda : {0.0, 0.5, 2.0}) {
        const auto table = compute_alpha(catalog_lookup("ball-lambda", 2, {.lambda = lambda}), 6);
        REQUIRE(table.all_converged);
        for (const auto& [p, a] : table.alpha) {
            CHECK(a == doctest::Approx(table.alpha_closed.at(p)).epsilon(1e-8));
            CHECK(a > 0.0);
        }
    }
}

TEST_CASE("basis_eval: e_0 is identically 1 for probability weights; disk e_1 = sqrt(2) z") {
    const auto disk = compute_alpha(catalog_lookup("ball-lambda", 1, {}), 4);
    const PolarPoint z = polar({0.37}, {1.1});
    CHECK(std::abs(basis_eval(disk, MultiIndex::zeros(1), z) - cplx{1.0, 0.0}) < 1e-10);
    const cplx e1 = basis_eval(disk, MultiIndex({1}), z);
    CHECK(std::abs(e1 - std::sqrt(2.0) * z.z(0)) < 1e-10);
    CHECK_THROWS_AS(basis_eval(disk, MultiIndex({9}), z), std::out_of_range);
}

TEST_CASE("orthonormality of e_p on the disk by the full-polar oracle") {
    const auto table = compute_alpha(catalog_lookup("ball-lambda", 1, {}), 4);
    auto e = [&table](const MultiIndex& p) {
        return [&table, p](const PolarPoint& z) { return basis_eval(table, p, z); };
    };
    for (int pi = 0; pi <= 2; ++pi) {
        for (int qi = 0; qi <= 2; ++qi) {
            const cplx ip = inner_product(table.domain, e(MultiIndex({pi})), e(MultiIndex({qi})), 12);
            const double expect = (pi == qi) ? 1.0 : 0.0;
            CHECK(std::abs(ip - cplx{expect, 0.0}) < 1e-8);
        }
    }
}

TEST_CASE("kernel_eval at the origin is 1 for probability weights") {
    const auto series = make_kernel_series(compute_alpha(catalog_lookup("ball-lambda", 2, {}), 6));
    const PolarPoint origin = polar({0.0, 0.0}, {0.0, 0.0});
    CHECK(std::abs(kernel_eval(series, origin, origin) - cplx{1.0, 0.0}) < 1e-10);
}

TEST_CASE("disk kernel series converges geometrically to the closed form at |z| = 0.5") {
    // oracle: sum (p+1) x^p = (1-x)^{-2} at x = 0.25
    const double x = 0.25;
    double partial = 0.0;
    std::vector<double> tail_errors;
    const PolarPoint z = polar({0.5}, {0.4});
    for (int P : {4, 8, 12, 16}) {
        partial = 0.0;
        for (int p = 0; p <= P; ++p) partial += (p + 1) * std::pow(x, p);
        const auto series = make_kernel_series(compute_alpha(catalog_lookup("ball-lambda", 1, {}), P));
        const cplx kp = kernel_eval(series, z, z);
        CHECK(kp.real() == doctest::Approx(partial).epsilon(1e-9));
        tail_errors.push_back(std::abs(kp.real() - 16.0 / 9.0));
    }
    CHECK(std::pow(1.0 - x, -2.0) == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
    // geometric decay of the truncation error
    for (size_t i = 1; i < tail_errors.size(); ++i)
        CHECK(tail_errors[i] < 0.2 * tail_errors[i - 1]);
    // closed-form route
    const cplx closed = ball_kernel_closed_form(1, 0.0, z, z);
    CHECK(closed.real() == doctest::Approx(16.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("kernel is Hermitian and K(z,z) depends only on r") {
    const auto series = make_kernel_series(compute_alpha(catalog_lookup("ball-lambda", 2, {}), 8));
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> rad(0.05, 0.6), ang(0.0, 2.0 * M_PI);
    for (int rep = 0; rep < 20; ++rep) {
        const PolarPoint z = polar({rad(rng), rad(rng)}, {ang(rng), ang(rng)});
        const PolarPoint w = polar({rad(rng), rad(rng)}, {ang(rng), ang(rng)});
        CHECK(std::abs(kernel_eval(series, z, w) - std::conj(kernel_eval(series, w, z))) < 1e-12);
        const PolarPoint z_rot = polar({z.radius[0], z.radius[1]}, {ang(rng), ang(rng)});
        const cplx kz = kernel_eval(series, z, z), kzr = kernel_eval(series, z_rot, z_rot);
        CHECK(std::abs(kz - kzr) / std::abs(kz) < 1e-12);
        CHECK(kz.real() > 0.0);
        CHECK(std::abs(kz.imag()) < 1e-14 * std::abs(kz));
    }
}

TEST_CASE("apply_Rstar: unit coefficient reproduces the basis function; zero maps to zero") {
    const auto table = compute_alpha(catalog_lookup("ball-lambda", 2, {}), 4);
    const PolarPoint z = polar({0.3, 0.4}, {0.7, 2.1});
    const MultiIndex p({1, 2});
    CHECK(std::abs(apply_Rstar(table, CoefficientVector::unit(p), z) - basis_eval(table, p, z)) <
          1e-12);
    CHECK(std::abs(apply_Rstar(table, CoefficientVector{}, z)) == 0.0);
    CoefficientVector outside;
    outside.entries[MultiIndex({9, 9})] = 1.0;
    CHECK_THROWS_AS(apply_Rstar(table, outside, z), std::out_of_range);
}

TEST_CASE("isometry of R*: L2 norm of R*c equals the l2 norm of c (disk)") {
    const auto table = compute_alpha(catalog_lookup("ball-lambda", 1, {}), 5);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int rep = 0; rep < 3; ++rep) {
        CoefficientVector c;
        for (int p = 0; p <= 5; ++p) c.entries[MultiIndex({p})] = cplx{coef(rng), coef(rng)};
        auto f = [&](const PolarPoint& z) { return apply_Rstar(table, c, z); };
        const cplx norm2 = inner_product(table.domain, f, f, 12);
        CHECK(std::sqrt(norm2.real()) == doctest::Approx(c.norm()).epsilon(1e-7));
    }
}

TEST_CASE("apply_R: basis functions return unit vectors; anti-analytic input is annihilated") {
    const auto table = compute_alpha(catalog_lookup("ball-lambda", 2, {}), 3);
    const MultiIndex q({2, 0});
    const auto rq = apply_R(table, [&](const PolarPoint& z) { return basis_eval(table, q, z); });
    REQUIRE(rq.converged);
    for (const auto& [p, cp] : rq.coefficients.entries) {
        const double expect = (p == q) ? 1.0 : 0.0;
        CHECK(std::abs(cp - cplx{expect, 0.0}) < 1e-8);
    }

    const auto rbar = apply_R(table, [&](const PolarPoint& z) { return std::conj(z.z(0)); });
    REQUIRE(rbar.converged);
    for (const auto& [p, cp] : rbar.coefficients.entries) CHECK(std::abs(cp) < 1e-9);
}

TEST_CASE("R R* = I on random coefficient vectors (disk and ball n=2)") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int n : {1, 2}) {
        const auto table = compute_alpha(catalog_lookup("ball-lambda", n, {}), 3);
        for (int rep = 0; rep < 3; ++rep) {
            CoefficientVector c;
            for (const MultiIndex& p : multi_indices_upto(n, 3))
                c.entries[p] = cplx{coef(rng), coef(rng)};
            const auto back =
                apply_R(table, [&](const PolarPoint& z) { return apply_Rstar(table, c, z); });
            REQUIRE(back.converged);
            for (const auto& [p, cp] : back.coefficients.entries)
                CHECK(std::abs(cp - c.at(p)) < 1e-7);
        }
    }
}

TEST_CASE("normalization table CSV has the documented columns") {
    const auto table = compute_alpha(catalog_lookup("ball-lambda", 2, {}), 1);
    const std::string csv = normalization_table_csv(table);
    CHECK(csv.find("p_1,p_2,alpha_p,method,err_estimate") == 0);
    CHECK(csv.find("quadrature") != std::string::npos);
}

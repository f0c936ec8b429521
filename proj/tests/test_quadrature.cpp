#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rtoep/domain.hpp"
#include "rtoep/quadrature.hpp"
#include "rtoep/special.hpp"

using namespace rtoep;

namespace {

// Dirichlet integral over the standard simplex:
// int r^q (1-sum r)^lambda dr = prod Gamma(q_k+1) * Gamma(lambda+1) / Gamma(|q|+n+lambda+1)
double dirichlet_oracle(const std::vector<int>& q, double lambda) {
    double lg = log_gamma(lambda + 1.0);
    int total = 0;
    for (int qk : q) {
        lg += log_gamma(qk + 1.0);
        total += qk;
    }
    lg -= log_gamma(total + static_cast<double>(q.size()) + lambda + 1.0);
    return std::exp(lg);
}

}  // namespace

TEST_CASE("gauss-legendre rules integrate monomials exactly up to degree 2m-1") {
    for (int order : {7, 15}) {
        const GaussRule& rule = gauss_legendre(order);
        double wsum = 0.0;
        for (double w : rule.weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        for (int deg = 0; deg <= 2 * order - 1; ++deg) {
            double got = 0.0;
            for (size_t i = 0; i < rule.nodes.size(); ++i)
                got += rule.weights[i] * std::pow(rule.nodes[i], deg);
            const double expect = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
            CHECK(std::abs(got - expect) < 1e-13);
        }
    }
}

TEST_CASE("integrate_base: constant over the disk base") {
    const DomainSpec disk = catalog_lookup("ball-lambda", 1, {});
    const auto res = integrate_base(disk, [](const RadialPoint&) { return 1.0; });
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(0.5).epsilon(1e-12));  // int_0^1 r dr
    CHECK(res.error_estimate <= std::max(1e-10 * std::abs(res.value), 1e-14));
}

TEST_CASE("integrate_base: constant over the ball base, n=2, against the polar oracle") {
    // oracle: substitute r = (rho cos phi, rho sin phi):
    // int_{r1^2+r2^2<1} r1 r2 dr = int_0^{pi/2} int_0^1 rho^3 cos sin drho dphi
    const GaussRule& g = gauss_legendre(40);
    double oracle = 0.0;
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        const double rho = 0.5 + 0.5 * g.nodes[i];
        const double wr = 0.5 * g.weights[i];
        for (size_t j = 0; j < g.nodes.size(); ++j) {
            const double phi = 0.25 * M_PI * (1.0 + g.nodes[j]);
            const double wp = 0.25 * M_PI * g.weights[j];
            oracle += wr * wp * rho * rho * rho * std::cos(phi) * std::sin(phi);
        }
    }
    CHECK(oracle == doctest::Approx(0.125).epsilon(1e-12));

    const DomainSpec ball = catalog_lookup("ball-lambda", 2, {});
    const auto res = integrate_base(ball, [](const RadialPoint&) { return 1.0; });
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("integrate_base: probability weight over the ball base integrates to (2pi)^-n") {
    const DomainSpec ball = catalog_lookup("ball-lambda", 2, {});
    const auto res = integrate_base(ball, ball.weight.evaluate);
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(std::pow(2.0 * M_PI, -2)).epsilon(1e-9));
}

TEST_CASE("integrate_base: graded refinement handles the lambda=1/2 weight on the disk") {
    const DomainSpec disk = catalog_lookup("ball-lambda", 1, {.lambda = 0.5});
    // int_0^1 (1-r^2)^{1/2} r dr = 1/3; the weight carries c_lambda.
    const double c = std::exp(log_gamma(2.5) - log_gamma(1.5) - std::log(M_PI));
    const auto res = integrate_base(disk, disk.weight.evaluate);
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(c / 3.0).epsilon(1e-9));
}

TEST_CASE("integrate_base: region restricted to an inner ball") {
    const DomainSpec disk = catalog_lookup("ball-lambda", 1, {});
    const Region restricted = Region::from_base(disk).intersect_ball(0.5);
    auto f = [](const std::vector<double>&, std::complex<double>* out) { out[0] = 1.0; };
    const auto res = integrate_region(restricted, MeasureMode::Radial, 1, f);
    CHECK(res.converged);
    CHECK(res.value[0].real() == doctest::Approx(0.125).epsilon(1e-10));  // (1/2)^2/2
}

TEST_CASE("integrate_base: non-finite integrand is reported") {
    const DomainSpec disk = catalog_lookup("ball-lambda", 1, {});
    CHECK_THROWS_AS(integrate_base(disk, [](const RadialPoint& r) { return 1.0 / (r[0] - r[0]); }),
                    std::runtime_error);
}

TEST_CASE("integrate_base: exhausted budget reports converged=false") {
    const DomainSpec ball = catalog_lookup("ball-lambda", 2, {});
    QuadratureOptions opts;
    opts.rel_tol = 1e-13;
    opts.abs_tol = 1e-300;
    opts.max_cells = 5;
    const auto res = integrate_base(ball, [](const RadialPoint& r) { return std::sqrt(1.0 - r[0]); });
    // loose integrand; with 5 cells the tolerance cannot be met
    const auto tight = integrate_base(
        ball, [](const RadialPoint& r) { return std::sqrt(std::max(0.0, 1.0 - r[0] * r[0] - r[1] * r[1])); },
        opts);
    CHECK_FALSE(tight.converged);
    CHECK(tight.cells_used <= 5 + 4);  // seed cells + at most one split round
    (void)res;
}

TEST_CASE("integrate_full_polar: area of the unit disk") {
    const DomainSpec disk = catalog_lookup("ball-lambda", 1, {});
    const auto res =
        integrate_full_polar(disk, [](const PolarPoint&) { return std::complex<double>{1.0, 0.0}; });
    CHECK(res.converged);
    CHECK(res.value.real() == doctest::Approx(M_PI).epsilon(1e-11));
    CHECK(std::abs(res.value.imag()) < 1e-12);
}

TEST_CASE("integrate_full_polar: |z1|^2 |z2|^4 mu_0 over B^2 matches the Gamma moment") {
    // paper value: p! Gamma(n+lambda+1) / Gamma(n+|p|+lambda+1), p=(1,2), n=2, lambda=0
    const double expect =
        std::exp(log_factorial(1) + log_factorial(2) + log_gamma(3.0) - log_gamma(6.0));
    CHECK(expect == doctest::Approx(1.0 / 30.0).epsilon(1e-14));

    const DomainSpec ball = catalog_lookup("ball-lambda", 2, {});
    auto mu = ball.weight.evaluate;
    const auto res = integrate_full_polar(ball, [&mu](const PolarPoint& z) {
        const double r1 = z.radius[0], r2 = z.radius[1];
        return std::complex<double>{r1 * r1 * r2 * r2 * r2 * r2 * mu(z.radius), 0.0};
    });
    CHECK(res.converged);
    CHECK(res.value.real() == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("torus factorization: theta-independent integrands reduce to the base integral") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(0.5, 2.0);
    for (const char* name : {"ball-lambda", "polydisk", "superellipsoid"}) {
        const DomainSpec dom = catalog_lookup(name, 2, {});
        const double a = coef(rng), b = coef(rng);
        auto radial = [a, b](const RadialPoint& r) { return a + b * r[0] * r[0] * r[1]; };
        const auto base = integrate_base(dom, radial);
        const auto full = integrate_full_polar(
            dom, [&radial](const PolarPoint& z) { return std::complex<double>{radial(z.radius), 0.0}; });
        REQUIRE(base.converged);
        REQUIRE(full.converged);
        const double factor = std::pow(2.0 * M_PI, 2);
        CHECK(full.value.real() ==
              doctest::Approx(factor * base.value).epsilon(10 * 1e-10));
        CHECK(std::abs(full.value.imag()) < 1e-10);
    }
}

TEST_CASE("integrate_simplex: constants") {
    const auto one_1d = integrate_simplex([](const RadialPoint&) { return 1.0; }, 1, 0.0);
    CHECK(one_1d.converged);
    CHECK(one_1d.value == doctest::Approx(1.0).epsilon(1e-12));

    const auto one_2d = integrate_simplex([](const RadialPoint&) { return 1.0; }, 2, 0.0);
    CHECK(one_2d.converged);
    CHECK(one_2d.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("integrate_simplex: r1 with lambda=1 against the Dirichlet oracle") {
    const double oracle = dirichlet_oracle({1, 0}, 1.0);
    CHECK(oracle == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
    const auto res = integrate_simplex([](const RadialPoint& r) { return r[0]; }, 2, 1.0);
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(oracle).epsilon(1e-11));
}

TEST_CASE("integrate_simplex: random monomials at half-integer lambda hit the Dirichlet oracle") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> expo(0, 6);
    for (double lambda : {0.0, 0.5, 2.0}) {
        for (int n : {1, 2, 3}) {
            for (int rep = 0; rep < 3; ++rep) {
                std::vector<int> q(static_cast<size_t>(n));
                for (auto& v : q) v = expo(rng);
                auto f = [&q](const RadialPoint& r) {
                    double v = 1.0;
                    for (size_t k = 0; k < q.size(); ++k) v *= std::pow(r[static_cast<int>(k)], q[k]);
                    return v;
                };
                const auto res = integrate_simplex(f, n, lambda);
                REQUIRE(res.converged);
                CHECK(res.value == doctest::Approx(dirichlet_oracle(q, lambda)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("route agreement: ball moments via the base engine and via s_k = r_k^2") {
    // int r^{2p} mu_lambda r dr over tau(B^n) = 2^{-n} c_lambda * Dirichlet(p, lambda)
    for (double lambda : {0.0, 1.0}) {
        const DomainSpec ball = catalog_lookup("ball-lambda", 2, {.lambda = lambda});
        const std::vector<int> p = {2, 1};
        auto f = [&](const RadialPoint& r) {
            double v = ball.weight.evaluate(r);
            for (size_t k = 0; k < p.size(); ++k)
                v *= std::pow(r[static_cast<int>(k)], 2 * p[k]);
            return v;
        };
        const auto base = integrate_base(ball, f);
        REQUIRE(base.converged);
        const double c_lambda =
            std::exp(log_gamma(2 + lambda + 1.0) - log_gamma(lambda + 1.0) - 2 * std::log(M_PI));
        const auto simplex = integrate_simplex(
            [&p](const RadialPoint& s) {
                double v = 1.0;
                for (size_t k = 0; k < p.size(); ++k)
                    v *= std::pow(s[static_cast<int>(k)], p[k]);
                return v;
            },
            2, lambda);
        REQUIRE(simplex.converged);
        const double via_simplex = 0.25 * c_lambda * simplex.value;
        CHECK(base.value == doctest::Approx(via_simplex).epsilon(10 * 1e-10));
    }
}

TEST_CASE("engine exactness: monomials up to degree 2m-1 on box regions") {
    // the polydisk base is a box, so cells are classified fully inside and
    // integrated by pure tensor Gauss-Legendre; degree-29 monomials are exact
    const DomainSpec poly = catalog_lookup("polydisk", 2, {});
    for (auto [e1, e2] : std::vector<std::pair<int, int>>{{29, 0}, {14, 13}, {7, 29}}) {
        auto f = [e1 = e1, e2 = e2](const RadialPoint& r) {
            return std::pow(r[0], e1) * std::pow(r[1], e2);
        };
        const auto res = integrate_base(poly, f);
        REQUIRE(res.converged);
        // measure adds one power of r per axis; exact up to summation roundoff
        const double expect = 1.0 / ((e1 + 2.0) * (e2 + 2.0));
        CHECK(std::abs(res.value - expect) <= 5e-14 * expect);
    }
}

TEST_CASE("QuadratureResult invariant: converged implies the error bound") {
    const DomainSpec ball = catalog_lookup("ball-lambda", 2, {.lambda = 1.0});
    QuadratureOptions opts;
    opts.rel_tol = 1e-9;
    const auto res = integrate_base(ball, ball.weight.evaluate, opts);
    REQUIRE(res.converged);
    CHECK(res.error_estimate <= std::max(opts.rel_tol * std::abs(res.value), opts.abs_tol));
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rtoep/toeplitz.hpp"

using namespace rtoep;

namespace {

SymbolSpec one() { return symbol_power(MultiIndex({0})); }
SymbolSpec one2() { return symbol_power(MultiIndex({0, 0})); }

}  // namespace

TEST_CASE("gamma of the constant symbol is identically 1") {
    for (double lambda : {0.0, 0.5}) {
        const auto disk = catalog_lookup("ball-lambda", 1, {.lambda = lambda});
        const auto g = compute_gamma(disk, one(), 6);
        REQUIRE(g.all_converged);
        for (const auto& [p, v] : g.values) CHECK(std::abs(v - 1.0) < 1e-10);
    }
    const auto poly = catalog_lookup("polydisk", 2, {});
    for (const auto& [p, v] : compute_gamma(poly, one2(), 4).values)
        CHECK(std::abs(v - 1.0) < 1e-10);
}

TEST_CASE("disk, a = r^2: gamma(p) = (p+1)/(p+2) against the Beta oracle") {
    // Beta oracle: int_0^1 r^{2p+3} dr / int_0^1 r^{2p+1} dr = (2p+2)/(2p+4)
    const auto disk = catalog_lookup("ball-lambda", 1, {});
    const auto g = compute_gamma(disk, symbol_power(MultiIndex({2})), 12);
    REQUIRE(g.all_converged);
    for (const auto& [p, v] : g.values) {
        const double oracle = (2.0 * p[0] + 2.0) / (2.0 * p[0] + 4.0);
        CHECK(v == doctest::Approx(oracle).epsilon(1e-10));
    }
    CHECK(g.at(MultiIndex({0})) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(g.at(MultiIndex({1})) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("ball n=2, a = r_1^2: gamma(p) = (p_1+1)/(|p|+3)") {
    const auto ball = catalog_lookup("ball-lambda", 2, {});
    const auto g = compute_gamma(ball, symbol_power(MultiIndex({2, 0})), 5);
    REQUIRE(g.all_converged);
    for (const auto& [p, v] : g.values)
        CHECK(v == doctest::Approx((p[0] + 1.0) / (p.order() + 3.0)).epsilon(1e-9));
}

TEST_CASE("compute_gamma rejects general symbols") {
    const auto disk = catalog_lookup("ball-lambda", 1, {});
    CHECK_THROWS_AS(compute_gamma(disk, symbol_angular_re_z(0, 1), 3), std::invalid_argument);
}

TEST_CASE("compute_gamma_ball agrees with the base route") {
    // n=1, lambda=0, a=r^2: matches (p+1)/(p+2)
    const auto g1 = compute_gamma_ball(1, 0.0, symbol_power(MultiIndex({2})), 10);
    REQUIRE(g1.all_converged);
    for (const auto& [p, v] : g1.values)
        CHECK(v == doctest::Approx((p[0] + 1.0) / (p[0] + 2.0)).epsilon(1e-9));

    // cross-route agreement on the ball, n=2, bounded continuous symbol
    for (double lambda : {0.0, 2.0}) {
        const auto ball = catalog_lookup("ball-lambda", 2, {.lambda = lambda});
        const SymbolSpec a = symbol_power(MultiIndex({2, 2}));
        const auto base_route = compute_gamma(ball, a, 4);
        const auto simplex_route = compute_gamma_ball(2, lambda, a, 4);
        REQUIRE(base_route.all_converged);
        REQUIRE(simplex_route.all_converged);
        for (const auto& [p, v] : base_route.values)
            CHECK(v == doctest::Approx(simplex_route.at(p)).epsilon(1e-8));
    }
}

TEST_CASE("compute_gamma_ball: indicator symbol, two quadrature routes agree") {
    // n=2, lambda=2, a = characteristic of {r_1^2 + r_2^2 < 1/4}; the cube
    // route sees the indicator as an interior discontinuity, so it gets an
    // agreement-level tolerance instead of the moment default
    const SymbolSpec a = symbol_annulus(0.0, 0.5);
    const auto ball = catalog_lookup("ball-lambda", 2, {.lambda = 2.0});
    const auto base_route = compute_gamma(ball, a, 4);
    QuadratureOptions simplex_opts;
    simplex_opts.rel_tol = 1e-8;
    simplex_opts.max_cells = 40000;
    const auto simplex_route = compute_gamma_ball(2, 2.0, a, 4, simplex_opts);
    REQUIRE(base_route.all_converged);
    for (const auto& [p, v] : base_route.values) {
        const double other = simplex_route.at(p);
        CHECK(std::abs(v - other) <= 1e-6 * std::max(1.0, std::abs(v)));
    }
}

TEST_CASE("disk annulus indicator: gamma(p) = 4^{-(p+1)} at machine-relative accuracy") {
    const auto disk = catalog_lookup("ball-lambda", 1, {});
    const auto g = compute_gamma(disk, symbol_annulus(0.0, 0.5), 20);
    REQUIRE(g.all_converged);
    for (const auto& [p, v] : g.values) {
        const double oracle = std::pow(4.0, -(p[0] + 1.0));
        CHECK(std::abs(v - oracle) <= 1e-8 * oracle);
    }
}

TEST_CASE("gamma bounds and monotonicity in the symbol") {
    const auto disk = catalog_lookup("ball-lambda", 1, {.lambda = 0.5});
    const auto ga = compute_gamma(disk, symbol_annulus(0.0, 0.5), 8);   // 0 <= a <= 1
    const auto gb = compute_gamma(disk, one(), 8);                      // b == 1 >= a
    for (const auto& [p, va] : ga.values) {
        CHECK(va >= 0.0);
        CHECK(va <= 1.0 + 1e-12);
        CHECK(va <= gb.at(p) + 1e-10);  // a <= b pointwise => gamma_a <= gamma_b
    }
}

TEST_CASE("gamma is linear in the symbol") {
    const auto disk = catalog_lookup("ball-lambda", 1, {});
    const SymbolSpec a = symbol_power(MultiIndex({2}));
    const SymbolSpec b = symbol_annulus(0.0, 0.5);
    const SymbolSpec combo = symbol_lincomb({{2.5, a}, {-0.75, b}});
    const auto gc = compute_gamma(disk, combo, 8);
    const auto ga = compute_gamma(disk, a, 8);
    const auto gb = compute_gamma(disk, b, 8);
    for (const auto& [p, v] : gc.values)
        CHECK(v == doctest::Approx(2.5 * ga.at(p) - 0.75 * gb.at(p)).epsilon(1e-12));
}

TEST_CASE("matrix oracle: constant symbol returns the identity (disk)") {
    const auto disk = catalog_lookup("ball-lambda", 1, {});
    QuadratureOptions opts;
    opts.rel_tol = 1e-9;
    const auto M = matrix_oracle(disk, one(), 4, opts);
    REQUIRE(M.converged);
    for (int q = 0; q < M.size(); ++q)
        for (int p = 0; p < M.size(); ++p)
            CHECK(std::abs(M.at(q, p) - ((p == q) ? 1.0 : 0.0)) < 1e-8);
}

TEST_CASE("matrix oracle: disk a = r^2 is diagonal with gamma on the diagonal") {
    const auto disk = catalog_lookup("ball-lambda", 1, {});
    QuadratureOptions opts;
    opts.rel_tol = 1e-9;
    const auto M = matrix_oracle(disk, symbol_power(MultiIndex({2})), 4, opts);
    REQUIRE(M.converged);
    CHECK(M.max_off_diagonal() < 1e-8);
    CHECK(M.is_hermitian(1e-9));
    const auto g = compute_gamma(disk, symbol_power(MultiIndex({2})), 4);
    for (int i = 0; i < M.size(); ++i)
        CHECK(std::abs(M.at(i, i) - g.at(M.index_set[static_cast<size_t>(i)])) < 1e-8);
}

TEST_CASE("matrix oracle: ball n=2 separately radial symbols are diagonal") {
    const auto ball = catalog_lookup("ball-lambda", 2, {});
    QuadratureOptions opts;
    opts.rel_tol = 1e-8;
    for (const SymbolSpec& a : {symbol_power(MultiIndex({2, 0})), symbol_annulus(0.0, 0.5)}) {
        const auto M = matrix_oracle(ball, a, 2, opts);
        REQUIRE(M.converged);
        CHECK(M.max_off_diagonal() < 1e-7);
        const auto g = compute_gamma(ball, a, 2, opts);
        for (int i = 0; i < M.size(); ++i)
            CHECK(std::abs(M.at(i, i) - g.at(M.index_set[static_cast<size_t>(i)])) < 1e-7);
    }
}

TEST_CASE("matrix oracle: a = Re z populates exactly the |p-q| = 1 band (negative control)") {
    const auto disk = catalog_lookup("ball-lambda", 1, {});
    QuadratureOptions opts;
    opts.rel_tol = 1e-9;
    const auto M = matrix_oracle(disk, symbol_angular_re_z(0, 1), 4, opts);
    REQUIRE(M.converged);
    for (int q = 0; q < M.size(); ++q) {
        for (int p = 0; p < M.size(); ++p) {
            if (std::abs(p - q) == 1) {
                // <Re z e_p, e_{p+1}> = alpha_p / (2 alpha_{p+1}) = sqrt((p+1)/(p+2))/2
                const int lo = std::min(p, q);
                const double expect = 0.5 * std::sqrt((lo + 1.0) / (lo + 2.0));
                CHECK(std::abs(M.at(q, p) - expect) < 1e-8);
            } else {
                CHECK(std::abs(M.at(q, p)) < 1e-8);
            }
        }
    }
}

TEST_CASE("commutators: diagonal matrices commute exactly; oracle pairs within tolerance") {
    const auto disk = catalog_lookup("ball-lambda", 1, {});
    const SymbolSpec a = symbol_power(MultiIndex({2}));
    const SymbolSpec b = symbol_annulus(0.0, 0.5);

    const auto Da = matrix_from_gamma(compute_gamma(disk, a, 4));
    const auto Db = matrix_from_gamma(compute_gamma(disk, b, 4));
    CHECK(commutator_norm(Da, Db) == 0.0);

    QuadratureOptions opts;
    opts.rel_tol = 1e-9;
    const auto Oa = matrix_oracle(disk, a, 4, opts);
    const auto Ob = matrix_oracle(disk, b, 4, opts);
    CHECK(commutator_norm(Oa, Ob) < 1e-7);

    const auto Oc = matrix_oracle(disk, symbol_angular_re_z(0, 1), 4, opts);
    CHECK(commutator_norm(Oc, Oa) > 1e-3);  // general symbol: the algebra is not commutative

    OperatorMatrix wrong;
    wrong.index_set = multi_indices_upto(1, 2);
    wrong.entries.assign(9, {0.0, 0.0});
    CHECK_THROWS_AS(commutator_norm(Oa, wrong), std::invalid_argument);
}

TEST_CASE("spectral report: constant, Beta quotient, and compact indicator") {
    const auto disk = catalog_lookup("ball-lambda", 1, {});

    const auto rep1 = spectral_report(compute_gamma(disk, one(), 10));
    CHECK(rep1.operator_norm_estimate == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep1.spectrum_sample.size() == 1);
    CHECK_FALSE(rep1.compact_verdict);

    const int P = 20;
    const auto rep2 = spectral_report(compute_gamma(disk, symbol_power(MultiIndex({2})), P));
    CHECK(rep2.operator_norm_estimate ==
          doctest::Approx((P + 1.0) / (P + 2.0)).epsilon(1e-9));
    CHECK_FALSE(rep2.compact_verdict);
    for (double v : rep2.essential_spectrum_estimate) CHECK(std::abs(v - 1.0) < 0.06);

    const auto rep3 = spectral_report(compute_gamma(disk, symbol_annulus(0.0, 0.5), P));
    CHECK(rep3.compact_verdict);
    CHECK(rep3.outer_shell_max < 1e-10);
    // gamma decays: shell maxima decrease
    for (size_t s = 1; s < rep3.shell_max.size(); ++s)
        CHECK(rep3.shell_max[s] < rep3.shell_max[s - 1]);
}

TEST_CASE("operator norm estimate is a lower bound converging upward in P") {
    const auto disk = catalog_lookup("ball-lambda", 1, {});
    const SymbolSpec a = symbol_power(MultiIndex({2}));  // true norm: sup (p+1)/(p+2) = 1
    double prev = 0.0;
    for (int P : {4, 8, 16}) {
        const auto rep = spectral_report(compute_gamma(disk, a, P));
        CHECK(rep.operator_norm_estimate > prev);
        CHECK(rep.operator_norm_estimate < 1.0);
        prev = rep.operator_norm_estimate;
    }
}

TEST_CASE("spectral report JSON carries the documented fields") {
    const auto disk = catalog_lookup("ball-lambda", 1, {});
    const std::string js = spectral_report_json(spectral_report(compute_gamma(disk, one(), 4)));
    for (const char* key : {"\"norm\"", "\"spectrum\"", "\"essential\"", "\"compact\""})
        CHECK(js.find(key) != std::string::npos);
}

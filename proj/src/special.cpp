#include "rtoep/special.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace rtoep {

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
    return std::lgamma(x);
}

double gamma_ratio(double a, double b) { return std::exp(log_gamma(a) - log_gamma(b)); }

double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

namespace {

// Legendre polynomial P_m and derivative at x by the three-term recurrence.
void legendre(int m, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (m == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = m * (x * p1 - p0) / (x * x - 1.0);
}

GaussRule build_rule(int order) {
    GaussRule rule;
    rule.nodes.resize(static_cast<size_t>(order));
    rule.weights.resize(static_cast<size_t>(order));
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-angle initial guess, then Newton.
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double p = 0.0, dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            legendre(order, x, p, dp);
            const double dx = -p / dp;
            x += dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre(order, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<size_t>(i)] = -x;
        rule.weights[static_cast<size_t>(i)] = w;
        rule.nodes[static_cast<size_t>(order - 1 - i)] = x;
        rule.weights[static_cast<size_t>(order - 1 - i)] = w;
    }
    if (order % 2 == 1) rule.nodes[static_cast<size_t>(order / 2)] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

}  // namespace rtoep

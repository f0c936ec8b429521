#pragma once

#include <vector>

namespace rtoep {

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// Gamma(a)/Gamma(b) evaluated as exp(lgamma(a) - lgamma(b)); safe for
/// arguments far beyond the ~170 overflow limit of tgamma.
double gamma_ratio(double a, double b);

double log_factorial(int n);

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

/// Gauss-Legendre rule of the given order, computed once by Newton iteration
/// on the Legendre polynomial and cached.
const GaussRule& gauss_legendre(int order);

}  // namespace rtoep

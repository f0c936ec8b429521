#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "rtoep/domain.hpp"

namespace rtoep {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    long max_cells = 200000;  // subdivision budget
    int max_depth = 48;       // per-cell dyadic depth cap
    int initial_splits = 1;   // seed grid: 2^initial_splits cells per axis
    // Full-polar only: highest torus frequency the integrand can carry per
    // axis. Node count is 2*angular_degree + 1 equispaced trapezoid points,
    // exact for trigonometric polynomials up to that degree.
    int angular_degree = 8;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long cells_used = 0;
    bool converged = false;
};

struct ComplexQuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double error_estimate = 0.0;
    long cells_used = 0;
    bool converged = false;
};

struct VectorQuadratureResult {
    std::vector<std::complex<double>> value;
    double error_estimate = 0.0;  // sup over components
    long cells_used = 0;
    bool converged = false;
};

/// Integration region in the positive orthant: an exact membership predicate
/// (downward closed in every coordinate) inside a bounding box. Downward
/// closure is what lets a cell be classified from two corner tests and the
/// boundary be located by bisection along an axis.
struct Region {
    int dim = 0;
    std::vector<double> upper;
    std::function<bool(const std::vector<double>&)> inside;

    static Region from_base(const DomainSpec& spec);
    /// Base of spec in s-coordinates, s_k = r_k^2 (still downward closed).
    static Region from_base_squared(const DomainSpec& spec);
    /// Intersection with the Euclidean ball {|x| < radius}.
    Region intersect_ball(double radius) const;
};

enum class MeasureMode {
    Lebesgue,  // dx
    Radial,    // prod x_k dx_k
};

/// Core adaptive engine: integrates a complex vector-valued integrand over a
/// region. Cells fully inside get tensor Gauss-Legendre; straddling cells are
/// integrated with the boundary resolved by bisection on the membership
/// predicate along the last axis; the error estimate is the GL15/GL7
/// difference and drives worst-first subdivision.
VectorQuadratureResult integrate_region(
    const Region& region, MeasureMode measure, int components,
    const std::function<void(const std::vector<double>&, std::complex<double>*)>& integrand,
    const QuadratureOptions& opts = {});

/// integral over tau(D) of f(r) * prod r_k dr_k; the measure factor is
/// applied by the engine, not the caller.
QuadratureResult integrate_base(const DomainSpec& spec,
                                const std::function<double(const RadialPoint&)>& integrand,
                                const QuadratureOptions& opts = {});

/// integral over D of g(r, theta) dv = integral over [0,2pi)^n x tau(D) of
/// g * prod r_k dr dtheta. Angular direction uses the equispaced trapezoid
/// rule (exact for trigonometric polynomials of degree <= angular_degree).
ComplexQuadratureResult integrate_full_polar(
    const DomainSpec& spec,
    const std::function<std::complex<double>(const PolarPoint&)>& integrand,
    const QuadratureOptions& opts = {});

/// Batched full-polar integration: at each radial node the callback receives
/// the trapezoid angle grid and accumulates, for every component, the
/// angular quadrature sum. Radial adaptivity is driven by the sup-norm error
/// across components. One pass shares all geometry work between components.
struct AngularGrid {
    int nodes_per_axis = 0;   // N, odd
    double weight = 0.0;      // (2 pi / N)^n
    std::vector<double> theta;  // the N angles of one axis
};

VectorQuadratureResult integrate_full_polar_batched(
    const DomainSpec& spec, int components,
    const std::function<void(const RadialPoint&, const AngularGrid&, std::complex<double>*)>&
        radial_block,
    const QuadratureOptions& opts = {});

/// Same, over an explicitly restricted radial region.
VectorQuadratureResult integrate_full_polar_batched(
    const Region& region, int dim, int components,
    const std::function<void(const RadialPoint&, const AngularGrid&, std::complex<double>*)>&
        radial_block,
    const QuadratureOptions& opts = {});

/// integral over the standard simplex {sum r_k < 1, r_k >= 0} of
/// f(r) (1 - sum r_j)^lambda dr, lambda > -1, via the Duffy map to the unit
/// cube with an endpoint substitution u = 1 - v^2 on every axis (so the
/// weight contributes v^{2 lambda}, polynomial whenever 2 lambda is an
/// integer).
QuadratureResult integrate_simplex(const std::function<double(const RadialPoint&)>& integrand,
                                   int n, double lambda, const QuadratureOptions& opts = {});

}  // namespace rtoep

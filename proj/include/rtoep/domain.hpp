#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rtoep/multi_index.hpp"

namespace rtoep {

/// Point of the base tau(D), i.e. a tuple of radii in the positive orthant.
struct RadialPoint {
    std::vector<double> r;

    RadialPoint() = default;
    explicit RadialPoint(std::vector<double> radii) : r(std::move(radii)) {}

    int dim() const { return static_cast<int>(r.size()); }
    double operator[](int k) const { return r[static_cast<size_t>(k)]; }
    double& operator[](int k) { return r[static_cast<size_t>(k)]; }

    /// All coordinates strictly positive (the set D-hat needs this).
    bool strictly_positive(double floor = 0.0) const;
    double euclidean_norm() const;
};

/// z_k = r_k e^{i theta_k}.
struct PolarPoint {
    RadialPoint radius;
    std::vector<double> theta;

    PolarPoint() = default;
    PolarPoint(RadialPoint r, std::vector<double> th)
        : radius(std::move(r)), theta(std::move(th)) {}

    int dim() const { return radius.dim(); }
    std::complex<double> z(int k) const {
        return std::polar(radius[k], theta[static_cast<size_t>(k)]);
    }
    static PolarPoint from_cartesian(const std::vector<std::complex<double>>& z);
};

struct Weight {
    std::function<double(const RadialPoint&)> evaluate;  // mu(r) > 0 near 0
    std::optional<double> total_mass;  // (2 pi)^n * integral of mu r dr, when known
};

/// delta with D = {delta < 0}; present for strictly pseudoconvex catalog entries.
struct DefiningFunction {
    std::function<double(const RadialPoint&)> value;
    std::function<double(const RadialPoint&, int)> radial_partial;  // d delta / d r_k
};

/// A bounded complete Reinhardt domain described through its base tau(D) and
/// weight. base_membership must be exact (no tolerance; boundary points count
/// as outside) and downward closed in each coordinate. Logarithmic convexity
/// is assumed of catalog entries, not verified.
struct DomainSpec {
    int dimension = 0;
    std::function<bool(const RadialPoint&)> base_membership;
    std::vector<double> base_bounding_box;  // tau(D) inside prod [0, R_k^max]
    Weight weight;
    std::optional<DefiningFunction> defining_function;

    // catalog metadata; name is empty for programmatically built domains
    std::string name;
    double lambda = 0.0;
    double superellipsoid_exponent = 2.0;
    bool is_ball = false;  // enables Gamma closed forms and the simplex route

    bool contains(const RadialPoint& p) const { return base_membership(p); }
};

struct CatalogParams {
    double lambda = 0.0;    // ball-lambda weight exponent, must be > -1
    double exponent = 2.0;  // superellipsoid: base {sum r_k^{2q} < 1}, q >= 1
};

/// Built-in domains: "ball-lambda" (weight c_lambda (1-|z|^2)^lambda),
/// "polydisk" (probability weight pi^{-n}), "superellipsoid" (mu = 1).
DomainSpec catalog_lookup(const std::string& name, int n, const CatalogParams& params = {});

/// Boolean lattice over the bounding box; a cell is marked inside iff its
/// center satisfies base_membership.
struct BooleanLattice {
    int dim = 0;
    std::vector<int> resolution;
    std::vector<double> upper;     // bounding box
    std::vector<uint8_t> inside;   // row-major over the lattice

    size_t flat_index(const std::vector<int>& cell) const;
    RadialPoint cell_center(const std::vector<int>& cell) const;
    bool is_inside(const std::vector<int>& cell) const { return inside[flat_index(cell)] != 0; }
    long count_inside() const;
};

BooleanLattice base_membership_grid(const DomainSpec& spec, const std::vector<int>& resolution);
BooleanLattice base_membership_grid(const DomainSpec& spec, int resolution_per_axis);

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

struct SymbolNode;
using SymbolPtr = std::shared_ptr<const SymbolNode>;

/// Symbol AST mirroring the JSON mini-language. Structured terms let the
/// integration layer treat indicator factors exactly (by region restriction)
/// and linear combinations by linearity.
struct SymbolNode {
    enum class Type { Power, Annulus, LinComb, AngularReZ, RadialClosure };
    Type type = Type::Power;

    MultiIndex exponents;                                  // Power: prod r_k^{m_k}
    double inner = 0.0, outer = 0.0;                       // Annulus: 1_{inner <= |r| < outer}
    std::vector<std::pair<double, SymbolPtr>> terms;       // LinComb
    int axis = 0;                                          // AngularReZ: Re z_axis
    std::function<double(const RadialPoint&)> radial_fn;   // RadialClosure
    double bound = 1.0;                                    // sup-norm estimate
};

struct SymbolSpec {
    enum class Kind { SeparatelyRadial, General };

    Kind kind = Kind::SeparatelyRadial;
    SymbolPtr root;
    double bound = 1.0;

    double eval_radial(const RadialPoint& r) const;  // throws for general symbols
    double eval_full(const PolarPoint& z) const;
    std::string describe() const;
};

SymbolSpec symbol_power(MultiIndex exponents);
SymbolSpec symbol_annulus(double inner, double outer);
SymbolSpec symbol_lincomb(std::vector<std::pair<double, SymbolSpec>> terms);
SymbolSpec symbol_angular_re_z(int axis, int dim);
SymbolSpec symbol_radial(std::function<double(const RadialPoint&)> fn, double bound);

}  // namespace rtoep

#include "rtoep/domain.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rtoep/special.hpp"

namespace rtoep {

bool RadialPoint::strictly_positive(double floor) const {
    for (double v : r)
        if (!(v > floor)) return false;
    return true;
}

double RadialPoint::euclidean_norm() const {
    double s = 0.0;
    for (double v : r) s += v * v;
    return std::sqrt(s);
}

PolarPoint PolarPoint::from_cartesian(const std::vector<std::complex<double>>& z) {
    RadialPoint r;
    std::vector<double> theta;
    r.r.reserve(z.size());
    theta.reserve(z.size());
    for (const auto& zk : z) {
        r.r.push_back(std::abs(zk));
        double th = std::arg(zk);
        if (th < 0.0) th += 2.0 * M_PI;  // canonical range [0, 2 pi)
        theta.push_back(th);
    }
    return PolarPoint(std::move(r), std::move(theta));
}

namespace {

double squared_norm(const RadialPoint& p) {
    double s = 0.0;
    for (double v : p.r) s += v * v;
    return s;
}

DomainSpec make_ball(int n, double lambda) {
    if (lambda <= -1.0)
        throw std::invalid_argument("catalog_lookup: ball-lambda requires lambda > -1");
    DomainSpec d;
    d.dimension = n;
    d.name = "ball-lambda";
    d.lambda = lambda;
    d.is_ball = true;
    d.base_bounding_box.assign(static_cast<size_t>(n), 1.0);
    d.base_membership = [](const RadialPoint& p) { return squared_norm(p) < 1.0; };
    // c_lambda = Gamma(n+lambda+1) / (pi^n Gamma(lambda+1)) makes mu dv a
    // probability measure.
    const double c_lambda =
        std::exp(log_gamma(n + lambda + 1.0) - log_gamma(lambda + 1.0) - n * std::log(M_PI));
    d.weight.evaluate = [c_lambda, lambda](const RadialPoint& p) {
        const double one_minus = 1.0 - squared_norm(p);
        return c_lambda * std::pow(one_minus, lambda);
    };
    d.weight.total_mass = 1.0;  // probability measure
    DefiningFunction delta;
    delta.value = [](const RadialPoint& p) { return squared_norm(p) - 1.0; };
    delta.radial_partial = [](const RadialPoint& p, int k) { return 2.0 * p[k]; };
    d.defining_function = delta;
    return d;
}

DomainSpec make_polydisk(int n) {
    DomainSpec d;
    d.dimension = n;
    d.name = "polydisk";
    d.base_bounding_box.assign(static_cast<size_t>(n), 1.0);
    d.base_membership = [](const RadialPoint& p) {
        for (double v : p.r)
            if (v >= 1.0) return false;
        return true;
    };
    const double c = std::pow(M_PI, -n);  // probability weight on the polydisk
    d.weight.evaluate = [c](const RadialPoint&) { return c; };
    d.weight.total_mass = 1.0;
    return d;
}

DomainSpec make_superellipsoid(int n, double q) {
    if (q < 1.0)
        throw std::invalid_argument("catalog_lookup: superellipsoid requires exponent q >= 1");
    DomainSpec d;
    d.dimension = n;
    d.name = "superellipsoid";
    d.superellipsoid_exponent = q;
    d.base_bounding_box.assign(static_cast<size_t>(n), 1.0);
    d.base_membership = [q](const RadialPoint& p) {
        double s = 0.0;
        for (double v : p.r) s += std::pow(v, 2.0 * q);
        return s < 1.0;
    };
    d.weight.evaluate = [](const RadialPoint&) { return 1.0; };
    DefiningFunction delta;
    delta.value = [q](const RadialPoint& p) {
        double s = 0.0;
        for (double v : p.r) s += std::pow(v, 2.0 * q);
        return s - 1.0;
    };
    delta.radial_partial = [q](const RadialPoint& p, int k) {
        return 2.0 * q * std::pow(p[k], 2.0 * q - 1.0);
    };
    d.defining_function = delta;
    return d;
}

}  // namespace

DomainSpec catalog_lookup(const std::string& name, int n, const CatalogParams& params) {
    if (n < 1) throw std::invalid_argument("catalog_lookup: dimension must be >= 1");
    if (name == "ball-lambda") return make_ball(n, params.lambda);
    if (name == "polydisk") return make_polydisk(n);
    if (name == "superellipsoid") return make_superellipsoid(n, params.exponent);
    throw std::invalid_argument("catalog_lookup: unknown domain name '" + name + "'");
}

size_t BooleanLattice::flat_index(const std::vector<int>& cell) const {
    size_t idx = 0;
    for (int k = 0; k < dim; ++k) {
        const int c = cell[static_cast<size_t>(k)];
        const int res = resolution[static_cast<size_t>(k)];
        if (c < 0 || c >= res) throw std::out_of_range("BooleanLattice: cell index out of range");
        idx = idx * static_cast<size_t>(res) + static_cast<size_t>(c);
    }
    return idx;
}

RadialPoint BooleanLattice::cell_center(const std::vector<int>& cell) const {
    RadialPoint p;
    p.r.resize(static_cast<size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        const double h = upper[static_cast<size_t>(k)] / resolution[static_cast<size_t>(k)];
        p.r[static_cast<size_t>(k)] = (cell[static_cast<size_t>(k)] + 0.5) * h;
    }
    return p;
}

long BooleanLattice::count_inside() const {
    long c = 0;
    for (uint8_t v : inside) c += v;
    return c;
}

BooleanLattice base_membership_grid(const DomainSpec& spec, const std::vector<int>& resolution) {
    if (static_cast<int>(resolution.size()) != spec.dimension)
        throw std::invalid_argument("base_membership_grid: resolution size mismatch");
    for (int r : resolution)
        if (r < 2) throw std::invalid_argument("base_membership_grid: resolution must be >= 2 per axis");

    BooleanLattice lat;
    lat.dim = spec.dimension;
    lat.resolution = resolution;
    lat.upper = spec.base_bounding_box;
    size_t total = 1;
    for (int r : resolution) total *= static_cast<size_t>(r);
    lat.inside.resize(total);

    std::vector<int> cell(static_cast<size_t>(lat.dim), 0);
    for (size_t flat = 0; flat < total; ++flat) {
        size_t rem = flat;
        for (int k = lat.dim - 1; k >= 0; --k) {
            const size_t res = static_cast<size_t>(resolution[static_cast<size_t>(k)]);
            cell[static_cast<size_t>(k)] = static_cast<int>(rem % res);
            rem /= res;
        }
        lat.inside[flat] = spec.base_membership(lat.cell_center(cell)) ? 1 : 0;
    }
    return lat;
}

BooleanLattice base_membership_grid(const DomainSpec& spec, int resolution_per_axis) {
    return base_membership_grid(
        spec, std::vector<int>(static_cast<size_t>(spec.dimension), resolution_per_axis));
}

// ---------------------------------------------------------------------------
// Symbols
// ---------------------------------------------------------------------------

namespace {

double eval_node_radial(const SymbolNode& node, const RadialPoint& r) {
    switch (node.type) {
        case SymbolNode::Type::Power: {
            double v = 1.0;
            for (int k = 0; k < node.exponents.dim(); ++k)
                for (int j = 0; j < node.exponents[k]; ++j) v *= r[k];
            return v;
        }
        case SymbolNode::Type::Annulus: {
            const double norm = r.euclidean_norm();
            return (norm >= node.inner && norm < node.outer) ? 1.0 : 0.0;
        }
        case SymbolNode::Type::LinComb: {
            double v = 0.0;
            for (const auto& [c, sub] : node.terms) v += c * eval_node_radial(*sub, r);
            return v;
        }
        case SymbolNode::Type::RadialClosure:
            return node.radial_fn(r);
        case SymbolNode::Type::AngularReZ:
            throw std::logic_error("symbol: angular term has no radial evaluation");
    }
    throw std::logic_error("symbol: unreachable");
}

double eval_node_full(const SymbolNode& node, const PolarPoint& z) {
    if (node.type == SymbolNode::Type::AngularReZ) return z.z(node.axis).real();
    if (node.type == SymbolNode::Type::LinComb) {
        double v = 0.0;
        for (const auto& [c, sub] : node.terms) v += c * eval_node_full(*sub, z);
        return v;
    }
    return eval_node_radial(node, z.radius);
}

std::string describe_node(const SymbolNode& node) {
    std::ostringstream os;
    switch (node.type) {
        case SymbolNode::Type::Power:
            os << "power" << node.exponents.str();
            break;
        case SymbolNode::Type::Annulus:
            os << "annulus[" << node.inner << "," << node.outer << ")";
            break;
        case SymbolNode::Type::LinComb: {
            os << "lincomb(";
            bool first = true;
            for (const auto& [c, sub] : node.terms) {
                if (!first) os << " + ";
                os << c << "*" << describe_node(*sub);
                first = false;
            }
            os << ")";
            break;
        }
        case SymbolNode::Type::AngularReZ:
            os << "Re z_" << node.axis + 1;
            break;
        case SymbolNode::Type::RadialClosure:
            os << "radial-closure";
            break;
    }
    return os.str();
}

}  // namespace

double SymbolSpec::eval_radial(const RadialPoint& r) const {
    if (kind != Kind::SeparatelyRadial)
        throw std::logic_error("SymbolSpec: general symbol has no radial evaluation");
    return eval_node_radial(*root, r);
}

double SymbolSpec::eval_full(const PolarPoint& z) const { return eval_node_full(*root, z); }

std::string SymbolSpec::describe() const { return describe_node(*root); }

SymbolSpec symbol_power(MultiIndex exponents) {
    auto node = std::make_shared<SymbolNode>();
    node->type = SymbolNode::Type::Power;
    node->exponents = std::move(exponents);
    SymbolSpec s;
    s.kind = SymbolSpec::Kind::SeparatelyRadial;
    s.root = node;
    s.bound = 1.0;  // sup over a bounded base with box <= 1 per axis
    return s;
}

SymbolSpec symbol_annulus(double inner, double outer) {
    if (!(0.0 <= inner && inner < outer))
        throw std::invalid_argument("symbol_annulus: need 0 <= inner < outer");
    auto node = std::make_shared<SymbolNode>();
    node->type = SymbolNode::Type::Annulus;
    node->inner = inner;
    node->outer = outer;
    SymbolSpec s;
    s.kind = SymbolSpec::Kind::SeparatelyRadial;
    s.root = node;
    s.bound = 1.0;
    return s;
}

SymbolSpec symbol_lincomb(std::vector<std::pair<double, SymbolSpec>> terms) {
    if (terms.empty()) throw std::invalid_argument("symbol_lincomb: empty term list");
    auto node = std::make_shared<SymbolNode>();
    node->type = SymbolNode::Type::LinComb;
    SymbolSpec s;
    s.kind = SymbolSpec::Kind::SeparatelyRadial;
    s.bound = 0.0;
    for (auto& [c, sub] : terms) {
        if (sub.kind == SymbolSpec::Kind::General) s.kind = SymbolSpec::Kind::General;
        s.bound += std::abs(c) * sub.bound;
        node->terms.emplace_back(c, sub.root);
    }
    s.root = node;
    return s;
}

SymbolSpec symbol_angular_re_z(int axis, int dim) {
    if (axis < 0 || axis >= dim) throw std::invalid_argument("symbol_angular_re_z: bad axis");
    auto node = std::make_shared<SymbolNode>();
    node->type = SymbolNode::Type::AngularReZ;
    node->axis = axis;
    SymbolSpec s;
    s.kind = SymbolSpec::Kind::General;
    s.root = node;
    s.bound = 1.0;
    return s;
}

SymbolSpec symbol_radial(std::function<double(const RadialPoint&)> fn, double bound) {
    auto node = std::make_shared<SymbolNode>();
    node->type = SymbolNode::Type::RadialClosure;
    node->radial_fn = std::move(fn);
    node->bound = bound;
    SymbolSpec s;
    s.kind = SymbolSpec::Kind::SeparatelyRadial;
    s.root = node;
    s.bound = bound;
    return s;
}

}  // namespace rtoep

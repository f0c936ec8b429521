#include "rtoep/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "rtoep/bergman.hpp"
#include "rtoep/geometry.hpp"
#include "rtoep/toeplitz.hpp"
#include "rtoep/verify.hpp"

namespace rtoep {

using nlohmann::json;

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

namespace {

const std::set<std::string> kCommands = {"alpha",  "gamma",      "spectrum",  "oracle",
                                         "commutator", "kernel", "metric",    "curvature",
                                         "asymptotics", "verify"};

struct CommandInfo {
    std::set<std::string> required;
    std::set<std::string> optional;
    const char* usage;
};

const std::map<std::string, CommandInfo>& command_table() {
    static const std::map<std::string, CommandInfo> table = {
        {"alpha",
         {{"domain", "truncation"},
          {"tolerances", "output", "format"},
          "normalization constants alpha_p on {|p| <= truncation}\n"
          "  required: domain {name,n[,params]}, truncation\n"
          "  output: CSV p_1..p_n, alpha_p, method, err_estimate"}},
        {"gamma",
         {{"domain", "symbol", "truncation"},
          {"tolerances", "output", "format"},
          "eigenvalue sequence gamma_a(p) of the Toeplitz operator T_a\n"
          "  required: domain, symbol, truncation\n"
          "  output: CSV p_1..p_n, gamma"}},
        {"spectrum",
         {{"domain", "symbol", "truncation"},
          {"tolerances", "output"},
          "spectral report from the gamma sequence (JSON only)\n"
          "  required: domain, symbol, truncation\n"
          "  output: JSON {norm, spectrum[], essential[], compact}"}},
        {"oracle",
         {{"domain", "symbol", "truncation"},
          {"tolerances", "output", "format"},
          "brute-force matrix elements <a e_p, e_q> by 2n-dim quadrature\n"
          "  required: domain, symbol, truncation\n"
          "  output: CSV q_1..q_n, p_1..p_n, re, im (plus summary comments)"}},
        {"commutator",
         {{"domain", "symbols", "truncation"},
          {"tolerances", "output", "format"},
          "Frobenius norm of [T_a, T_b] from oracle matrices\n"
          "  required: domain, symbols (exactly 2), truncation\n"
          "  output: JSON or single-row CSV with the norm"}},
        {"kernel",
         {{"domain"},
          {"truncation", "tolerances", "output", "format", "samples", "direction"},
          "Bergman kernel K(z,z) along a radial ray, series vs closed form\n"
          "  required: domain; optional: truncation, samples, direction\n"
          "  output: CSV t, r_1..r_n, K_series, shell_tail[, K_closed]"}},
        {"metric",
         {{"domain", "points"},
          {"truncation", "tolerances", "output", "format", "mode"},
          "Bergman-metric components F_kl at the given base points\n"
          "  required: domain, points [[r...],...]; optional: mode\n"
          "  (series-termwise | finite-difference), truncation\n"
          "  output: CSV r_1..r_n, F_kl upper triangle"}},
        {"curvature",
         {{"domain", "points"},
          {"tolerances", "output", "format"},
          "curvature report: C_k, C_kl (ball closed forms) and Chat_k\n"
          "  required: domain, points [[r...],...]\n"
          "  output: CSV r, F_11..F_nn, C_k..., Chat_k..., normalization"}},
        {"asymptotics",
         {{"domain", "axis"},
          {"endpoint", "samples", "distance_min", "distance_max", "tolerances", "output",
           "format"},
          "Chat_k scan along a ray to a non-degenerate boundary point\n"
          "  required: domain (ball catalog), axis (1-based)\n"
          "  optional: endpoint [u...], samples, distance_min, distance_max\n"
          "  output: CSV distance, chat, deviation"}},
        {"verify",
         {{"domain"},
          {"truncation", "tolerances", "output", "format"},
          "full property suite: gamma identity, alpha routes, diagonality,\n"
          "  commutators, metric orthogonality, curvature chain, Fefferman\n"
          "  recursion, R/R* identities; exits 1 on any failure\n"
          "  optional tolerance overrides inside \"tolerances\": gamma_identity,\n"
          "  alpha_routes, diagonality, commutator, negative_control,\n"
          "  metric_cross, curvature_chain, fefferman, rr_identity"}},
    };
    return table;
}

[[noreturn]] void fail(const std::string& msg) { throw SpecParseError(msg); }

void require_keys(const json& j, const CommandInfo& info) {
    for (const auto& key : info.required)
        if (!j.contains(key)) fail("runspec: missing required field '" + key + "'");
    for (const auto& [key, value] : j.items()) {
        if (key == "command") continue;
        if (!info.required.count(key) && !info.optional.count(key))
            fail("runspec: unknown field '" + key + "'");
    }
}

}  // namespace

DomainSpec domain_from_json(const json& j) {
    if (!j.is_object()) fail("domain: descriptor must be an object");
    for (const auto& [key, value] : j.items())
        if (key != "name" && key != "n" && key != "params")
            fail("domain: unknown field '" + key + "'");
    if (!j.contains("name") || !j.contains("n")) fail("domain: need 'name' and 'n'");
    const std::string name = j.at("name").get<std::string>();
    const int n = j.at("n").get<int>();
    CatalogParams params;
    if (j.contains("params")) {
        for (const auto& [key, value] : j.at("params").items()) {
            if (key == "lambda")
                params.lambda = value.get<double>();
            else if (key == "exponent")
                params.exponent = value.get<double>();
            else
                fail("domain params: unknown field '" + key + "'");
        }
    }
    try {
        return catalog_lookup(name, n, params);
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
}

SymbolSpec symbol_from_json(const json& j, int dim) {
    if (!j.is_object() || !j.contains("type")) fail("symbol: need an object with 'type'");
    const std::string type = j.at("type").get<std::string>();
    if (type == "power") {
        if (!j.contains("exponents")) fail("symbol power: need 'exponents'");
        auto e = j.at("exponents").get<std::vector<int>>();
        if (static_cast<int>(e.size()) != dim) fail("symbol power: exponents size != n");
        for (const auto& [key, value] : j.items())
            if (key != "type" && key != "exponents") fail("symbol power: unknown field '" + key + "'");
        return symbol_power(MultiIndex(std::move(e)));
    }
    if (type == "annulus") {
        if (!j.contains("inner") || !j.contains("outer")) fail("symbol annulus: need inner/outer");
        for (const auto& [key, value] : j.items())
            if (key != "type" && key != "inner" && key != "outer")
                fail("symbol annulus: unknown field '" + key + "'");
        try {
            return symbol_annulus(j.at("inner").get<double>(), j.at("outer").get<double>());
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    if (type == "lincomb") {
        if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty())
            fail("symbol lincomb: need a non-empty 'terms' array");
        for (const auto& [key, value] : j.items())
            if (key != "type" && key != "terms") fail("symbol lincomb: unknown field '" + key + "'");
        std::vector<std::pair<double, SymbolSpec>> terms;
        for (const auto& t : j.at("terms")) {
            if (!t.contains("coef") || !t.contains("symbol"))
                fail("symbol lincomb: each term needs 'coef' and 'symbol'");
            terms.emplace_back(t.at("coef").get<double>(), symbol_from_json(t.at("symbol"), dim));
        }
        return symbol_lincomb(std::move(terms));
    }
    if (type == "angular-re-z") {
        if (!j.contains("axis")) fail("symbol angular-re-z: need 'axis' (1-based)");
        for (const auto& [key, value] : j.items())
            if (key != "type" && key != "axis") fail("symbol angular-re-z: unknown field '" + key + "'");
        const int axis = j.at("axis").get<int>();
        if (axis < 1 || axis > dim) fail("symbol angular-re-z: axis out of range");
        return symbol_angular_re_z(axis - 1, dim);
    }
    fail("symbol: unknown type '" + type + "'");
}

RunSpec parse_runspec(const json& j) {
    if (!j.is_object()) fail("runspec: top level must be an object");
    if (!j.contains("command")) fail("runspec: missing 'command'");
    RunSpec spec;
    spec.command = j.at("command").get<std::string>();
    if (!kCommands.count(spec.command)) fail("runspec: unknown command '" + spec.command + "'");
    const CommandInfo& info = command_table().at(spec.command);
    require_keys(j, info);

    spec.domain = j.at("domain");
    (void)domain_from_json(spec.domain);  // validate eagerly
    const int n = spec.domain.at("n").get<int>();

    if (j.contains("symbol")) {
        spec.symbols.push_back(j.at("symbol"));
        (void)symbol_from_json(j.at("symbol"), n);
    }
    if (j.contains("symbols")) {
        if (!j.at("symbols").is_array() || j.at("symbols").size() != 2)
            fail("runspec: 'symbols' must be an array of exactly 2 descriptors");
        for (const auto& s : j.at("symbols")) {
            (void)symbol_from_json(s, n);
            spec.symbols.push_back(s);
        }
    }

    if (j.contains("truncation")) {
        spec.truncation = j.at("truncation").get<int>();
        if (spec.truncation < 0) fail("runspec: truncation must be >= 0");
    } else {
        // defaults: 12 for n <= 2, 8 otherwise; verify uses its own small P
        spec.truncation = spec.command == "verify" ? 4 : (n <= 2 ? 12 : 8);
    }

    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        static const std::set<std::string> tol_keys = {
            "rel",          "abs",          "gamma_identity", "alpha_routes",
            "diagonality",  "commutator",   "negative_control", "metric_cross",
            "curvature_chain", "fefferman", "rr_identity"};
        for (const auto& [key, value] : t.items())
            if (!tol_keys.count(key)) fail("tolerances: unknown field '" + key + "'");
        if (t.contains("rel")) spec.rel_tol = t.at("rel").get<double>();
        if (t.contains("abs")) spec.abs_tol = t.at("abs").get<double>();
        if (!(spec.rel_tol > 0.0)) fail("tolerances: rel must be > 0");
        spec.extra["tolerances"] = t;
    }
    if (j.contains("output")) spec.output = j.at("output").get<std::string>();
    if (j.contains("format")) {
        spec.format = j.at("format").get<std::string>();
        if (spec.format != "csv" && spec.format != "json")
            fail("runspec: format must be 'csv' or 'json'");
    }
    if (spec.command == "spectrum") spec.format = "json";

    for (const char* key : {"points", "mode", "samples", "direction", "axis", "endpoint",
                            "distance_min", "distance_max"})
        if (j.contains(key)) spec.extra[key] = j.at(key);
    return spec;
}

RunSpec parse_runspec_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("runspec: invalid JSON: ") + e.what());
    }
    return parse_runspec(j);
}

json RunSpec::to_json() const {
    json j;
    j["command"] = command;
    j["domain"] = domain;
    if (symbols.size() == 1) j["symbol"] = symbols[0];
    if (symbols.size() == 2) j["symbols"] = symbols;
    j["truncation"] = truncation;
    if (extra.contains("tolerances"))
        j["tolerances"] = extra.at("tolerances");
    else
        j["tolerances"] = json{{"rel", rel_tol}, {"abs", abs_tol}};
    if (!output.empty()) j["output"] = output;
    j["format"] = format;
    for (const auto& [key, value] : extra.items())
        if (key != "tolerances") j[key] = value;
    return j;
}

std::string describe(const std::string& command) {
    auto it = command_table().find(command);
    if (it == command_table().end()) fail("describe: unknown command '" + command + "'");
    std::ostringstream os;
    os << "rtoep " << command << " --spec <file.json> [--out <path>] [--format csv|json]\n"
       << it->second.usage << "\n"
       << "common fields: domain {\"name\":\"ball-lambda|polydisk|superellipsoid\","
          "\"n\":int,\"params\":{...}}, tolerances {\"rel\",\"abs\"}, output, format\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Artifact emission
// ---------------------------------------------------------------------------

namespace {

std::string weight_description(const DomainSpec& d) {
    if (d.name == "ball-lambda") {
        std::ostringstream os;
        os << "mu_lambda, lambda=" << d.lambda << " (probability)";
        return os.str();
    }
    if (d.name == "polydisk") return "pi^-n (probability)";
    if (d.name == "superellipsoid") return "1 (unnormalized)";
    return "custom";
}

std::string header_block(const RunSpec& spec) {
    const DomainSpec d = domain_from_json(spec.domain);
    std::ostringstream os;
    os << "# rtoep " << spec.command << "\n";
    os << "# domain: " << d.name << " n=" << d.dimension;
    if (d.name == "ball-lambda") os << " lambda=" << d.lambda;
    if (d.name == "superellipsoid") os << " exponent=" << d.superellipsoid_exponent;
    os << "\n";
    os << "# weight: " << weight_description(d) << "\n";
    os << "# truncation: " << spec.truncation << "\n";
    os << "# rel_tol: " << format_number(spec.rel_tol) << "\n";
    os << "# abs_tol: " << format_number(spec.abs_tol) << "\n";
    os << "# runspec: " << spec.to_json().dump() << "\n";
    return os.str();
}

void emit(const RunSpec& spec, const std::string& body, std::ostream& log) {
    const std::string text = header_block(spec) + body;
    if (spec.output.empty()) {
        log << text;
        return;
    }
    std::ofstream out(spec.output, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + spec.output);
    out << text;
}

QuadratureOptions quad_options(const RunSpec& spec) {
    QuadratureOptions q;
    q.rel_tol = spec.rel_tol;
    q.abs_tol = spec.abs_tol;
    return q;
}

std::vector<RadialPoint> points_from_extra(const RunSpec& spec, int n) {
    std::vector<RadialPoint> pts;
    if (!spec.extra.contains("points")) fail("runspec: missing 'points'");
    for (const auto& row : spec.extra.at("points")) {
        auto v = row.get<std::vector<double>>();
        if (static_cast<int>(v.size()) != n) fail("points: row size != n");
        pts.emplace_back(std::move(v));
    }
    if (pts.empty()) fail("points: empty list");
    return pts;
}

int run_alpha(const RunSpec& spec, std::ostream& log) {
    const DomainSpec domain = domain_from_json(spec.domain);
    const auto table = compute_alpha(domain, spec.truncation, quad_options(spec));
    if (spec.format == "json") {
        json rows = json::array();
        for (const auto& [p, a] : table.alpha)
            rows.push_back({{"p", p.entries()},
                            {"alpha", a},
                            {"method", table.method},
                            {"err_estimate", table.error_estimate.at(p)}});
        emit(spec, json{{"alpha", rows}}.dump(2) + "\n", log);
    } else {
        emit(spec, normalization_table_csv(table), log);
    }
    return table.all_converged ? kExitOk : kExitNotConverged;
}

int run_gamma(const RunSpec& spec, std::ostream& log) {
    const DomainSpec domain = domain_from_json(spec.domain);
    const SymbolSpec a = symbol_from_json(spec.symbols.at(0), domain.dimension);
    const auto g = compute_gamma(domain, a, spec.truncation, quad_options(spec));
    if (spec.format == "json") {
        json rows = json::array();
        for (const auto& [p, v] : g.values) rows.push_back({{"p", p.entries()}, {"gamma", v}});
        emit(spec, json{{"gamma", rows}}.dump(2) + "\n", log);
    } else {
        emit(spec, gamma_sequence_csv(g), log);
    }
    return g.all_converged ? kExitOk : kExitNotConverged;
}

int run_spectrum(const RunSpec& spec, std::ostream& log) {
    const DomainSpec domain = domain_from_json(spec.domain);
    const SymbolSpec a = symbol_from_json(spec.symbols.at(0), domain.dimension);
    const auto g = compute_gamma(domain, a, spec.truncation, quad_options(spec));
    emit(spec, spectral_report_json(spectral_report(g)) + "\n", log);
    return g.all_converged ? kExitOk : kExitNotConverged;
}

int run_oracle(const RunSpec& spec, std::ostream& log) {
    const DomainSpec domain = domain_from_json(spec.domain);
    const SymbolSpec a = symbol_from_json(spec.symbols.at(0), domain.dimension);
    QuadratureOptions q = quad_options(spec);
    if (q.rel_tol < 1e-8) q.rel_tol = 1e-8;  // 2n-dim oracle default (cost-driven)
    const auto M = matrix_oracle(domain, a, spec.truncation, q);
    const int n = domain.dimension;
    std::ostringstream body;
    if (spec.format == "json") {
        json rows = json::array();
        for (int qi = 0; qi < M.size(); ++qi)
            for (int pi = 0; pi < M.size(); ++pi)
                rows.push_back({{"q", M.index_set[static_cast<size_t>(qi)].entries()},
                                {"p", M.index_set[static_cast<size_t>(pi)].entries()},
                                {"re", M.at(qi, pi).real()},
                                {"im", M.at(qi, pi).imag()}});
        body << json{{"entries", rows}, {"max_offdiag", M.max_off_diagonal()}}.dump(2) << "\n";
    } else {
        for (int k = 1; k <= n; ++k) body << "q_" << k << ",";
        for (int k = 1; k <= n; ++k) body << "p_" << k << ",";
        body << "re,im\n";
        for (int qi = 0; qi < M.size(); ++qi) {
            for (int pi = 0; pi < M.size(); ++pi) {
                for (int k = 0; k < n; ++k) body << M.index_set[static_cast<size_t>(qi)][k] << ",";
                for (int k = 0; k < n; ++k) body << M.index_set[static_cast<size_t>(pi)][k] << ",";
                body << format_number(M.at(qi, pi).real()) << ","
                     << format_number(M.at(qi, pi).imag()) << "\n";
            }
        }
        body << "# max_offdiag: " << format_number(M.max_off_diagonal()) << "\n";
    }
    emit(spec, body.str(), log);
    return M.converged ? kExitOk : kExitNotConverged;
}

int run_commutator(const RunSpec& spec, std::ostream& log) {
    const DomainSpec domain = domain_from_json(spec.domain);
    const SymbolSpec a = symbol_from_json(spec.symbols.at(0), domain.dimension);
    const SymbolSpec b = symbol_from_json(spec.symbols.at(1), domain.dimension);
    QuadratureOptions q = quad_options(spec);
    if (q.rel_tol < 1e-8) q.rel_tol = 1e-8;
    const auto A = matrix_oracle(domain, a, spec.truncation, q);
    const auto B = matrix_oracle(domain, b, spec.truncation, q);
    const double norm = commutator_norm(A, B);
    if (spec.format == "json") {
        emit(spec,
             json{{"commutator_frobenius", norm}, {"method", "oracle-integration"}}.dump(2) + "\n",
             log);
    } else {
        emit(spec, "commutator_frobenius\n" + format_number(norm) + "\n", log);
    }
    return (A.converged && B.converged) ? kExitOk : kExitNotConverged;
}

int run_kernel(const RunSpec& spec, std::ostream& log) {
    const DomainSpec domain = domain_from_json(spec.domain);
    const int n = domain.dimension;
    const auto table = compute_alpha(domain, spec.truncation, quad_options(spec));
    const KernelSeries series = make_kernel_series(table);

    std::vector<double> direction(static_cast<size_t>(n), 1.0);
    if (spec.extra.contains("direction")) {
        direction = spec.extra.at("direction").get<std::vector<double>>();
        if (static_cast<int>(direction.size()) != n) fail("kernel: direction size != n");
    }
    // scale the direction to the base boundary (membership is monotone along rays)
    double lo = 0.0, hi = 1.0;
    auto at_scale = [&](double s) {
        RadialPoint r;
        r.r.resize(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) r.r[static_cast<size_t>(k)] = s * direction[static_cast<size_t>(k)];
        return r;
    };
    while (domain.base_membership(at_scale(hi))) hi *= 2.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (domain.base_membership(at_scale(mid)) ? lo : hi) = mid;
    }

    int samples = 16;
    if (spec.extra.contains("samples")) samples = spec.extra.at("samples").get<int>();
    if (samples < 2) fail("kernel: samples must be >= 2");

    std::ostringstream body;
    body << "t,";
    for (int k = 1; k <= n; ++k) body << "r_" << k << ",";
    body << "K_series,shell_tail";
    if (domain.is_ball) body << ",K_closed";
    body << "\n";
    for (int i = 1; i <= samples; ++i) {
        const double t = 0.95 * static_cast<double>(i) / samples;
        const RadialPoint r = at_scale(t * lo);
        const PolarPoint z(r, std::vector<double>(static_cast<size_t>(n), 0.0));
        const auto kv = kernel_eval(series, z, z);
        // last-shell magnitude as a truncation-error proxy
        double shell = 0.0;
        for (const auto& [p, alpha] : table.alpha) {
            if (p.order() != spec.truncation) continue;
            double term = alpha * alpha * std::pow(2.0 * M_PI, -n);
            for (int k = 0; k < n; ++k) term *= std::pow(r[k], 2 * p[k]);
            shell += term;
        }
        body << format_number(t * lo) << ",";
        for (int k = 0; k < n; ++k) body << format_number(r[k]) << ",";
        body << format_number(kv.real()) << "," << format_number(shell);
        if (domain.is_ball)
            body << "," << format_number(ball_kernel_closed_form(n, domain.lambda, z, z).real());
        body << "\n";
    }
    emit(spec, body.str(), log);
    return table.all_converged ? kExitOk : kExitNotConverged;
}

int run_metric(const RunSpec& spec, std::ostream& log) {
    const DomainSpec domain = domain_from_json(spec.domain);
    const int n = domain.dimension;
    const auto pts = points_from_extra(spec, n);
    DerivativeMode mode = DerivativeMode::SeriesTermwise;
    if (spec.extra.contains("mode")) {
        const std::string m = spec.extra.at("mode").get<std::string>();
        if (m == "finite-difference")
            mode = DerivativeMode::FiniteDifference;
        else if (m != "series-termwise")
            fail("metric: mode must be series-termwise or finite-difference");
    }
    const SeriesKernel kernel(compute_alpha(domain, spec.truncation, quad_options(spec)));

    std::ostringstream body;
    for (int k = 1; k <= n; ++k) body << "r_" << k << ",";
    for (int k = 1; k <= n; ++k)
        for (int l = k; l <= n; ++l) body << "F_" << k << l << (k == n && l == n ? "" : ",");
    body << "\n";
    for (const auto& r : pts) {
        const auto F = metric_components(kernel, r, mode);
        for (int k = 0; k < n; ++k) body << format_number(r[k]) << ",";
        for (int k = 0; k < n; ++k)
            for (int l = k; l < n; ++l)
                body << format_number(F[static_cast<size_t>(k)][static_cast<size_t>(l)])
                     << (k == n - 1 && l == n - 1 ? "" : ",");
        body << "\n";
    }
    emit(spec, body.str(), log);
    return kExitOk;
}

int run_curvature(const RunSpec& spec, std::ostream& log) {
    const DomainSpec domain = domain_from_json(spec.domain);
    const int n = domain.dimension;
    const auto pts = points_from_extra(spec, n);

    std::ostringstream body;
    for (int k = 1; k <= n; ++k) body << "r_" << k << ",";
    for (int k = 1; k <= n; ++k) body << "F_" << k << k << ",";
    if (domain.is_ball)
        for (int k = 1; k <= n; ++k) body << "C_" << k << ",";
    for (int k = 1; k <= n; ++k) body << "Chat_" << k << ",";
    body << "normalization\n";

    const BallKernel ball_kernel(n, domain.is_ball ? domain.lambda : 0.0);
    std::unique_ptr<SeriesKernel> series;
    if (!domain.is_ball)
        series = std::make_unique<SeriesKernel>(
            compute_alpha(domain, n <= 2 ? 12 : 8, quad_options(spec)));
    const RadialKernel& kernel =
        domain.is_ball ? static_cast<const RadialKernel&>(ball_kernel) : *series;

    for (const auto& r : pts) {
        const auto F = metric_components(kernel, r);
        for (int k = 0; k < n; ++k) body << format_number(r[k]) << ",";
        for (int k = 0; k < n; ++k)
            body << format_number(F[static_cast<size_t>(k)][static_cast<size_t>(k)]) << ",";
        if (domain.is_ball)
            for (int k = 0; k < n; ++k)
                body << format_number(ball_curvature_axis(r, k).value) << ",";
        for (int k = 0; k < n; ++k) body << format_number(chat_k(kernel, r, k).value) << ",";
        body << (domain.is_ball ? "C=sectional-normalized;Chat=bergman" : "Chat=bergman") << "\n";
    }
    emit(spec, body.str(), log);
    return kExitOk;
}

int run_asymptotics(const RunSpec& spec, std::ostream& log) {
    const DomainSpec domain = domain_from_json(spec.domain);
    if (!domain.is_ball)
        fail("asymptotics: boundary scans need an exact kernel near the boundary; "
             "only ball-lambda domains are supported");
    const int n = domain.dimension;
    if (!spec.extra.contains("axis")) fail("asymptotics: missing 'axis'");
    const int axis = spec.extra.at("axis").get<int>();
    if (axis < 1 || axis > n) fail("asymptotics: axis out of range");

    RadialPoint u;
    if (spec.extra.contains("endpoint")) {
        auto v = spec.extra.at("endpoint").get<std::vector<double>>();
        if (static_cast<int>(v.size()) != n) fail("asymptotics: endpoint size != n");
        u = RadialPoint(std::move(v));
    } else {
        u = RadialPoint(std::vector<double>(static_cast<size_t>(n), 0.0));
        u[axis - 1] = 1.0;
    }
    int samples = 12;
    if (spec.extra.contains("samples")) samples = spec.extra.at("samples").get<int>();
    double dmin = 1e-4, dmax = 0.2;
    if (spec.extra.contains("distance_min")) dmin = spec.extra.at("distance_min").get<double>();
    if (spec.extra.contains("distance_max")) dmax = spec.extra.at("distance_max").get<double>();

    // the theorem concerns the unweighted Bergman kernel
    const BallKernel kernel(n, 0.0);
    const auto scan = boundary_asymptotics_scan(domain, kernel, u, axis - 1, samples, dmin, dmax);

    std::ostringstream body;
    body << "distance,chat,deviation\n";
    for (const auto& s : scan.samples)
        body << format_number(s.distance) << "," << format_number(s.chat) << ","
             << format_number(std::abs(s.chat - scan.limit)) << "\n";
    body << "# limit: " << format_number(scan.limit) << "\n";
    body << "# final_deviation: " << format_number(scan.final_deviation) << "\n";
    emit(spec, body.str(), log);
    return kExitOk;
}

int run_verify_command(const RunSpec& spec, std::ostream& log) {
    const DomainSpec domain = domain_from_json(spec.domain);
    VerifyOptions vopts;
    vopts.truncation = spec.truncation;
    if (spec.extra.contains("tolerances")) {
        const json& t = spec.extra.at("tolerances");
        auto set = [&t](const char* key, double& slot) {
            if (t.contains(key)) slot = t.at(key).get<double>();
        };
        set("gamma_identity", vopts.tol_gamma_identity);
        set("alpha_routes", vopts.tol_alpha_routes);
        set("diagonality", vopts.tol_diagonality);
        set("commutator", vopts.tol_commutator);
        set("negative_control", vopts.negative_control_floor);
        set("metric_cross", vopts.tol_metric_cross);
        set("curvature_chain", vopts.tol_curvature_chain);
        set("fefferman", vopts.tol_fefferman);
        set("rr_identity", vopts.tol_rr_identity);
    }
    const auto results = run_verify(domain, vopts);
    bool all_pass = true;
    std::ostringstream body;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        body << (r.pass ? "PASS" : "FAIL") << "," << r.name << "," << r.detail << "\n";
        log << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
    }
    if (!spec.output.empty()) emit(spec, body.str(), log);
    return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

RunOutcome run(const RunSpec& spec, std::ostream& log) {
    RunOutcome outcome;
    try {
        if (spec.command == "alpha")
            outcome.exit_code = run_alpha(spec, log);
        else if (spec.command == "gamma")
            outcome.exit_code = run_gamma(spec, log);
        else if (spec.command == "spectrum")
            outcome.exit_code = run_spectrum(spec, log);
        else if (spec.command == "oracle")
            outcome.exit_code = run_oracle(spec, log);
        else if (spec.command == "commutator")
            outcome.exit_code = run_commutator(spec, log);
        else if (spec.command == "kernel")
            outcome.exit_code = run_kernel(spec, log);
        else if (spec.command == "metric")
            outcome.exit_code = run_metric(spec, log);
        else if (spec.command == "curvature")
            outcome.exit_code = run_curvature(spec, log);
        else if (spec.command == "asymptotics")
            outcome.exit_code = run_asymptotics(spec, log);
        else if (spec.command == "verify")
            outcome.exit_code = run_verify_command(spec, log);
        else
            fail("run: unknown command '" + spec.command + "'");
    } catch (const SpecParseError&) {
        throw;
    } catch (const std::exception& e) {
        outcome.exit_code = kExitNotConverged;
        outcome.message = e.what();
        log << "error: " << e.what() << "\n";
        return outcome;
    }
    outcome.message = spec.command + ": exit " + std::to_string(outcome.exit_code);
    return outcome;
}

RunSpec parse_artifact_header(const std::string& artifact_text) {
    std::istringstream in(artifact_text);
    std::string line;
    const std::string tag = "# runspec: ";
    while (std::getline(in, line)) {
        if (line.rfind(tag, 0) == 0) return parse_runspec_text(line.substr(tag.size()));
        if (!line.empty() && line[0] != '#') break;
    }
    fail("artifact: no '# runspec:' header line found");
}

int main_entry(int argc, const char* const* argv) {
    CLI::App app{"numerical toolkit for Toeplitz operators and Bergman geometry on Reinhardt domains"};
    app.require_subcommand(1);

    std::string spec_path, out_path, format;
    std::string describe_target;

    for (const auto& name : kCommands) {
        CLI::App* sub = app.add_subcommand(name, "run from a JSON spec (see: rtoep describe " + name + ")");
        sub->add_option("--spec", spec_path, "JSON run spec")->required();
        sub->add_option("--out", out_path, "output path (overrides the spec)");
        sub->add_option("--format", format, "csv|json (overrides the spec)");
    }
    CLI::App* desc = app.add_subcommand("describe", "print the run-spec schema of a command");
    desc->add_option("command", describe_target, "command name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return kExitSpecError;
    }

    try {
        if (desc->parsed()) {
            std::cout << describe(describe_target);
            return kExitOk;
        }
        std::ifstream in(spec_path);
        if (!in) {
            std::cerr << "error: cannot read spec file " << spec_path << "\n";
            return kExitSpecError;
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        RunSpec spec = parse_runspec_text(buffer.str());
        const std::string command = app.get_subcommands().at(0)->get_name();
        if (spec.command != command) {
            std::cerr << "error: spec command '" << spec.command << "' does not match '" << command
                      << "'\n";
            return kExitSpecError;
        }
        if (!out_path.empty()) spec.output = out_path;
        if (!format.empty()) {
            if (format != "csv" && format != "json") {
                std::cerr << "error: format must be csv or json\n";
                return kExitSpecError;
            }
            spec.format = format;
        }
        const RunOutcome outcome = run(spec, std::cout);
        if (!outcome.message.empty() && outcome.exit_code != kExitOk)
            std::cerr << outcome.message << "\n";
        return outcome.exit_code;
    } catch (const SpecParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotConverged;
    }
}

}  // namespace rtoep

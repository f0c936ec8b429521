#pragma once

#include <string>
#include <vector>

#include "rtoep/domain.hpp"

namespace rtoep {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    int truncation = 4;
    double tol_gamma_identity = 1e-9;
    double tol_alpha_routes = 1e-8;
    double tol_diagonality = 1e-7;
    double tol_commutator = 1e-7;
    double negative_control_floor = 1e-3;
    double tol_metric_cross = 1e-6;
    double tol_curvature_chain = 1e-6;
    double tol_fefferman = 1e-5;
    double tol_rr_identity = 1e-7;
    int metric_sample_points = 25;
    int curvature_sample_points = 25;
    unsigned seed = 2024;
};

/// The property suite behind `rtoep verify`: diagonality, commutators, route
/// agreement, metric orthogonality, the curvature chain, the Fefferman
/// recursion and the R/R* identities, on the given domain. Ball-only checks
/// run only when the domain is a catalog ball.
std::vector<CheckResult> run_verify(const DomainSpec& domain, const VerifyOptions& opts = {});

}  // namespace rtoep

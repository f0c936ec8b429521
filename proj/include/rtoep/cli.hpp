#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtoep/domain.hpp"
#include "rtoep/quadrature.hpp"

namespace rtoep {

// exit codes of the batch front-end
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitSpecError = 2;
inline constexpr int kExitNotConverged = 3;

struct SpecParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One batch run parsed from a JSON run spec. Unknown fields and missing
/// command-specific required fields are rejected at parse time.
struct RunSpec {
    std::string command;
    nlohmann::json domain;                 // descriptor {"name","n","params"}
    std::vector<nlohmann::json> symbols;   // command-dependent count
    int truncation = 0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::string output;                    // empty: stdout
    std::string format = "csv";            // "csv" | "json"
    nlohmann::json extra;                  // per-command fields (points, ray, ...)

    nlohmann::json to_json() const;        // canonical form (header round-trip)
};

RunSpec parse_runspec(const nlohmann::json& j);
RunSpec parse_runspec_text(const std::string& text);

DomainSpec domain_from_json(const nlohmann::json& j);
SymbolSpec symbol_from_json(const nlohmann::json& j, int dim);

/// Schema/usage text for one command.
std::string describe(const std::string& command);

struct RunOutcome {
    int exit_code = kExitOk;
    std::string message;  // one-line status for the console
};

/// Executes the run: writes the artifact (file or stdout) and returns the
/// exit status. Every emitted file starts with a header block carrying the
/// domain, weight, truncation, tolerances and the canonical runspec JSON.
RunOutcome run(const RunSpec& spec, std::ostream& log);

/// Reconstructs the RunSpec from an emitted artifact's header block.
RunSpec parse_artifact_header(const std::string& artifact_text);

/// argv-level entry point used by the rtoep binary.
int main_entry(int argc, const char* const* argv);

/// Deterministic full-precision number formatting used in all artifacts.
std::string format_number(double v);

}  // namespace rtoep

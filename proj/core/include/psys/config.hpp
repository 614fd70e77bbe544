#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psys/errors.hpp"
#include "psys/evolution.hpp"

#include "json.hpp"

namespace psys {

/// A fully validated scenario description, parsed from sectioned
/// key = value text. Unknown keys are rejected; all problems in a file are
/// reported together, not first-only.
struct RunConfig {
    // [model]
    std::string model_name = "quadratic"; ///< quadratic | cubic

    // [initial]
    std::string family = "constant"; ///< constant | hyperbolic_sine | elliptic_sine | file
    double u_base = -1.0;
    double u_amplitude = 0.1;
    int u_mode = 1;
    double u_phase = 0.0;
    double v_base = 0.0;
    double v_amplitude = 0.0;
    int v_mode = 1;
    double v_phase = 0.0;
    std::string initial_path; ///< CSV for family = file

    // [grid]
    int n_x = 256;
    double t_max = 5.0;
    double cfl = 0.4;
    std::string filter = "auto"; ///< auto | on | off
    int filter_order = 16;
    double filter_cutoff = 2.0 / 3.0;
    int frame_stride = 1;
    int dump_stride = 10;

    // [run]
    double winding_c = 0.0;
    bool stop_on_mixed = false;
    double grad_max = 1e3;
    double tail_max = 1e-4;
    double res_max = 1e-3;
    std::uint64_t seed = 0;

    // [diagnostics]
    int characteristic_seeds = 16;
    double growth_threshold = 10.0;
    std::string energy_weight = "default";
    double hamiltonian_p0 = 1.0;
    double hamiltonian_span = 1.0;

    // [output]
    std::string output_directory = "out";

    bool operator==(const RunConfig&) const = default;
};

struct ConfigIssue {
    int line = 0;           ///< 0 when not tied to a line
    std::string field;      ///< "section.key" path when known
    std::string message;
};

/// Syntax-level problems: malformed lines, unknown sections/keys (with a
/// nearest-match suggestion), unreadable values. Carries every issue found.
class ParseError : public Error {
public:
    explicit ParseError(std::vector<ConfigIssue> issues);
    std::vector<ConfigIssue> issues;
};

/// Range/consistency problems on otherwise well-formed keys.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<ConfigIssue> issues);
    std::vector<ConfigIssue> issues;
};

/// Parse and validate. Throws ParseError or ValidationError with the full
/// issue list.
RunConfig parse_config(const std::string& text);

/// Convenience: read a file and parse it.
RunConfig load_config(const std::string& path);

/// Serialize back to the sectioned text format (all keys explicit).
std::string to_config_text(const RunConfig& cfg);

void to_json(nlohmann::ordered_json& j, const RunConfig& cfg);
void from_json(const nlohmann::ordered_json& j, RunConfig& cfg);

/// Build the named constitutive model ("quadratic" or "cubic").
SigmaModel make_model(const std::string& name);

/// Materialize the initial-data family on the grid.
void build_initial_data(const RunConfig& cfg, std::vector<double>& u0,
                        std::vector<double>& v0);

/// Map the validated config onto the solver-facing scenario struct.
SolverConfig make_solver_config(const RunConfig& cfg);

} // namespace psys

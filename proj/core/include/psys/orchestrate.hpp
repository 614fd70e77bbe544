#pragma once

#include <filesystem>
#include <string>

#include "psys/characteristics.hpp"
#include "psys/config.hpp"
#include "psys/energy.hpp"
#include "psys/evolution.hpp"
#include "psys/hamiltonian.hpp"

#include "json.hpp"

namespace psys {

struct OrchestrationResult {
    RunResult run;
    std::filesystem::path out_dir;
    int frames_written = 0;
};

/// Run the configured scenario and emit the standard artifact set:
/// manifest.json plus frames/frame_NNNNNN.csv (x, u, v_periodic) for every
/// dump_stride-th stored frame and the final one. Deterministic given the
/// config (and its seed). Blow-up is a scientific outcome, not an error;
/// only I/O and internal failures throw.
OrchestrationResult orchestrate(const RunConfig& cfg, const std::string& out_dir,
                                bool quiet = true);

/// One CSV per characteristic path: t, x_unwrapped, u, lambda, z, k, k_integral.
void write_path_csv(const CharacteristicPath& path, const std::string& file);

nlohmann::ordered_json path_summary_json(const CharacteristicPath& path,
                                         double seed_x, CharClass cls);

/// Trajectory CSV: t, x, p, H, F.
void write_trajectory_csv(const Trajectory& traj, const std::string& file);

/// Energy trace CSV: t, E, E_ddot_integral, E_ddot_fd.
void write_energy_csv(const EnergyTrace& trace, const std::string& file);

nlohmann::ordered_json run_manifest(const RunConfig& cfg, const RunReport& report,
                                    int frames_stored, int frames_written);

void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& file);

} // namespace psys

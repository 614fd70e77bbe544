#include "psys/orchestrate.hpp"

#include <cstdio>
#include <iostream>

#include "psys/csv.hpp"

namespace psys {

namespace fs = std::filesystem;

void write_json(const nlohmann::ordered_json& j, const fs::path& file) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot open for writing: " + file.string());
    out << j.dump(2) << "\n";
}

nlohmann::ordered_json run_manifest(const RunConfig& cfg, const RunReport& report,
                                    int frames_stored, int frames_written) {
    nlohmann::ordered_json jc;
    to_json(jc, cfg);
    nlohmann::ordered_json j{
        {"schema", "psyslab-manifest-1"},
        {"config", jc},
        {"model", cfg.model_name},
        {"n_x", cfg.n_x},
        {"dt_policy",
         {{"cfl", cfg.cfl}, {"lambda_floor", 0.1}, {"kind", "cfl_from_max_speed"}}},
        {"winding_c", cfg.winding_c},
        {"stop_reason", to_string(report.stop)},
        {"t_stop", report.t_stop},
        {"steps", report.steps},
        {"filter_enabled", report.filter_enabled},
        {"max_residual_smooth", report.max_residual_smooth},
        {"frames_stored", frames_stored},
        {"frames_written", frames_written},
    };
    j["t_prime"] = report.t_prime ? nlohmann::ordered_json(*report.t_prime)
                                  : nlohmann::ordered_json(nullptr);
    j["blowup_time"] = report.blowup_time ? nlohmann::ordered_json(*report.blowup_time)
                                          : nlohmann::ordered_json(nullptr);
    j["blowup_monitor"] = report.blowup_monitor;
    return j;
}

OrchestrationResult orchestrate(const RunConfig& cfg, const std::string& out_dir,
                                bool quiet) {
    OrchestrationResult res;
    res.out_dir = out_dir;
    std::error_code ec;
    fs::create_directories(res.out_dir / "frames", ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir + ": " + ec.message());

    res.run = run(make_solver_config(cfg));
    const StateField& field = res.run.field;

    const int nf = static_cast<int>(field.frames.size());
    const auto x = field.x_grid();
    for (int i = 0; i < nf; ++i) {
        if (i % cfg.dump_stride != 0 && i != nf - 1) continue;
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06d.csv", i);
        CsvWriter csv((res.out_dir / "frames" / name).string(), {"x", "u", "v_periodic"});
        const Frame& fr = field.frames[i];
        for (int p = 0; p < field.n_x; ++p) csv.row({x[p], fr.u[p], fr.v[p]});
        ++res.frames_written;
    }

    write_json(run_manifest(cfg, res.run.report, nf, res.frames_written),
               res.out_dir / "manifest.json");

    if (!quiet) {
        std::cout << "run stopped: " << to_string(res.run.report.stop) << " at t="
                  << fmt17(res.run.report.t_stop) << " (" << res.run.report.steps
                  << " steps, " << res.frames_written << " frames written)\n";
    }
    return res;
}

void write_path_csv(const CharacteristicPath& path, const std::string& file) {
    CsvWriter csv(file, {"t", "x_unwrapped", "u", "lambda", "z", "k", "k_integral"});
    for (size_t i = 0; i < path.samples.size(); ++i) {
        const PathSample& s = path.samples[i];
        csv.row({s.t, s.x, s.u, s.lambda, s.z, s.k, path.riccati.k_integral[i].second});
    }
}

nlohmann::ordered_json path_summary_json(const CharacteristicPath& path,
                                         double seed_x, CharClass cls) {
    nlohmann::ordered_json j{
        {"family", to_string(path.family)},
        {"direction", to_string(path.direction)},
        {"side", to_string(path.side)},
        {"seed_x", seed_x},
        {"t0", path.riccati.t0},
        {"z0", path.riccati.z0},
        {"termination", to_string(path.termination)},
        {"t_end", path.t_end},
        {"x_end", path.x_end},
        {"class", to_string(cls)},
        {"samples", path.samples.size()},
    };
    j["predicted_blowup"] = path.riccati.predicted_blowup
                                ? nlohmann::ordered_json(*path.riccati.predicted_blowup)
                                : nlohmann::ordered_json(nullptr);
    j["extrapolated"] = path.riccati.extrapolated;
    return j;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& file) {
    CsvWriter csv(file, {"t", "x", "p", "H", "F"});
    for (const auto& s : traj.samples) csv.row({s.t, s.x, s.p, s.H, s.F});
}

void write_energy_csv(const EnergyTrace& trace, const std::string& file) {
    CsvWriter csv(file, {"t", "E", "E_ddot_integral", "E_ddot_fd"});
    for (size_t i = 0; i < trace.times.size(); ++i)
        csv.row({trace.times[i], trace.E[i], trace.E_ddot_integral[i], trace.E_ddot_fd[i]});
}

} // namespace psys

#pragma once

// On-disk formats:
//   grid function   CSV `x,u`, 17 significant digits
//   trajectory      <dir>/manifest.json + one grid-function CSV per snapshot
//   trace           CSV `t,x,z` (z empty when not co-integrated)
//   reports         JSON (CheckReport arrays, BreakingReport)

#include "breaking_predictor.hpp"
#include "characteristics.hpp"
#include "grid.hpp"
#include "splitting_solver.hpp"
#include "verification.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace bp::io {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr const char* trajectory_format = "burgers-poisson-trajectory/1";
inline constexpr const char* snapshot_state =
    "u(t_i-): after the Burgers sweep ending at t_i, before the source kick at t_i; t = 0 holds the initial data";

inline void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << text;
}

inline json read_json(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + path.string());
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- reports

inline json to_json(const CheckReport& r) {
    json j{{"name", r.name},
           {"pass", r.pass},
           {"measured", r.measured},
           {"bound", r.bound},
           {"slack_used", r.slack_used},
           {"direction", r.direction == BoundDirection::upper ? "upper" : "lower"},
           {"fixture", r.fixture}};
    if (r.time) j["time"] = *r.time;
    if (r.position) j["position"] = *r.position;
    return j;
}

inline json to_json(const std::vector<CheckReport>& rs) {
    json a = json::array();
    for (const auto& r : rs) a.push_back(to_json(r));
    return a;
}

inline json to_json(const BoundWindow& w) {
    json j{{"t_lower", w.t_lower}, {"condition_met", w.condition_met}};
    if (w.t_upper) j["t_upper"] = *w.t_upper;
    return j;
}

inline json to_json(const BreakingReport& r) {
    json inputs = json::object();
    if (r.local_input) {
        inputs["local"] = {{"u_at", r.local_input->u_at},
                           {"slope_at", r.local_input->slope_at},
                           {"l1", r.local_input->l1}};
    }
    if (r.global_input) {
        inputs["global"] = {{"m_inf", r.global_input->m_inf},
                            {"m_sup_abs", r.global_input->m_sup_abs},
                            {"l1", r.global_input->l1}};
    }
    json j{{"t_lower", r.t_lower}, {"condition_met", r.blowup_condition_met}, {"inputs", inputs}};
    if (r.t_upper) j["t_upper"] = *r.t_upper;
    if (r.local) j["local"] = to_json(*r.local);
    if (r.global) j["global"] = to_json(*r.global);
    if (r.smooth_horizon_value) {
        j["smooth_horizon"] = *r.smooth_horizon_value ? json(**r.smooth_horizon_value) : json("unbounded");
    }
    return j;
}

// ---------------------------------------------------------------- trajectory

inline std::string snapshot_file_name(std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%05zu.csv", k);
    return buf;
}

inline json manifest(const Trajectory& traj, const std::vector<std::string>& files) {
    const auto& c = traj.config;
    return json{{"format", trajectory_format},
                {"nu", c.nu},
                {"T", c.T},
                {"final_time", c.final_time()},
                {"dt", c.dt()},
                {"x_min", c.grid.x_min()},
                {"x_max", c.grid.x_max()},
                {"n", c.grid.n()},
                {"source_enabled", c.source_enabled},
                {"every_step", c.every_step},
                {"tail_margin", c.tail_margin},
                {"snapshot_times", c.snapshot_times},
                {"times", traj.times},
                {"steps", traj.steps},
                {"files", files},
                {"l1_initial", traj.l1_initial},
                {"snapshot_state", snapshot_state}};
}

/// Writes manifest.json and the snapshot CSVs into `dir` (created if needed).
inline void write_trajectory(const fs::path& dir, const Trajectory& traj) {
    fs::create_directories(dir);
    std::vector<std::string> files;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        files.push_back(snapshot_file_name(k));
        write_csv((dir / files.back()).string(), traj.snapshots[k]);
    }
    write_text(dir / "manifest.json", dump(manifest(traj, files)));
}

inline Trajectory read_trajectory(const fs::path& dir) {
    const json m = read_json(dir / "manifest.json");
    try {
        if (m.at("format").get<std::string>() != trajectory_format) {
            throw ConfigError(dir.string() + ": not a trajectory manifest");
        }
        Trajectory traj;
        auto& c = traj.config;
        c.nu = m.at("nu").get<int>();
        c.T = m.at("T").get<double>();
        c.grid = Grid1D(m.at("x_min").get<double>(), m.at("x_max").get<double>(), m.at("n").get<int>());
        c.source_enabled = m.at("source_enabled").get<bool>();
        c.every_step = m.at("every_step").get<bool>();
        c.tail_margin = m.at("tail_margin").get<double>();
        c.snapshot_times = m.at("snapshot_times").get<std::vector<double>>();
        traj.times = m.at("times").get<std::vector<double>>();
        traj.steps = m.at("steps").get<std::vector<int>>();
        traj.l1_initial = m.at("l1_initial").get<double>();
        const auto files = m.at("files").get<std::vector<std::string>>();
        if (files.size() != traj.times.size() || traj.steps.size() != traj.times.size()) {
            throw ConfigError(dir.string() + ": manifest arrays disagree in length");
        }
        for (const auto& f : files) {
            GridFunction u = read_csv((dir / f).string());
            if (!(u.grid().n() == c.grid.n()) || std::abs(u.grid().x_min() - c.grid.x_min()) > 1e-12 ||
                std::abs(u.grid().x_max() - c.grid.x_max()) > 1e-12) {
                throw ConfigError((dir / f).string() + ": grid differs from manifest");
            }
            traj.snapshots.emplace_back(c.grid, std::vector<double>(u.values().begin(), u.values().end()));
        }
        return traj;
    } catch (const json::exception& e) {
        throw ConfigError(dir.string() + "/manifest.json: " + e.what());
    }
}

// ---------------------------------------------------------------- traces

inline void write_trace_csv(const fs::path& path, const CharacteristicTrace& tr) {
    std::string s = "t,x,z\n";
    for (std::size_t k = 0; k < tr.size(); ++k) {
        s += format_double(tr.times[k]) + ',' + format_double(tr.positions[k]) + ',';
        if (tr.has_gradients()) s += format_double(tr.gradients[k]);
        s += '\n';
    }
    write_text(path, s);
}

}  // namespace bp::io

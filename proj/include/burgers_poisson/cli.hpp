#pragma once

// Command-line front end.
//
//   bp solve            --scenario box --nu 8 --T 1 --out DIR
//   bp verify           --input DIR [--compare DIR] [--k_values -0.5,0.5]
//   bp converge         --scenario bump --nu_min 5 --nu_max 9 --out DIR
//   bp characteristics  --scenario box --x -1,0,1 [--z0 -10] --out DIR
//   bp predict-breaking --scenario breaking-demo [--x 0] [--out DIR]
//
// Every option can also come from `--config FILE` holding `key = value` lines
// (# starts a comment). Keys are the option names without dashes; flags win
// over the file. Unknown keys are errors.
//
// Exit codes: 0 ok, 1 a check failed, 2 usage or input error, 3 numerical
// failure (non-finite values, margin violations). On a nonzero exit an error
// JSON object is written to stderr.

#include "breaking_predictor.hpp"
#include "characteristics.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "presets.hpp"
#include "splitting_solver.hpp"
#include "verification.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace bp::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

enum class Command { solve, verify, converge, characteristics, predict_breaking };

inline constexpr std::array<std::string_view, 5> command_names{"solve", "verify", "converge", "characteristics",
                                                               "predict-breaking"};

inline std::string_view name_of(Command c) { return command_names[static_cast<std::size_t>(c)]; }

inline constexpr int nu_min_allowed = 3, nu_max_allowed = 14;
inline constexpr double T_max_allowed = 5.0;
inline constexpr int n_min_allowed = 100, n_max_allowed = 1000000;

struct RunSpec {
    Command command = Command::solve;
    std::string scenario;  // preset name or initial-data CSV path
    std::optional<int> nu;
    std::optional<double> T;
    std::optional<double> x_min, x_max;
    std::optional<int> n;
    std::optional<bool> source;
    std::vector<double> snapshot_times;
    bool every_step = false;
    std::optional<double> tail_margin;
    std::string out;
    std::string input;    // trajectory directory (verify, characteristics)
    std::string compare;  // second trajectory directory (verify)
    std::vector<double> k_values{-0.5, 0.0, 0.25, 0.5, 1.0};
    int nu_min = 5, nu_max = 9;
    std::vector<double> x_points;
    std::vector<double> z0;
    double threshold = 1e3;
};

// ---------------------------------------------------------------- keys

struct KeyInfo {
    std::string_view name;
    std::string_view help;
    std::vector<Command> commands;
};

inline const std::vector<KeyInfo>& keys() {
    using C = Command;
    static const std::vector<KeyInfo> table{
        {"scenario", "preset name or path to an x,u CSV",
         {C::solve, C::verify, C::converge, C::characteristics, C::predict_breaking}},
        {"nu", "time step 2^-nu, nu in [3, 14] (default: preset value, 8 for CSV data)",
         {C::solve, C::verify, C::characteristics}},
        {"T", "final time in (0, 5] (default: preset value, 1 for CSV data)",
         {C::solve, C::verify, C::converge, C::characteristics}},
        {"x_min", "left end of the grid (default: preset grid)",
         {C::solve, C::verify, C::converge, C::characteristics, C::predict_breaking}},
        {"x_max", "right end of the grid (default: preset grid)",
         {C::solve, C::verify, C::converge, C::characteristics, C::predict_breaking}},
        {"n", "number of grid intervals in [100, 1e6] (default: preset grid)",
         {C::solve, C::verify, C::converge, C::characteristics, C::predict_breaking}},
        {"source", "enable the nonlocal source (true/false; default: preset value)",
         {C::solve, C::verify, C::converge, C::characteristics}},
        {"snapshot_times", "comma-separated extra snapshot times", {C::solve}},
        {"every_step", "store every step (true/false, default false)", {C::solve}},
        {"tail_margin", "support-to-boundary margin (default: required minimum)",
         {C::solve, C::verify, C::converge, C::characteristics}},
        {"out", "output directory",
         {C::solve, C::verify, C::converge, C::characteristics, C::predict_breaking}},
        {"input", "trajectory directory written by solve", {C::verify, C::characteristics}},
        {"compare", "second trajectory directory for the stability check", {C::verify}},
        {"k_values", "comma-separated entropy constants", {C::verify}},
        {"nu_min", "first nu of the refinement sweep (default 5)", {C::converge}},
        {"nu_max", "last nu of the refinement sweep (default 9)", {C::converge}},
        {"x", "comma-separated starting points (one point for predict-breaking)",
         {C::characteristics, C::predict_breaking}},
        {"z0", "initial slope(s) for the gradient equation, one value or one per point", {C::characteristics}},
        {"threshold", "blow-up threshold for |u_x| (default 1000)", {C::characteristics}},
    };
    return table;
}

inline bool key_allowed(std::string_view key, Command c) {
    for (const auto& k : keys()) {
        if (k.name == key) return std::find(k.commands.begin(), k.commands.end(), c) != k.commands.end();
    }
    return false;
}

// ---------------------------------------------------------------- values

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::logic_error&) {
        throw ConfigError(key + ": '" + v + "' is not a number");
    }
    if (used != v.size() || !std::isfinite(d)) throw ConfigError(key + ": '" + v + "' is not a finite number");
    return d;
}

inline int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 2e9) throw ConfigError(key + ": '" + v + "' is not an integer");
    return static_cast<int>(d);
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "off" || v == "no" || v == "0") return false;
    throw ConfigError(key + ": '" + v + "' is not a boolean (true/false)");
}

inline std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) throw ConfigError(key + ": empty list entry in '" + v + "'");
        out.push_back(to_double(key, t));
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

inline void require_range(const std::string& key, double v, double lo, double hi, bool lo_open = false) {
    const bool ok = (lo_open ? v > lo : v >= lo) && v <= hi;
    if (!ok) {
        std::ostringstream os;
        os << key << ": " << format_double(v) << " outside " << (lo_open ? "(" : "[") << format_double(lo) << ", "
           << format_double(hi) << "]";
        throw ConfigError(os.str());
    }
}

}  // namespace detail

/// Reads `key = value` lines. Blank lines and lines starting with # are skipped.
inline std::map<std::string, std::string> read_config_file(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": missing key");
        if (out.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
        out[key] = value;
    }
    return out;
}

/// Builds a validated RunSpec from key/value pairs. Unknown keys, keys that do
/// not apply to the command and out-of-range values are errors naming the key.
inline RunSpec parse_config(Command command, const std::map<std::string, std::string>& values) {
    RunSpec s;
    s.command = command;
    for (const auto& [key, v] : values) {
        const bool known = std::any_of(keys().begin(), keys().end(), [&](const KeyInfo& k) { return k.name == key; });
        if (!known) throw ConfigError("unknown key '" + key + "'");
        if (!key_allowed(key, command)) {
            throw ConfigError("key '" + key + "' does not apply to " + std::string(name_of(command)));
        }
        if (v.empty()) throw ConfigError(key + ": empty value");

        if (key == "scenario") {
            s.scenario = v;
        } else if (key == "nu") {
            s.nu = detail::to_int(key, v);
            detail::require_range(key, *s.nu, nu_min_allowed, nu_max_allowed);
        } else if (key == "T") {
            s.T = detail::to_double(key, v);
            detail::require_range(key, *s.T, 0.0, T_max_allowed, true);
        } else if (key == "x_min") {
            s.x_min = detail::to_double(key, v);
        } else if (key == "x_max") {
            s.x_max = detail::to_double(key, v);
        } else if (key == "n") {
            s.n = detail::to_int(key, v);
            detail::require_range(key, *s.n, n_min_allowed, n_max_allowed);
        } else if (key == "source") {
            s.source = detail::to_bool(key, v);
        } else if (key == "snapshot_times") {
            s.snapshot_times = detail::to_list(key, v);
            std::sort(s.snapshot_times.begin(), s.snapshot_times.end());
        } else if (key == "every_step") {
            s.every_step = detail::to_bool(key, v);
        } else if (key == "tail_margin") {
            s.tail_margin = detail::to_double(key, v);
            if (*s.tail_margin < 0.0) throw ConfigError("tail_margin: must be >= 0");
        } else if (key == "out") {
            s.out = v;
        } else if (key == "input") {
            s.input = v;
        } else if (key == "compare") {
            s.compare = v;
        } else if (key == "k_values") {
            s.k_values = detail::to_list(key, v);
        } else if (key == "nu_min") {
            s.nu_min = detail::to_int(key, v);
            detail::require_range(key, s.nu_min, nu_min_allowed, nu_max_allowed);
        } else if (key == "nu_max") {
            s.nu_max = detail::to_int(key, v);
            detail::require_range(key, s.nu_max, nu_min_allowed, nu_max_allowed);
        } else if (key == "x") {
            s.x_points = detail::to_list(key, v);
        } else if (key == "z0") {
            s.z0 = detail::to_list(key, v);
        } else if (key == "threshold") {
            s.threshold = detail::to_double(key, v);
            if (!(s.threshold > 0.0)) throw ConfigError("threshold: must be > 0");
        }
    }

    if (s.x_min && s.x_max && !(*s.x_min < *s.x_max)) throw ConfigError("x_min: must be below x_max");
    if (command == Command::converge && s.nu_min >= s.nu_max) throw ConfigError("nu_min: must be below nu_max");

    const bool has_input = !s.input.empty();
    switch (command) {
        case Command::verify:
        case Command::characteristics:
            if (has_input == !s.scenario.empty()) throw ConfigError("scenario: give exactly one of scenario and input");
            break;
        default:
            if (s.scenario.empty()) throw ConfigError("scenario: required");
    }
    if (command == Command::characteristics) {
        if (s.x_points.empty()) throw ConfigError("x: required");
        if (!s.z0.empty() && s.z0.size() != 1 && s.z0.size() != s.x_points.size()) {
            throw ConfigError("z0: give one value or one per starting point");
        }
    }
    if (command == Command::predict_breaking && s.x_points.size() > 1) throw ConfigError("x: one point only");
    if (s.out.empty() && (command == Command::solve || command == Command::converge ||
                          command == Command::characteristics)) {
        s.out = "bp_" + std::string(name_of(command));
    }
    return s;
}

// ---------------------------------------------------------------- scenarios

struct Scenario {
    GridFunction u0;
    SplittingConfig config;
    std::optional<Preset> preset;
};

inline bool is_preset(std::string_view name) {
    return std::find(preset_names.begin(), preset_names.end(), name) != preset_names.end();
}

inline Scenario load_scenario(const RunSpec& s) {
    std::optional<Preset> preset;
    GridFunction u0(Grid1D(0.0, 1.0, 2));
    SplittingConfig c;
    const bool grid_given = s.x_min || s.x_max || s.n;
    const bool path_like = s.scenario.find('/') != std::string::npos ||
                           s.scenario.find('.') != std::string::npos || fs::exists(s.scenario);
    if (is_preset(s.scenario) || !path_like) {
        std::optional<Grid1D> grid;
        if (grid_given) {
            const Grid1D base = make_preset(s.scenario).config.grid;
            grid = Grid1D(s.x_min.value_or(base.x_min()), s.x_max.value_or(base.x_max()), s.n.value_or(base.n()));
        }
        preset = make_preset(s.scenario, grid);
        u0 = preset->u0;
        c = preset->config;
    } else {
        if (grid_given) throw ConfigError("x_min/x_max/n: the grid of CSV data comes from the file");
        u0 = read_csv(s.scenario);
        detail::require_range("n", u0.grid().n(), n_min_allowed, n_max_allowed);
        c.grid = u0.grid();
        c.nu = 8;
        c.T = 1.0;
    }
    if (s.nu) c.nu = *s.nu;
    if (s.T) c.T = *s.T;
    if (s.source) c.source_enabled = *s.source;
    c.snapshot_times = s.snapshot_times;
    c.every_step = s.every_step;
    if (s.tail_margin) {
        c.tail_margin = *s.tail_margin;
    } else {
        c.tail_margin = c.source_enabled ? required_tail_margin(c.T, l1_norm(u0)) : 0.0;
    }
    if (c.dt() > c.T) throw ConfigError("T: below the time step 2^-" + std::to_string(c.nu));
    return {std::move(u0), std::move(c), std::move(preset)};
}

inline Trajectory trajectory_for(const RunSpec& s) {
    if (!s.input.empty()) return io::read_trajectory(s.input);
    RunSpec every = s;
    every.every_step = true;
    const Scenario sc = load_scenario(every);
    return solve(sc.config, sc.u0);
}

// ---------------------------------------------------------------- commands

namespace detail {

inline void write_manifest(const fs::path& dir, json m) {
    io::write_text(dir / "manifest.json", io::dump(m));
}

inline json scenario_json(const RunSpec& s) {
    return s.input.empty() ? json{{"scenario", s.scenario}} : json{{"input", s.input}};
}

inline int run_solve(const RunSpec& s, std::ostream& out) {
    const Scenario sc = load_scenario(s);
    const Trajectory traj = solve(sc.config, sc.u0);
    io::write_trajectory(s.out, traj);
    out << io::dump({{"command", "solve"}, {"out", s.out}, {"snapshots", traj.size()}});
    return 0;
}

inline int run_verify(const RunSpec& s, std::ostream& out) {
    const Trajectory traj = trajectory_for(s);
    std::vector<CheckReport> reports;
    json skipped = json::array();

    for (auto& r : check_l1_growth(traj)) reports.push_back(std::move(r));
    for (auto& r : check_oleinik(traj)) reports.push_back(std::move(r));

    if (traj.config.source_enabled && traj.l1_initial > 0.0) {
        const double margin = required_tail_margin(traj.times.back(), traj.l1_initial);
        try {
            for (auto& r : check_tail_mass(traj, margin)) reports.push_back(std::move(r));
        } catch (const DomainError& e) {
            skipped.push_back({{"check", "tail_mass"}, {"reason", e.what()}});
        }
    } else {
        skipped.push_back({{"check", "tail_mass"}, {"reason", "source disabled or zero data"}});
    }

    if (traj.has_every_step()) {
        for (auto& r : check_entropy(traj, s.k_values)) reports.push_back(std::move(r));
    } else {
        skipped.push_back({{"check", "entropy"}, {"reason", "trajectory does not store every step"}});
    }
    const auto late = std::count_if(traj.times.begin(), traj.times.end(),
                                    [](double t) { return t >= tolerances::time_continuity_delta; });
    if (late >= 2) {
        for (auto& r : check_time_continuity(traj)) reports.push_back(std::move(r));
    } else {
        skipped.push_back({{"check", "time_continuity"}, {"reason", "fewer than two snapshots after delta"}});
    }
    if (!s.compare.empty()) {
        const Trajectory other = io::read_trajectory(s.compare);
        for (auto& r : check_stability(traj, other)) reports.push_back(std::move(r));
    }

    const bool ok = all_pass(reports);
    const json checks = io::to_json(reports);
    if (s.out.empty()) {
        out << io::dump(checks);
    } else {
        fs::create_directories(s.out);
        io::write_text(fs::path(s.out) / "checks.json", io::dump(checks));
        json m = scenario_json(s);
        m["command"] = "verify";
        m["files"] = {"checks.json"};
        m["pass"] = ok;
        m["skipped"] = skipped;
        write_manifest(s.out, m);
        out << io::dump({{"command", "verify"}, {"out", s.out}, {"pass", ok}, {"checks", reports.size()}});
    }
    return ok ? 0 : 1;
}

inline int run_converge(const RunSpec& s, std::ostream& out) {
    const Scenario sc = load_scenario(s);
    std::vector<SplittingConfig> configs;
    for (int nu = s.nu_min; nu <= s.nu_max; ++nu) {
        SplittingConfig c = sc.config;
        c.nu = nu;
        if (c.dt() > c.T) throw ConfigError("nu_min: time step 2^-" + std::to_string(nu) + " exceeds T");
        configs.push_back(c);
    }
    const auto rows = self_convergence(configs, sc.u0);
    std::string csv = "nu,nu_next,l1_difference,ratio\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        csv += std::to_string(rows[k].nu) + ',' + std::to_string(rows[k].nu_next) + ',' +
               format_double(rows[k].l1_difference) + ',';
        if (k > 0 && rows[k - 1].l1_difference > 0.0) {
            csv += format_double(rows[k].l1_difference / rows[k - 1].l1_difference);
        }
        csv += '\n';
    }
    fs::create_directories(s.out);
    io::write_text(fs::path(s.out) / "convergence.csv", csv);
    json m = scenario_json(s);
    m["command"] = "converge";
    m["files"] = {"convergence.csv"};
    m["T"] = sc.config.T;
    m["x_min"] = sc.config.grid.x_min();
    m["x_max"] = sc.config.grid.x_max();
    m["n"] = sc.config.grid.n();
    write_manifest(s.out, m);
    out << io::dump({{"command", "converge"}, {"out", s.out}, {"rows", rows.size()}});
    return 0;
}

inline int run_characteristics(const RunSpec& s, std::ostream& out) {
    const Trajectory traj = trajectory_for(s);
    const double c1 = holder_constant(traj.times.back(), traj.l1_initial);
    fs::create_directories(s.out);

    json traces = json::array();
    std::vector<CheckReport> holder;
    std::vector<std::string> files;
    for (std::size_t k = 0; k < s.x_points.size(); ++k) {
        const double xb = s.x_points[k];
        CharacteristicTrace tr;
        std::optional<double> z0;
        if (!s.z0.empty()) {
            z0 = s.z0.size() == 1 ? s.z0[0] : s.z0[k];
            tr = trace_gradient(traj, xb, *z0, s.threshold);
        } else {
            tr = trace(traj, xb);
        }
        char name[32];
        std::snprintf(name, sizeof name, "trace_%03zu.csv", k);
        files.emplace_back(name);
        io::write_trace_csv(fs::path(s.out) / name, tr);

        CheckReport h = check_holder(tr, c1, traj.grid().dx());
        h.name = "holder(x=" + format_double(xb) + ")";
        json entry{{"file", name}, {"x_bar", xb}, {"left_domain", tr.left_domain}};
        if (z0) entry["z0"] = *z0;
        if (tr.blowup_time) entry["blowup_time"] = *tr.blowup_time;
        traces.push_back(entry);
        holder.push_back(std::move(h));
    }
    const bool ok = all_pass(holder);
    json m = scenario_json(s);
    m["command"] = "characteristics";
    m["files"] = files;
    m["traces"] = traces;
    m["holder_constant"] = c1;
    m["holder"] = io::to_json(holder);
    m["threshold"] = s.threshold;
    if (const auto t = detect_breaking(traj, s.threshold)) {
        m["field_breaking_time"] = *t;
    } else {
        m["field_breaking_time"] = nullptr;
    }
    write_manifest(s.out, m);
    out << io::dump({{"command", "characteristics"}, {"out", s.out}, {"pass", ok}, {"traces", files.size()}});
    return ok ? 0 : 1;
}

/// Node index of the most negative forward difference quotient; the point
/// reported is the midpoint of that cell.
inline double steepest_descent_point(const GridFunction& u) {
    std::size_t best = 0;
    double best_q = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < u.size(); ++j) {
        const double q = (u[j + 1] - u[j]) / u.grid().dx();
        if (q < best_q) {
            best_q = q;
            best = j;
        }
    }
    return 0.5 * (u.x(best) + u.x(best + 1));
}

inline int run_predict_breaking(const RunSpec& s, std::ostream& out) {
    const Scenario sc = load_scenario(s);
    const GridFunction& u = sc.u0;
    const Grid1D& g = u.grid();
    double xb;
    if (!s.x_points.empty()) {
        xb = s.x_points.front();
    } else if (sc.preset && sc.preset->steepest_point) {
        xb = *sc.preset->steepest_point;
    } else {
        xb = steepest_descent_point(u);
    }
    if (!g.contains(xb)) throw OutOfDomain("x: " + format_double(xb) + " outside the grid");

    double slope;
    if (sc.preset && sc.preset->slope) {
        slope = sc.preset->slope(xb);
    } else {
        const double h = g.dx();
        const double lo = std::max(g.x_min(), xb - h), hi = std::min(g.x_max(), xb + h);
        slope = (interp(u, hi) - interp(u, lo)) / (hi - lo);
    }
    const double l1 = l1_norm(u);
    const LocalBreakingInput local{interp(u, xb) + 0.0, slope, l1};
    const GlobalBreakingInput global{min_difference_quotient(u), max_abs_difference_quotient(u), l1};
    std::optional<LocalBreakingInput> local_opt;
    if (std::abs(local.u_at) + 2.0 * l1 > 0.0) local_opt = local;
    std::optional<GlobalBreakingInput> global_opt;
    if (l1 > 0.0) global_opt = global;
    if (!local_opt && !global_opt) throw ConfigError("scenario: zero data has no breaking window");

    const BreakingReport r = report(local_opt, global_opt);
    json j = io::to_json(r);
    if (j["inputs"].contains("local")) j["inputs"]["local"]["x"] = xb;
    if (s.out.empty()) {
        out << io::dump(j);
    } else {
        fs::create_directories(s.out);
        io::write_text(fs::path(s.out) / "breaking.json", io::dump(j));
        json m = scenario_json(s);
        m["command"] = "predict-breaking";
        m["files"] = {"breaking.json"};
        write_manifest(s.out, m);
        out << io::dump({{"command", "predict-breaking"}, {"out", s.out}, {"condition_met", r.blowup_condition_met}});
    }
    return 0;
}

}  // namespace detail

/// Executes a validated spec. Library errors propagate to the caller.
inline int run(const RunSpec& s, std::ostream& out) {
    switch (s.command) {
        case Command::solve: return detail::run_solve(s, out);
        case Command::verify: return detail::run_verify(s, out);
        case Command::converge: return detail::run_converge(s, out);
        case Command::characteristics: return detail::run_characteristics(s, out);
        case Command::predict_breaking: return detail::run_predict_breaking(s, out);
    }
    return 2;
}

// ---------------------------------------------------------------- entry point

struct UsageError : ConfigError {
    using ConfigError::ConfigError;
};

inline json error_json(std::string_view kind, std::string_view message, int code) {
    return json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
}

/// Parses argv (flags over `--config` file) into a RunSpec. Returns nullopt
/// when help was printed.
inline std::optional<RunSpec> parse_args(int argc, const char* const* argv, std::ostream& out) {
    CLI::App app{"Burgers-Poisson splitting solver"};
    app.require_subcommand(1);
    struct Sub {
        Command command;
        CLI::App* app;
        std::string config;
        std::map<std::string, std::string> values;
        std::map<std::string, CLI::Option*> options;
    };
    std::vector<Sub> subs(command_names.size());
    for (std::size_t i = 0; i < command_names.size(); ++i) {
        auto& sub = subs[i];
        sub.command = static_cast<Command>(i);
        sub.app = app.add_subcommand(std::string(command_names[i]));
        sub.app->add_option("--config", sub.config, "key = value file; flags override it");
        for (const auto& k : keys()) {
            if (!key_allowed(k.name, sub.command)) continue;
            const std::string name(k.name);
            sub.options[name] = sub.app->add_option("--" + name, sub.values[name], std::string(k.help));
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    for (auto& sub : subs) {
        if (!sub.app->parsed()) continue;
        std::map<std::string, std::string> merged;
        if (!sub.config.empty()) merged = read_config_file(sub.config);
        for (const auto& [name, opt] : sub.options) {
            if (opt->count() > 0) merged[name] = sub.values[name];
        }
        return parse_config(sub.command, merged);
    }
    throw UsageError("no command given");
}

/// Full CLI: parse, run, map errors to exit codes and an error JSON on `err`.
inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout,
                      std::ostream& err = std::cerr) {
    auto fail = [&](std::string_view kind, std::string_view message, int code) {
        err << error_json(kind, message, code).dump() << "\n";
        return code;
    };
    try {
        const auto spec = parse_args(argc, argv, out);
        if (!spec) return 0;
        return run(*spec, out);
    } catch (const UsageError& e) {
        return fail("usage", e.what(), 2);
    } catch (const ConfigError& e) {
        return fail("config", e.what(), 2);
    } catch (const DomainError& e) {
        return fail("domain", e.what(), 2);
    } catch (const MarginError& e) {
        return fail("margin", e.what(), 3);
    } catch (const NumericalError& e) {
        return fail("numerical", e.what(), 3);
    } catch (const fs::filesystem_error& e) {
        return fail("io", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), 3);
    }
}

}  // namespace bp::cli

#include "test_support.hpp"

#include <burgers_poisson/cli.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

using namespace bp;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "bp");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json error_of(const Result& r) { return nlohmann::json::parse(r.err).at("error"); }

}  // namespace

TEST(ParseConfig, MinimalFlagsUseDefaults) {
    const auto spec = cli::parse_config(cli::Command::solve, {{"scenario", "box"}, {"nu", "8"}, {"T", "1"}});
    EXPECT_EQ(spec.scenario, "box");
    EXPECT_EQ(*spec.nu, 8);
    EXPECT_EQ(*spec.T, 1.0);
    EXPECT_FALSE(spec.n);
    EXPECT_EQ(spec.out, "bp_solve");
    const auto sc = cli::load_scenario(spec);
    EXPECT_EQ(sc.config.grid, make_preset("box").config.grid);
    EXPECT_NEAR(sc.config.tail_margin, required_tail_margin(1.0, l1_norm(sc.u0)), 1e-12);
}

TEST(ParseConfig, RangeErrorsNameTheKey) {
    auto msg = [](std::map<std::string, std::string> m) {
        m.emplace("scenario", "box");
        try {
            cli::parse_config(cli::Command::solve, m);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_EQ(msg({{"nu", "99"}}).rfind("nu:", 0), 0u);
    EXPECT_EQ(msg({{"nu", "2"}}).rfind("nu:", 0), 0u);
    EXPECT_EQ(msg({{"T", "0"}}).rfind("T:", 0), 0u);
    EXPECT_EQ(msg({{"T", "5.5"}}).rfind("T:", 0), 0u);
    EXPECT_EQ(msg({{"n", "99"}}).rfind("n:", 0), 0u);
    EXPECT_EQ(msg({{"n", "1000001"}}).rfind("n:", 0), 0u);
    EXPECT_EQ(msg({{"nu", "eight"}}).rfind("nu:", 0), 0u);
    EXPECT_EQ(msg({{"nu", "8.5"}}).rfind("nu:", 0), 0u);
    EXPECT_EQ(msg({{"x_min", "3"}, {"x_max", "1"}}).rfind("x_min:", 0), 0u);
    EXPECT_NE(msg({{"colour", "red"}}).find("unknown key 'colour'"), std::string::npos);
    EXPECT_NE(msg({{"k_values", "1"}}).find("does not apply"), std::string::npos);
    EXPECT_TRUE(msg({{"T", "5"}, {"nu", "14"}, {"n", "100"}}).empty());
}

TEST(ParseConfig, CommandRequirements) {
    EXPECT_THROW(cli::parse_config(cli::Command::solve, {}), ConfigError);
    EXPECT_THROW(cli::parse_config(cli::Command::verify, {}), ConfigError);
    EXPECT_THROW(cli::parse_config(cli::Command::verify, {{"input", "a"}, {"scenario", "box"}}), ConfigError);
    EXPECT_THROW(cli::parse_config(cli::Command::characteristics, {{"scenario", "box"}}), ConfigError);
    EXPECT_THROW(cli::parse_config(cli::Command::characteristics,
                                   {{"scenario", "box"}, {"x", "0,1"}, {"z0", "1,2,3"}}),
                 ConfigError);
    EXPECT_THROW(cli::parse_config(cli::Command::converge, {{"scenario", "bump"}, {"nu_min", "7"}, {"nu_max", "6"}}),
                 ConfigError);
}

TEST(ConfigFile, ParsesAndRejects) {
    const auto dir = fx::scratch_dir("config_file");
    io::write_text(dir / "ok.cfg", "# comment\nscenario = box\n\nnu = 6\nT=0.5\n");
    const auto m = cli::read_config_file(dir / "ok.cfg");
    EXPECT_EQ(m.at("scenario"), "box");
    EXPECT_EQ(m.at("T"), "0.5");
    io::write_text(dir / "bad.cfg", "scenario box\n");
    EXPECT_THROW(cli::read_config_file(dir / "bad.cfg"), ConfigError);
    io::write_text(dir / "dup.cfg", "nu = 5\nnu = 6\n");
    EXPECT_THROW(cli::read_config_file(dir / "dup.cfg"), ConfigError);
    EXPECT_THROW(cli::read_config_file(dir / "missing.cfg"), ConfigError);
}

TEST(Cli, FlagsOverrideConfigFile) {
    const auto dir = fx::scratch_dir("cli_override");
    io::write_text(dir / "run.cfg", "scenario = box\nnu = 99\nT = 0.5\n");
    const auto bad = run_cli({"solve", "--config", (dir / "run.cfg").string(), "--out", (dir / "o").string()});
    EXPECT_EQ(bad.code, 2);
    EXPECT_EQ(error_of(bad).at("message"), "nu: 99 outside [3, 14]");
    const auto good = run_cli(
        {"solve", "--config", (dir / "run.cfg").string(), "--nu", "6", "--out", (dir / "o").string()});
    EXPECT_EQ(good.code, 0) << good.err;
    const auto m = io::read_json(dir / "o" / "manifest.json");
    EXPECT_EQ(m.at("nu"), 6);
    EXPECT_EQ(m.at("T"), 0.5);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"fly"}).code, 2);
    const auto r = run_cli({"solve", "--scenario", "box", "--bogus", "1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(error_of(r).at("kind"), "usage");
    const auto unknown = run_cli({"solve", "--scenario", "nope"});
    EXPECT_EQ(unknown.code, 2);
    EXPECT_NE(error_of(unknown).at("message").get<std::string>().find("riemann-fan"), std::string::npos);
    EXPECT_EQ(run_cli({"solve", "--help"}).code, 0);
}

TEST(Cli, CsvScenario) {
    const auto dir = fx::scratch_dir("cli_csv");
    io::write_text(dir / "bad.csv", "x,u\n0,0\n2,0\n1,0\n");
    const auto r = run_cli({"solve", "--scenario", (dir / "bad.csv").string(), "--out", (dir / "o").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(error_of(r).at("message").get<std::string>().find("increasing"), std::string::npos);

    const Grid1D g(-20.0, 20.0, 400);
    write_csv((dir / "bump.csv").string(), sample(g, [](double x) { return std::exp(-x * x * 4.0) * (std::abs(x) < 2); }));
    const auto ok = run_cli({"solve", "--scenario", (dir / "bump.csv").string(), "--nu", "5", "--T", "0.5", "--out",
                             (dir / "o").string()});
    EXPECT_EQ(ok.code, 0) << ok.err;
    const auto tr = io::read_trajectory(dir / "o");
    EXPECT_EQ(tr.grid(), g);
    EXPECT_EQ(run_cli({"solve", "--scenario", (dir / "bump.csv").string(), "--n", "500"}).code, 2);
}

TEST(Cli, MarginFailureExitsThree) {
    const auto dir = fx::scratch_dir("cli_margin");
    const auto r = run_cli({"solve", "--scenario", "box", "--T", "5", "--out", (dir / "o").string()});
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(error_of(r).at("kind"), "margin");
}

TEST(Cli, SolveVerifyAndDeterminism) {
    const auto dir = fx::scratch_dir("cli_solve");
    const std::vector<std::string> args{"solve", "--scenario", "box", "--nu", "6", "--T", "0.5",
                                        "--snapshot_times", "0.25", "--every_step", "true"};
    auto a = args, b = args;
    a.insert(a.end(), {"--out", (dir / "a").string()});
    b.insert(b.end(), {"--out", (dir / "b").string()});
    ASSERT_EQ(run_cli(a).code, 0);
    ASSERT_EQ(run_cli(b).code, 0);
    const auto m = io::read_json(dir / "a" / "manifest.json");
    const auto files = m.at("files").get<std::vector<std::string>>();
    EXPECT_EQ(files.size(), 33u);
    std::size_t on_disk = 0;
    for (const auto& e : fs::directory_iterator(dir / "a")) {
        ++on_disk;
        const auto name = e.path().filename().string();
        EXPECT_TRUE(name == "manifest.json" || std::find(files.begin(), files.end(), name) != files.end()) << name;
        EXPECT_EQ(fx::slurp(e.path()), fx::slurp(dir / "b" / name)) << name;
    }
    EXPECT_EQ(on_disk, files.size() + 1);

    const auto v = run_cli({"verify", "--input", (dir / "a").string(), "--out", (dir / "v").string()});
    EXPECT_EQ(v.code, 0) << v.out << v.err;
    const auto checks = io::read_json(dir / "v" / "checks.json");
    ASSERT_TRUE(checks.is_array());
    bool saw_entropy = false;
    for (const auto& c : checks) {
        EXPECT_TRUE(c.at("pass").get<bool>()) << c.dump();
        saw_entropy = saw_entropy || c.at("name").get<std::string>().rfind("entropy", 0) == 0;
    }
    EXPECT_TRUE(saw_entropy);
    EXPECT_EQ(io::read_json(dir / "v" / "manifest.json").at("files"), nlohmann::json({"checks.json"}));

    const auto stdout_only = run_cli({"verify", "--input", (dir / "a").string()});
    EXPECT_EQ(stdout_only.code, 0);
    EXPECT_TRUE(nlohmann::json::parse(stdout_only.out).is_array());
}

TEST(Cli, VerifyReportsFailureWithExitOne) {
    const auto dir = fx::scratch_dir("cli_verify_fail");
    ASSERT_EQ(run_cli({"solve", "--scenario", "box", "--nu", "5", "--T", "0.5", "--out", (dir / "a").string()}).code, 0);
    // tamper with the final snapshot, beyond the L1 quadrature slack
    const auto tr = io::read_trajectory(dir / "a");
    const double factor = 2.0 * (1.0 + l1_growth_slack(tr.config)) * std::exp(tr.times.back());
    write_csv((dir / "a" / io::snapshot_file_name(tr.size() - 1)).string(), factor * tr.snapshots.back());
    EXPECT_EQ(run_cli({"verify", "--input", (dir / "a").string()}).code, 1);
}

TEST(Cli, PredictBreaking) {
    const auto r = run_cli({"predict-breaking", "--scenario", "breaking-demo"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j.at("condition_met").get<bool>());
    EXPECT_TRUE(j.contains("t_upper"));
    EXPECT_LT(j.at("t_lower").get<double>(), j.at("t_upper").get<double>());
    EXPECT_EQ(j.at("inputs").at("local").at("slope_at"), -10.0);

    const auto flat = run_cli({"predict-breaking", "--scenario", "smooth-small"});
    ASSERT_EQ(flat.code, 0);
    const auto f = nlohmann::json::parse(flat.out);
    EXPECT_FALSE(f.at("condition_met").get<bool>());
    EXPECT_FALSE(f.contains("t_upper"));
    EXPECT_NEAR(f.at("smooth_horizon").get<double>(), std::log(11.0), 0.02);
    EXPECT_EQ(run_cli({"predict-breaking", "--scenario", "box", "--x", "99"}).code, 2);
}

TEST(Cli, ConvergeAndCharacteristics) {
    const auto dir = fx::scratch_dir("cli_conv");
    const auto c = run_cli({"converge", "--scenario", "bump", "--nu_min", "4", "--nu_max", "6", "--n", "2000", "--out",
                            (dir / "c").string()});
    ASSERT_EQ(c.code, 0) << c.err;
    const auto csv = fx::slurp(dir / "c" / "convergence.csv");
    EXPECT_EQ(csv.rfind("nu,nu_next,l1_difference,ratio\n4,5,", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);

    const auto t = run_cli({"characteristics", "--scenario", "breaking-demo", "--T", "0.125", "--x", "-0.5,0",
                            "--z0", "-10", "--out", (dir / "t").string()});
    ASSERT_EQ(t.code, 0) << t.err;
    const auto m = io::read_json(dir / "t" / "manifest.json");
    EXPECT_EQ(m.at("files").size(), 2u);
    EXPECT_TRUE(m.at("traces")[1].contains("blowup_time"));
    EXPECT_EQ(fx::slurp(dir / "t" / "trace_000.csv").rfind("t,x,z\n0,-0.5,-10\n", 0), 0u);
}

TEST(Io, TrajectoryRoundTrip) {
    const auto dir = fx::scratch_dir("io_round");
    auto p = make_preset("bump", Grid1D(-10.0, 10.0, 500));
    p.config.T = 0.25;
    p.config.nu = 5;
    p.config.snapshot_times = {0.125};
    const auto tr = solve(p.config, p.u0);
    io::write_trajectory(dir, tr);
    const auto back = io::read_trajectory(dir);
    EXPECT_EQ(back.times, tr.times);
    EXPECT_EQ(back.steps, tr.steps);
    EXPECT_EQ(back.l1_initial, tr.l1_initial);
    EXPECT_TRUE(back.config.same_run_as(tr.config));
    for (std::size_t k = 0; k < tr.size(); ++k) {
        for (std::size_t j = 0; j < tr.snapshots[k].size(); ++j) ASSERT_EQ(back.snapshots[k][j], tr.snapshots[k][j]);
    }
    const auto m = io::read_json(dir / "manifest.json");
    EXPECT_EQ(m.at("format"), io::trajectory_format);
    io::write_text(dir / "manifest.json", "{\"format\": \"other\"}");
    EXPECT_THROW(io::read_trajectory(dir), ConfigError);
}

TEST(Io, ReportJson) {
    auto r = make_report("oleinik", 1.0, 2.0, 0.1);
    r.time = 0.5;
    const auto j = io::to_json(r);
    EXPECT_EQ(j.at("direction"), "upper");
    EXPECT_EQ(j.at("time"), 0.5);
    EXPECT_FALSE(j.contains("position"));
    const auto b = io::to_json(report(LocalBreakingInput{0.0, 0.0, 0.5}, std::nullopt));
    EXPECT_FALSE(b.at("condition_met").get<bool>());
    EXPECT_FALSE(b.contains("t_upper"));
    const auto g = io::to_json(report(std::nullopt, GlobalBreakingInput{0.0, 0.0, 1.0}));
    EXPECT_EQ(g.at("smooth_horizon"), "unbounded");
}

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bp;

namespace {

Trajectory box_run(double T, bool every_step) {
    auto p = make_preset("box");
    p.config.T = T;
    p.config.every_step = every_step;
    p.config.tail_margin = required_tail_margin(T, 2.0);
    return solve(p.config, p.u0);
}

Trajectory zero_run() {
    SplittingConfig c;
    c.nu = 6;
    c.T = 1.0;
    c.grid = Grid1D(-10.0, 10.0, 1000);
    c.every_step = true;
    return solve(c, GridFunction(c.grid));
}

}  // namespace

TEST(MakeReport, Directions) {
    EXPECT_TRUE(make_report("a", 1.0, 1.0, 0.0).pass);
    EXPECT_FALSE(make_report("a", 1.1, 1.0, 0.05).pass);
    EXPECT_TRUE(make_report("a", 1.04, 1.0, 0.05).pass);
    EXPECT_TRUE(make_report("a", -0.01, 0.0, 0.02, BoundDirection::lower).pass);
    EXPECT_FALSE(make_report("a", -0.03, 0.0, 0.02, BoundDirection::lower).pass);
    auto f = make_report("f", 2.0, 1.0, 0.0);
    f.fixture = true;
    EXPECT_TRUE(all_pass({f}));
    EXPECT_FALSE(all_pass({make_report("g", 2.0, 1.0, 0.0)}));
}

TEST(OleinikBound, ClosedForms) {
    EXPECT_DOUBLE_EQ(oleinik_bound(1.0, 0.0), 5.0);
    EXPECT_NEAR(oleinik_bound(1.0, 2.0), 26.746254627672362, 1e-12);
    EXPECT_NEAR(oleinik_bound(0.5, 2.0), 11.594885082800513, 1e-12);
    EXPECT_NEAR(oleinik_bound(2.0, 2.0), 124.7248975828904, 1e-11);
    double prev = 0.0;
    for (double t = 0.25; t > 1e-4; t *= 0.5) {
        EXPECT_GT(oleinik_bound(t, 1.0), prev);
        prev = oleinik_bound(t, 1.0);
    }
    EXPECT_THROW(oleinik_bound(0.0, 1.0), DomainError);
}

TEST(Checks, ZeroTrajectoryPassesEverything) {
    const auto tr = zero_run();
    for (const auto& r : check_l1_growth(tr)) {
        EXPECT_TRUE(r.pass);
        EXPECT_EQ(r.measured, 0.0);
    }
    for (const auto& r : check_oleinik(tr)) {
        EXPECT_TRUE(r.pass);
        EXPECT_EQ(r.measured, 0.0);
    }
    for (const auto& r : check_stability(tr, tr)) EXPECT_TRUE(r.pass);
    for (const auto& r : check_tail_mass(tr, 1.0)) EXPECT_TRUE(r.pass);
    for (const auto& r : check_entropy(tr, {-1.0, 0.5, 2.0})) {
        EXPECT_TRUE(r.pass);
        EXPECT_NEAR(r.measured, 0.0, 1e-15);
    }
    EXPECT_TRUE(all_pass(check_time_continuity(tr)));
}

TEST(Checks, BoxRunPasses) {
    const auto tr = box_run(1.0, true);
    const auto l1 = check_l1_growth(tr);
    EXPECT_TRUE(all_pass(l1));
    EXPECT_NEAR(l1.back().bound, 2.0 * std::exp(1.0), 1e-12);
    const auto ol = check_oleinik(tr);
    EXPECT_TRUE(all_pass(ol));
    for (const auto& r : ol) EXPECT_GE(*r.time, 2.0 * tr.dt());
    EXPECT_TRUE(all_pass(check_tail_mass(tr, required_tail_margin(1.0, 2.0))));
    EXPECT_TRUE(all_pass(check_entropy(tr, {-0.5, 0.25, 0.5, 1.0})));
    EXPECT_TRUE(all_pass(check_time_continuity(tr)));
}

TEST(Checks, L1GrowthFixtureFails) {
    // fine grid, coarse nu: the quadrature slack is 20 dx (1 + 8) = 0.9
    const Grid1D g(-10.0, 10.0, 4000);
    const auto growing = fx::fixture_trajectory(g, 3, 1.0, [](double t, double x) {
        return std::abs(x) < 1.0 ? std::exp(3.0 * t) : 0.0;
    });
    const auto reports = check_l1_growth(growing);
    EXPECT_NEAR(reports.back().slack_used, 0.9, 1e-12);
    EXPECT_TRUE(reports.front().pass);
    EXPECT_FALSE(reports.back().pass);
    const auto steady = fx::fixture_trajectory(g, 3, 1.0, [](double, double x) { return std::abs(x) < 1.0 ? 1.0 : 0.0; });
    EXPECT_TRUE(all_pass(check_l1_growth(steady)));
}

TEST(Checks, OleinikRarefaction) {
    auto p = make_preset("riemann-fan");
    const auto tr = solve(p.config, p.u0);
    const auto r = check_oleinik(tr).back();
    EXPECT_NEAR(r.measured, 1.0, 0.05);
    EXPECT_GE(r.bound, 5.0);
    EXPECT_TRUE(r.pass);
}

TEST(Checks, StabilityShiftAndFixture) {
    const auto p = make_preset("box");
    auto c = p.config;
    c.T = 1.0;
    c.tail_margin = required_tail_margin(1.0, 2.0);
    const auto a = solve(c, p.u0);
    const double dx = c.grid.dx();
    const auto b = solve(c, sample_indicator(c.grid, -1.0 + dx, 1.0 + dx));
    const auto reports = check_stability(a, b);
    EXPECT_TRUE(all_pass(reports));
    // regression: the shifted pair stays well inside the bound
    EXPECT_LT(reports.back().measured / reports.back().bound, 0.75);

    // two boxes drifting apart: ||u - v||_1 reaches 2 while e^t ||u0 - v0||_1 stays near 0.3
    const Grid1D fine(-10.0, 10.0, 4000);
    auto box_at = [](double centre) {
        return [centre](double, double x) { return std::abs(x - centre) < 1.0 ? 1.0 : 0.0; };
    };
    const auto still = fx::fixture_trajectory(fine, 3, 1.0, box_at(0.0));
    const auto drifting = fx::fixture_trajectory(fine, 3, 1.0, [](double t, double x) {
        return std::abs(x - 0.05 - 3.0 * t) < 1.0 ? 1.0 : 0.0;
    });
    const auto drift = check_stability(still, drifting);
    EXPECT_TRUE(drift.front().pass);
    EXPECT_FALSE(drift.back().pass);

    auto other = c;
    other.nu = 7;
    EXPECT_THROW(check_stability(a, solve(other, p.u0)), DomainError);
}

TEST(Checks, TailMassMarginTooSmallFailsAndTooLargeThrows) {
    const auto tr = box_run(1.0, false);
    EXPECT_FALSE(all_pass(check_tail_mass(tr, 0.1)));
    EXPECT_THROW(check_tail_mass(tr, 100.0), DomainError);
    EXPECT_THROW(check_tail_mass(tr, 0.0), DomainError);
}

TEST(Checks, EntropyShockPassesExpansionShockFails) {
    auto p = make_preset("riemann-shock");
    p.config.every_step = true;
    const auto shock = solve(p.config, p.u0);
    EXPECT_TRUE(all_pass(check_entropy(shock, {0.25, 0.5, 0.75})));

    const Grid1D g = p.config.grid;
    const auto expansion =
        fx::fixture_trajectory(g, p.config.nu, 1.0, [](double t, double x) { return x > 0.5 * t ? 1.0 : 0.0; });
    const auto reports = check_entropy(expansion, {0.5});
    ASSERT_EQ(reports.size(), 1u);
    EXPECT_FALSE(reports[0].pass);
    EXPECT_EQ(reports[0].name, "entropy(k=0.5)");
    EXPECT_LT(reports[0].measured, -4.0 * reports[0].slack_used);
}

TEST(Checks, EntropyNeedsEveryStep) {
    EXPECT_THROW(check_entropy(box_run(0.5, false), {0.5}), DomainError);
}

TEST(Checks, EntropyConstantCalibration) {
    // Worst residual per (dx + dt) on box runs; the frozen constant sits above these.
    struct Run {
        int nu, n;
    };
    for (Run r : {Run{8, 6000}, Run{11, 6000}, Run{8, 12000}}) {
        auto p = make_preset("box", Grid1D(-30.0, 30.0, r.n));
        p.config.nu = r.nu;
        p.config.T = 1.0;
        p.config.every_step = true;
        p.config.tail_margin = required_tail_margin(1.0, 2.0);
        const auto tr = solve(p.config, p.u0);
        for (const auto& rep : check_entropy(tr, {-0.5, 0.25, 0.5, 1.0})) {
            const double c = -rep.measured / (p.config.grid.dx() + tr.dt());
            EXPECT_LT(c, 0.3) << r.nu << " " << r.n << " " << rep.name;
            EXPECT_LT(c, tolerances::entropy_constant);
        }
    }
}

TEST(Checks, TimeContinuityReferenceRate) {
    auto p = make_preset("box");
    p.config.every_step = true;
    const auto tr = solve(p.config, p.u0);
    double sup = 0.0;
    for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
        if (tr.times[k] < tolerances::time_continuity_delta) continue;
        const double d = l1_norm_on(tr.snapshots[k + 1] - tr.snapshots[k], -10.0, 10.0);
        sup = std::max(sup, d / (tr.times[k + 1] - tr.times[k]));
    }
    EXPECT_GT(sup, 2.5);
    EXPECT_LT(sup, tolerances::time_continuity_rate);
    EXPECT_TRUE(all_pass(check_time_continuity(tr)));
}

TEST(Checks, TimeContinuityFixtureFails) {
    auto tr = box_run(1.0, true);
    tr.snapshots[tr.size() / 2] = 2.0 * tr.snapshots[tr.size() / 2];
    EXPECT_FALSE(all_pass(check_time_continuity(tr)));
}

#pragma once

// Executable versions of the a priori estimates for the Burgers–Poisson
// equation, evaluated on computed trajectories. Every check returns the
// measured quantity, the bound it is held to and the slack applied, so a
// failing run shows by how much.

#include "characteristics.hpp"
#include "grid.hpp"
#include "poisson_kernel.hpp"
#include "splitting_solver.hpp"
#include "tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace bp {

enum class BoundDirection { upper, lower };

struct CheckReport {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    double slack_used = 0.0;
    BoundDirection direction = BoundDirection::upper;
    std::optional<double> time;
    std::optional<double> position;
    bool fixture = false;  // designed-to-fail mutation case, excluded from exit status
};

/// upper: measured <= bound (1 + slack);  lower: measured >= bound - slack.
inline CheckReport make_report(std::string name, double measured, double bound, double slack,
                               BoundDirection dir = BoundDirection::upper) {
    CheckReport r;
    r.name = std::move(name);
    r.measured = measured;
    r.bound = bound;
    r.slack_used = slack;
    r.direction = dir;
    r.pass = dir == BoundDirection::upper ? measured <= bound * (1.0 + slack) : measured >= bound - slack;
    return r;
}

/// True when every non-fixture report passes.
inline bool all_pass(const std::vector<CheckReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.fixture || r.pass; });
}

/// 1/t + 2 + 2t + 4 t e^t ||ū||_1.
inline double oleinik_bound(double t, double l1_initial) {
    if (!(t > 0.0)) throw DomainError("oleinik_bound: need t > 0");
    return 1.0 / t + 2.0 + 2.0 * t + 4.0 * t * std::exp(t) * l1_initial;
}

/// ||u(t)||_1 <= e^t ||ū||_1 at every snapshot.
inline std::vector<CheckReport> check_l1_growth(const Trajectory& traj) {
    std::vector<CheckReport> out;
    const double slack = l1_growth_slack(traj.config);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        auto r = make_report("l1_growth", l1_norm(traj.snapshots[k]), std::exp(t) * traj.l1_initial, slack);
        r.time = t;
        out.push_back(std::move(r));
    }
    return out;
}

/// One-sided Lipschitz bound at snapshots with t >= 2 * 2^-nu.
inline std::vector<CheckReport> check_oleinik(const Trajectory& traj) {
    std::vector<CheckReport> out;
    const double slack = tolerances::oleinik_slack_per_dx * traj.grid().dx();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.times[k];
        if (t < 2.0 * traj.dt() * (1.0 - 1e-12)) continue;
        auto r = make_report("oleinik", max_difference_quotient(traj.snapshots[k]),
                             oleinik_bound(t, traj.l1_initial), slack);
        r.time = t;
        out.push_back(std::move(r));
    }
    return out;
}

/// ||u(t) - v(t)||_1 <= e^t ||ū - v̄||_1 for two runs of the same configuration.
inline std::vector<CheckReport> check_stability(const Trajectory& u, const Trajectory& v) {
    if (!u.config.same_run_as(v.config) || u.times != v.times) {
        throw DomainError("check_stability: trajectories come from different configurations");
    }
    std::vector<CheckReport> out;
    const double initial = l1_norm(u.snapshots.front() - v.snapshots.front());
    const double slack = l1_growth_slack(u.config);
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double t = u.times[k];
        auto r = make_report("stability", l1_norm(u.snapshots[k] - v.snapshots[k]), std::exp(t) * initial, slack);
        r.time = t;
        out.push_back(std::move(r));
    }
    return out;
}

/// Mass outside [support(ū) - margin, support(ū) + margin] stays below
/// 1e-3 ||ū||_1.
inline std::vector<CheckReport> check_tail_mass(const Trajectory& traj, double margin) {
    if (!(margin > 0.0)) throw DomainError("check_tail_mass: margin must be positive");
    std::vector<CheckReport> out;
    const auto supp = support(traj.snapshots.front());
    const double bound = tolerances::tail_mass_fraction * traj.l1_initial;
    if (!supp) {
        for (std::size_t k = 0; k < traj.size(); ++k) {
            auto r = make_report("tail_mass", l1_norm(traj.snapshots[k]), bound, 0.0);
            r.time = traj.times[k];
            out.push_back(std::move(r));
        }
        return out;
    }
    const double lo = supp->first - margin, hi = supp->second + margin;
    const auto& g = traj.grid();
    if (lo < g.x_min() || hi > g.x_max()) {
        throw DomainError("check_tail_mass: support +/- margin exceeds the grid");
    }
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto& u = traj.snapshots[k];
        double outside = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double x = g.node(j);
            if (x < lo || x > hi) outside += std::abs(u[j]);
        }
        auto r = make_report("tail_mass", outside * g.dx(), bound, 0.0);
        r.time = traj.times[k];
        out.push_back(std::move(r));
    }
    return out;
}

struct EntropyLattice {
    double time_half_width;   // tau
    double space_half_width;  // xi
    double x_lo;              // space centers cover [x_lo, x_hi]
    double x_hi;
};

/// Default lattice: tau = min(1/4, T/4), xi = 1/4, centers spanning the initial
/// support padded by ||u||_inf T + 2 and clipped to the grid.
inline EntropyLattice default_entropy_lattice(const Trajectory& traj) {
    const auto& g = traj.grid();
    const double T = traj.times.back();
    const double xi = 0.25;
    double lo = g.x_min(), hi = g.x_max();
    if (const auto s = support(traj.snapshots.front())) {
        double speed = 0.0;
        for (const auto& u : traj.snapshots) speed = std::max(speed, linf_norm(u));
        lo = s->first - speed * T - 2.0;
        hi = s->second + speed * T + 2.0;
    }
    lo = std::max(lo, g.x_min() + xi);
    hi = std::min(hi, g.x_max() - xi);
    return {std::min(0.25, T / 4.0), xi, lo, hi};
}

namespace detail {

inline double sgn(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace detail

/// Kruzkov entropy production with the nonlocal source, integrated against
/// tensor-product hat functions phi(t, x) on a space-time lattice:
///
///   R(phi, k) = int int |u-k| phi_t + sgn(u-k)(u^2-k^2)/2 phi_x + sgn(u-k)[G'*u] phi.
///
/// One report per k with the most negative R; it must stay above
/// -C (dx + 2^-nu).
inline std::vector<CheckReport> check_entropy(const Trajectory& traj, const std::vector<double>& k_values,
                                              std::optional<EntropyLattice> lattice = std::nullopt) {
    detail::require_every_step(traj, "check_entropy");
    const auto lat = lattice.value_or(default_entropy_lattice(traj));
    const auto& g = traj.grid();
    const double dx = g.dx(), dt = traj.dt();
    const double tol = tolerances::entropy_constant * (dx + dt);
    const std::size_t steps = traj.size();
    const auto n_nodes = static_cast<std::ptrdiff_t>(g.size());

    // Centers sit on nodes and snapshot times, half-widths are whole cells and
    // whole steps, so the hats are sampled symmetrically.
    const std::ptrdiff_t xc_w = std::max<std::ptrdiff_t>(1, std::lround(lat.space_half_width / dx));
    const std::ptrdiff_t tc_w = std::max<std::ptrdiff_t>(1, std::lround(lat.time_half_width / dt));
    const double xi = static_cast<double>(xc_w) * dx, tau = static_cast<double>(tc_w) * dt;
    std::vector<std::ptrdiff_t> x_centers, t_centers;
    {
        std::ptrdiff_t j = std::max<std::ptrdiff_t>(xc_w, std::lround(std::ceil((lat.x_lo - g.x_min()) / dx)));
        const std::ptrdiff_t j_hi = std::min<std::ptrdiff_t>(n_nodes - 1 - xc_w,
                                                             std::lround(std::floor((lat.x_hi - g.x_min()) / dx)));
        for (; j <= j_hi; j += xc_w) x_centers.push_back(j);
        const auto s_hi = static_cast<std::ptrdiff_t>(steps) - 1 - tc_w;
        for (std::ptrdiff_t s = tc_w; s <= s_hi; s += std::max<std::ptrdiff_t>(1, tc_w / 2)) t_centers.push_back(s);
    }
    const auto hat = [](std::ptrdiff_t d, std::ptrdiff_t w) {
        return 1.0 - static_cast<double>(std::abs(d)) / static_cast<double>(w);
    };
    // Derivative of the hat; at kinks the mean of the one-sided values.
    const auto hat_slope = [](std::ptrdiff_t d, std::ptrdiff_t w, double width) {
        if (d == 0) return 0.0;
        const double v = (d > 0 ? -1.0 : 1.0) / width;
        return std::abs(d) == w ? 0.5 * v : v;
    };

    // Source field per snapshot, shared by all k.
    std::vector<GridFunction> sources;
    sources.reserve(steps);
    KernelWorkspace ws(g);
    for (const auto& u : traj.snapshots) {
        sources.push_back(traj.config.source_enabled ? ws.conv_Gx(u) : GridFunction(g));
    }

    std::vector<CheckReport> out;
    const std::size_t nc = x_centers.size();
    for (double k : k_values) {
        double worst = std::numeric_limits<double>::infinity();
        double worst_t = 0.0, worst_x = 0.0;
        // spatial moments per (snapshot, x-center)
        std::vector<double> m_dt(steps * nc), m_rest(steps * nc);
        for (std::size_t s = 0; s < steps; ++s) {
            const auto& u = traj.snapshots[s];
            const auto& q = sources[s];
            for (std::size_t c = 0; c < nc; ++c) {
                double a = 0.0, b = 0.0;
                for (std::ptrdiff_t d = -xc_w; d <= xc_w; ++d) {
                    const auto j = static_cast<std::size_t>(x_centers[c] + d);
                    const double v = u[j];
                    const double sg = detail::sgn(v - k);
                    const double h = hat(d, xc_w);
                    a += std::abs(v - k) * h;
                    b += sg * 0.5 * (v * v - k * k) * hat_slope(d, xc_w, xi) + sg * q[j] * h;
                }
                m_dt[s * nc + c] = a * dx;
                m_rest[s * nc + c] = b * dx;
            }
        }
        for (const auto tc : t_centers) {
            for (std::size_t c = 0; c < nc; ++c) {
                double r = 0.0;
                for (std::ptrdiff_t d = -tc_w; d <= tc_w; ++d) {
                    const auto s = static_cast<std::size_t>(tc + d);
                    r += dt * (hat_slope(d, tc_w, tau) * m_dt[s * nc + c] + hat(d, tc_w) * m_rest[s * nc + c]);
                }
                if (r < worst) {
                    worst = r;
                    worst_t = traj.times[static_cast<std::size_t>(tc)];
                    worst_x = g.node(static_cast<std::size_t>(x_centers[c]));
                }
            }
        }
        if (!std::isfinite(worst)) worst = 0.0;  // no admissible test function
        auto rep = make_report("entropy(k=" + format_double(k) + ")", worst, 0.0, tol, BoundDirection::lower);
        rep.time = worst_t;
        rep.position = worst_x;
        out.push_back(std::move(rep));
    }
    return out;
}

/// ||u(t) - u(s)||_{L1[-R,R]} <= C |t - s| + C' 2^-nu for delta <= s < t.
/// Pairs: all consecutive snapshots plus all pairs of a subsample of at most
/// 33 snapshots.
inline std::vector<CheckReport> check_time_continuity(const Trajectory& traj,
                                                      double delta = tolerances::time_continuity_delta,
                                                      double radius = tolerances::time_continuity_radius,
                                                      double rate = tolerances::time_continuity_rate,
                                                      double offset = tolerances::time_continuity_offset) {
    std::vector<std::size_t> eligible;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.times[k] >= delta - 1e-12) eligible.push_back(k);
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a + 1 < eligible.size(); ++a) pairs.emplace_back(eligible[a], eligible[a + 1]);
    const std::size_t stride = std::max<std::size_t>(1, eligible.size() / 32);
    std::vector<std::size_t> sub;
    for (std::size_t a = 0; a < eligible.size(); a += stride) sub.push_back(eligible[a]);
    for (std::size_t a = 0; a < sub.size(); ++a) {
        for (std::size_t b = a + 2; b < sub.size(); ++b) pairs.emplace_back(sub[a], sub[b]);
    }

    double worst_excess = -std::numeric_limits<double>::infinity();
    CheckReport worst;
    worst.name = "time_continuity";
    worst.pass = true;
    for (auto [s, t] : pairs) {
        const double d = l1_norm_on(traj.snapshots[t] - traj.snapshots[s], -radius, radius);
        const double bound = rate * (traj.times[t] - traj.times[s]) + offset * traj.dt();
        if (d - bound > worst_excess) {
            worst_excess = d - bound;
            worst = make_report("time_continuity", d, bound, 0.0);
            worst.time = traj.times[t];
        }
    }
    return {worst};
}

/// |x(tau) - x(t)| <= C1 sqrt(tau - t) + 3 dx over all sampled pairs of one trace.
inline CheckReport check_holder(const CharacteristicTrace& tr, double c1, double dx) {
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_d = 0.0, worst_b = 0.0, worst_t = 0.0;
    for (std::size_t a = 0; a < tr.size(); ++a) {
        for (std::size_t b = a + 1; b < tr.size(); ++b) {
            const double d = std::abs(tr.positions[b] - tr.positions[a]);
            const double bound = c1 * std::sqrt(tr.times[b] - tr.times[a]) + tolerances::holder_cells * dx;
            if (d - bound > worst_excess) {
                worst_excess = d - bound;
                worst_d = d;
                worst_b = bound;
                worst_t = tr.times[b];
            }
        }
    }
    if (tr.size() < 2) return make_report("holder", 0.0, tolerances::holder_cells * dx, 0.0);
    auto r = make_report("holder", worst_d, worst_b, 0.0);
    r.time = worst_t;
    r.position = tr.positions.front();
    return r;
}

}  // namespace bp

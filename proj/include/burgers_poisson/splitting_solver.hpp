#pragma once

// Flux-splitting approximation of u_t + (u^2/2)_x = [G*u]_x on the step grid
// t_i = i * 2^-nu:
//
//     u(0)     = u0
//     u(t_i)   = u(t_i-) + 2^-nu * [G'*u(t_i-)],     i >= 1
//     u(t)     = S_{t - t_i} u(t_i),                   t in [t_i, t_{i+1})
//
// with S the Burgers entropy semigroup. A snapshot at t_i stores u(t_i-), the
// state at the end of the Burgers sweep and before the source kick; the t = 0
// snapshot is u0 and the first sweep carries no kick.

#include "burgers_semigroup.hpp"
#include "grid.hpp"
#include "poisson_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <string>
#include <vector>

namespace bp {

/// sqrt(2 (1 + T) e^T ||u0||_1): bound on the Hölder-1/2 constant of
/// characteristics on [0, T].
inline double holder_constant(double T, double l1_initial) {
    if (!(T >= 0.0) || !(l1_initial >= 0.0)) throw DomainError("holder_constant: need T, l1 >= 0");
    return std::sqrt(2.0 * (1.0 + T) * std::exp(T) * l1_initial);
}

/// Distance from the data support that the mass must stay within on [0, T].
inline double required_tail_margin(double T, double l1_initial) {
    return holder_constant(T, l1_initial) * std::sqrt(T) + 5.0;
}

struct SplittingConfig {
    int nu = 8;
    double T = 1.0;
    Grid1D grid{-30.0, 30.0, 6000};
    bool source_enabled = true;
    std::vector<double> snapshot_times;
    /// Keep every u(t_i-). Needed by the characteristic tracer and the entropy check.
    bool every_step = false;
    /// Required empty band at each end of the grid at t = 0. Source-free runs
    /// (Riemann regressions) may use 0.
    double tail_margin = 0.0;

    double dt() const { return std::ldexp(1.0, -nu); }
    int step_count() const { return static_cast<int>(std::ceil(T / dt() - 1e-9)); }
    double final_time() const { return step_count() * dt(); }

    void validate() const {
        if (nu < 1 || nu > 30) throw DomainError("SplittingConfig: nu out of range");
        if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("SplittingConfig: need T > 0");
        if (dt() > T) throw DomainError("SplittingConfig: 2^-nu exceeds T");
        if (!(tail_margin >= 0.0)) throw DomainError("SplittingConfig: tail_margin must be >= 0");
        for (double s : snapshot_times) {
            if (!(s >= 0.0 && s <= T)) throw DomainError("SplittingConfig: snapshot time outside [0, T]");
        }
        if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end())) {
            throw DomainError("SplittingConfig: snapshot times must be sorted");
        }
    }

    bool same_run_as(const SplittingConfig& o) const {
        return nu == o.nu && T == o.T && grid == o.grid && source_enabled == o.source_enabled &&
               snapshot_times == o.snapshot_times && every_step == o.every_step;
    }
};

struct Trajectory {
    SplittingConfig config;
    std::vector<double> times;
    std::vector<int> steps;  // step index i of each snapshot, times[k] = steps[k] * dt
    std::vector<GridFunction> snapshots;
    double l1_initial = 0.0;

    double dt() const { return config.dt(); }
    const Grid1D& grid() const { return config.grid; }
    std::size_t size() const { return snapshots.size(); }

    /// True when snapshot k is u(t_k-) for every step k.
    bool has_every_step() const {
        if (steps.size() != static_cast<std::size_t>(config.step_count()) + 1) return false;
        for (std::size_t k = 0; k < steps.size(); ++k) {
            if (steps[k] != static_cast<int>(k)) return false;
        }
        return true;
    }
};

/// u + dt * G'*u.
inline GridFunction source_update(const GridFunction& u, double dt, KernelWorkspace& ws) {
    if (!(dt > 0.0)) throw DomainError("source_update: need dt > 0");
    GridFunction out = ws.conv_Gx(u);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = u[j] + dt * out[j];
    return out;
}

inline GridFunction source_update(const GridFunction& u, double dt) {
    KernelWorkspace ws(u.grid());
    return source_update(u, dt, ws);
}

/// One cycle: source kick, then Burgers evolution over dt.
inline GridFunction step(const GridFunction& u, double dt, bool source_enabled, KernelWorkspace& ws) {
    if (!(dt > 0.0)) throw DomainError("step: need dt > 0");
    return source_enabled ? evolve(source_update(u, dt, ws), dt) : evolve(u, dt);
}

inline GridFunction step(const GridFunction& u, double dt, bool source_enabled) {
    KernelWorkspace ws(u.grid());
    return step(u, dt, source_enabled, ws);
}

/// Trapezoid mass of |u0| inside the two boundary bands of the given width.
inline double boundary_band_mass(const GridFunction& u, double width) {
    const auto& g = u.grid();
    if (width <= 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double x = g.node(j);
        if (x - g.x_min() <= width || g.x_max() - x <= width) s += std::abs(u[j]);
    }
    return s * g.dx();
}

/// Quadrature slack for the L1 growth bound: 20 dx (1 + T 2^nu).
inline double l1_growth_slack(const SplittingConfig& c) {
    return 20.0 * c.grid.dx() * (1.0 + c.T * std::ldexp(1.0, c.nu));
}

inline Trajectory solve(const SplittingConfig& config, const GridFunction& u0) {
    config.validate();
    if (!(u0.grid() == config.grid)) throw DomainError("solve: initial data not on the config grid");

    Trajectory traj;
    traj.config = config;
    traj.l1_initial = l1_norm(u0);

    if (config.source_enabled && traj.l1_initial > 0.0) {
        const double need = required_tail_margin(config.T, traj.l1_initial);
        if (config.tail_margin < need) {
            throw MarginError("solve: tail_margin " + std::to_string(config.tail_margin) +
                              " below required " + std::to_string(need));
        }
    }
    if (boundary_band_mass(u0, config.tail_margin) > 1e-12) {
        throw MarginError("solve: initial data not supported " + std::to_string(config.tail_margin) +
                          " away from the boundary");
    }

    const int steps = config.step_count();
    const double dt = config.dt();
    std::set<int> keep{0, steps};
    if (config.every_step) {
        for (int i = 0; i <= steps; ++i) keep.insert(i);
    }
    for (double s : config.snapshot_times) {
        keep.insert(std::clamp(static_cast<int>(std::lround(s / dt)), 0, steps));
    }

    auto record = [&](int i, const GridFunction& u) {
        traj.steps.push_back(i);
        traj.times.push_back(i * dt);
        traj.snapshots.push_back(u);
    };

    if (traj.l1_initial == 0.0 && linf_norm(u0) == 0.0) {
        for (int i : keep) record(i, u0);
        return traj;
    }

    const double slack = l1_growth_slack(config);
    KernelWorkspace ws(config.grid);
    GridFunction u = u0;
    record(0, u);
    for (int i = 1; i <= steps; ++i) {
        try {
            // The kick happens at t_{i-1} for i >= 2 only.
            u = step(u, dt, config.source_enabled && i >= 2, ws);
        } catch (const NumericalError& e) {
            throw NumericalError("solve: step " + std::to_string(i) + ": " + e.what());
        } catch (const MarginError& e) {
            throw MarginError("solve: step " + std::to_string(i) + ": " + e.what());
        }
        if (keep.count(i)) {
            const double t = i * dt;
            if (config.source_enabled) {
                const double l1 = l1_norm(u);
                if (l1 > std::exp(t) * traj.l1_initial * (1.0 + slack)) {
                    throw NumericalError("solve: L1 growth bound violated at step " + std::to_string(i));
                }
            }
            record(i, u);
        }
    }
    return traj;
}

struct ConvergenceRow {
    int nu;
    int nu_next;
    double l1_difference;
};

/// ||u^nu(T) - u^{nu+1}(T)||_1 for consecutive entries. The solves run concurrently.
inline std::vector<ConvergenceRow> self_convergence(const std::vector<SplittingConfig>& configs,
                                                    const GridFunction& u0) {
    if (configs.size() < 2) throw DomainError("self_convergence: need at least two configs");
    for (std::size_t k = 1; k < configs.size(); ++k) {
        if (!(configs[k].grid == configs[0].grid) || configs[k].T != configs[0].T) {
            throw DomainError("self_convergence: configs must share grid and T");
        }
        if (configs[k].nu != configs[k - 1].nu + 1) {
            throw DomainError("self_convergence: nu values must be consecutive");
        }
    }
    std::vector<std::future<GridFunction>> jobs;
    jobs.reserve(configs.size());
    for (const auto& c : configs) {
        jobs.push_back(std::async(std::launch::async, [&c, &u0] {
            SplittingConfig lean = c;
            lean.snapshot_times.clear();
            lean.every_step = false;
            return solve(lean, u0).snapshots.back();
        }));
    }
    std::vector<GridFunction> finals;
    finals.reserve(jobs.size());
    for (auto& j : jobs) finals.push_back(j.get());

    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
        rows.push_back({configs[k].nu, configs[k + 1].nu, l1_norm(finals[k] - finals[k + 1])});
    }
    return rows;
}

}  // namespace bp

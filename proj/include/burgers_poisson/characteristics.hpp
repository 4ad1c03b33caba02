#pragma once

// Forward characteristics x' = u(t, x) through a computed trajectory, and the
// slope z = u_x along them, which obeys the Riccati-type law
//
//     z' = -z^2 + [G*u](x) + u(x).
//
// Within a step [t_i, t_{i+1}) the field is frozen at snapshot i. Positions and
// slopes are advanced with the explicit midpoint rule; when a slope is carried,
// the step is subdivided so that h |z| <= 0.01, which resolves the approach to
// z = -inf without changing the frozen-field model.

#include "grid.hpp"
#include "poisson_kernel.hpp"
#include "splitting_solver.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace bp {

struct CharacteristicTrace {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> gradients;  // empty unless the slope was co-integrated
    std::optional<double> blowup_time;
    double blowup_threshold = 0.0;
    bool left_domain = false;  // trace stopped because x(t) exited the grid

    bool has_gradients() const noexcept { return !gradients.empty(); }
    std::size_t size() const noexcept { return times.size(); }
};

namespace detail {

inline void require_every_step(const Trajectory& traj, const char* who) {
    if (!traj.has_every_step()) {
        throw DomainError(std::string(who) + ": trajectory must store every step (every_step = true)");
    }
}

inline void require_interior(const Trajectory& traj, double x_bar, const char* who) {
    const auto& g = traj.grid();
    if (!(x_bar > g.x_min() && x_bar < g.x_max())) {
        throw DomainError(std::string(who) + ": starting point outside the grid interior");
    }
}

}  // namespace detail

inline CharacteristicTrace trace(const Trajectory& traj, double x_bar) {
    detail::require_every_step(traj, "trace");
    detail::require_interior(traj, x_bar, "trace");
    CharacteristicTrace out;
    const double dt = traj.dt();
    double x = x_bar;
    out.times.push_back(0.0);
    out.positions.push_back(x);
    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        const GridFunction& u = traj.snapshots[i];
        try {
            const double mid = x + 0.5 * dt * interp(u, x);
            x += dt * interp(u, mid);
            if (!traj.grid().contains(x)) throw OutOfDomain("trace left the grid");
        } catch (const OutOfDomain&) {
            out.left_domain = true;
            break;
        }
        out.times.push_back(traj.times[i + 1]);
        out.positions.push_back(x);
    }
    return out;
}

/// Co-integrates x and z = u_x along the characteristic from (x_bar, z0):
/// z' = -z^2 + G*u + u, or z' = -z^2 for a source-free trajectory.
/// Stops at the first instant with z <= -threshold and records it.
inline CharacteristicTrace trace_gradient(const Trajectory& traj, double x_bar, double z0, double threshold) {
    detail::require_every_step(traj, "trace_gradient");
    detail::require_interior(traj, x_bar, "trace_gradient");
    if (!(threshold > 0.0)) throw DomainError("trace_gradient: threshold must be positive");

    CharacteristicTrace out;
    out.blowup_threshold = threshold;
    KernelWorkspace ws(traj.grid());
    double x = x_bar, z = z0;
    out.times.push_back(0.0);
    out.positions.push_back(x);
    out.gradients.push_back(z);
    if (z <= -threshold) {
        out.blowup_time = 0.0;
        return out;
    }

    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        const GridFunction& u = traj.snapshots[i];
        const bool forced = traj.config.source_enabled;
        const GridFunction g = forced ? ws.conv_G(u) : GridFunction(traj.grid());
        auto forcing = [&](double at) { return forced ? interp(g, at) + interp(u, at) : 0.0; };

        double t = traj.times[i];
        const double t_end = traj.times[i + 1];
        try {
            while (t < t_end) {
                const double h = std::min(t_end - t, 0.01 / std::max(std::abs(z), 1e-300));
                const double x_mid = x + 0.5 * h * interp(u, x);
                const double z_mid = z + 0.5 * h * (-z * z + forcing(x));
                x += h * interp(u, x_mid);
                z += h * (-z_mid * z_mid + forcing(x_mid));
                t = (t_end - t <= h) ? t_end : t + h;
                if (!traj.grid().contains(x)) throw OutOfDomain("trace left the grid");
                if (z <= -threshold) {
                    out.blowup_time = t;
                    break;
                }
            }
        } catch (const OutOfDomain&) {
            out.left_domain = true;
            break;
        }
        out.times.push_back(t);
        out.positions.push_back(x);
        out.gradients.push_back(z);
        if (out.blowup_time) break;
        if (!std::isfinite(z)) throw NumericalError("trace_gradient: slope became non-finite");
    }
    return out;
}

/// First snapshot time at which some adjacent difference quotient is <= -threshold.
inline std::optional<double> detect_breaking(const Trajectory& traj, double threshold) {
    if (!(threshold > 0.0)) throw DomainError("detect_breaking: threshold must be positive");
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (min_difference_quotient(traj.snapshots[k]) <= -threshold) return traj.times[k];
    }
    return std::nullopt;
}

}  // namespace bp

#pragma once

// Closed-form wave-breaking and smoothness bounds for C^1 initial data.
//
// Local bounds follow the slope along the characteristic through one point x̄
// (value u = ū(x̄), slope s = ū'(x̄), mass M = ||ū||_1):
//
//   lower:     T_+ = ln(1 + (pi/2 + atan(s/r)) / r),          r = sqrt(|u| + 2M)
//   condition: s < -1/2 - sqrt(|u| + 2M + 1/4)
//   upper:     T^* = 2 / |2s + 1 + 2 sqrt(|u| + 2M + 1/4)|
//
// Global bounds use m = inf ū' only:
//
//   lower:     T^- = ln(1 + (pi/2 - atan(|m|/sqrt(2M))) / sqrt(|m| + 3M))
//   condition: m < -1 - sqrt(5M/2 + 1)
//   upper:     T^+ = 2 / |2m + 1 + 2 sqrt(|m| + 5M/2 + 1/4)|
//
// and ||u_x||_inf stays bounded on [0, ln(1 + 1/||ū'||_inf)).
//
// Note: the pointwise breaking test used inside the proof of the global result
// carries ||ū||_1 + 1/4 under the root instead of 2||ū||_1 + 1/4. Each formula
// is implemented where it is stated; they are not reconciled here.

#include "errors.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace bp {

struct LocalBreakingInput {
    double u_at;      // ū(x̄)
    double slope_at;  // ū'(x̄)
    double l1;        // ||ū||_1
};

struct GlobalBreakingInput {
    double m_inf;      // inf ū'
    double m_sup_abs;  // ||ū'||_inf
    double l1;         // ||ū||_1
};

namespace detail {

inline void validate(const LocalBreakingInput& in) {
    if (!std::isfinite(in.u_at) || !std::isfinite(in.slope_at) || !std::isfinite(in.l1) || in.l1 < 0.0) {
        throw DomainError("LocalBreakingInput: need finite values and l1 >= 0");
    }
}

inline void validate(const GlobalBreakingInput& in) {
    if (!std::isfinite(in.m_inf) || !std::isfinite(in.m_sup_abs) || !std::isfinite(in.l1) || in.l1 < 0.0 ||
        in.m_sup_abs < 0.0) {
        throw DomainError("GlobalBreakingInput: need finite values, l1 >= 0, m_sup_abs >= 0");
    }
}

inline double local_root_quarter(const LocalBreakingInput& in) {
    return std::sqrt(std::abs(in.u_at) + 2.0 * in.l1 + 0.25);
}

}  // namespace detail

inline double t_star_local(const LocalBreakingInput& in) {
    detail::validate(in);
    const double r2 = std::abs(in.u_at) + 2.0 * in.l1;
    if (r2 == 0.0) throw DomainError("t_star_local: |u(x)| + 2||u||_1 = 0, bound undefined");
    const double r = std::sqrt(r2);
    return std::log1p((std::numbers::pi / 2.0 + std::atan(in.slope_at / r)) / r);
}

inline bool blowup_condition_local(const LocalBreakingInput& in) {
    detail::validate(in);
    return in.slope_at < -0.5 - detail::local_root_quarter(in);
}

inline double t_upper_local(const LocalBreakingInput& in) {
    if (!blowup_condition_local(in)) throw DomainError("t_upper_local: breaking condition not met");
    return 2.0 / std::abs(2.0 * in.slope_at + 1.0 + 2.0 * detail::local_root_quarter(in));
}

inline double t_lower_global(const GlobalBreakingInput& in) {
    detail::validate(in);
    if (in.l1 == 0.0) throw DomainError("t_lower_global: needs ||u||_1 > 0");
    const double m = std::abs(in.m_inf);
    const double factor = std::numbers::pi / 2.0 - std::atan(m / std::sqrt(2.0 * in.l1));
    return std::log1p(factor / std::sqrt(m + 3.0 * in.l1));
}

inline bool blowup_condition_global(const GlobalBreakingInput& in) {
    detail::validate(in);
    return in.m_inf < -1.0 - std::sqrt(2.5 * in.l1 + 1.0);
}

inline double t_upper_global(const GlobalBreakingInput& in) {
    if (!blowup_condition_global(in)) throw DomainError("t_upper_global: breaking condition not met");
    const double m = in.m_inf;
    return 2.0 / std::abs(2.0 * m + 1.0 + 2.0 * std::sqrt(std::abs(m) + 2.5 * in.l1 + 0.25));
}

/// ln(1 + 1/m) with m = ||ū'||_inf. nullopt means unbounded (m = 0).
inline std::optional<double> smooth_horizon(double m_sup_abs) {
    if (!(m_sup_abs >= 0.0) || !std::isfinite(m_sup_abs)) {
        throw DomainError("smooth_horizon: need a finite m >= 0");
    }
    if (m_sup_abs == 0.0) return std::nullopt;
    return std::log1p(1.0 / m_sup_abs);
}

struct BoundWindow {
    double t_lower;
    bool condition_met;
    std::optional<double> t_upper;
};

struct BreakingReport {
    // Headline window: the local one when a local input is given, else the global one.
    double t_lower = 0.0;
    bool blowup_condition_met = false;
    std::optional<double> t_upper;

    std::optional<LocalBreakingInput> local_input;
    std::optional<GlobalBreakingInput> global_input;
    std::optional<BoundWindow> local;
    std::optional<BoundWindow> global;
    // Set only when a global input is present; nullopt inside means unbounded.
    std::optional<std::optional<double>> smooth_horizon_value;
};

inline BoundWindow local_window(const LocalBreakingInput& in) {
    BoundWindow w{t_star_local(in), blowup_condition_local(in), std::nullopt};
    if (w.condition_met) w.t_upper = t_upper_local(in);
    return w;
}

inline BoundWindow global_window(const GlobalBreakingInput& in) {
    BoundWindow w{t_lower_global(in), blowup_condition_global(in), std::nullopt};
    if (w.condition_met) w.t_upper = t_upper_global(in);
    return w;
}

inline BreakingReport report(const std::optional<LocalBreakingInput>& local,
                             const std::optional<GlobalBreakingInput>& global) {
    if (!local && !global) throw DomainError("report: need a local or a global input");
    BreakingReport r;
    r.local_input = local;
    r.global_input = global;
    if (global) {
        r.global = global_window(*global);
        r.smooth_horizon_value = smooth_horizon(global->m_sup_abs);
    }
    if (local) r.local = local_window(*local);
    const BoundWindow& head = local ? *r.local : *r.global;
    r.t_lower = head.t_lower;
    r.blowup_condition_met = head.condition_met;
    r.t_upper = head.t_upper;
    return r;
}

}  // namespace bp

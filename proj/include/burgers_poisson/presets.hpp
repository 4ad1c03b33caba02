#pragma once

// Named initial data with closed forms and a recommended run configuration.
//
//   box           indicator of [-1, 1]
//   bump          (1 - x^2)^2 on |x| < 1
//   breaking-demo -10 x (1 - x^2)^2 on |x| < 1; slope -10 at x = 0 meets the
//                 local breaking condition there
//   smooth-small  a (1 - (x/2)^2)^2 on |x| < 2 with max |u'| = 0.1
//   riemann-shock 1 for x < 0, 0 for x > 0 (Burgers only)
//   riemann-fan   0 for x < 0, 1 for x > 0 (Burgers only)
//
// Jump points of the discontinuous presets are sampled with the mean value.

#include "errors.hpp"
#include "grid.hpp"
#include "splitting_solver.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace bp {

struct Preset {
    std::string name;
    std::string description;
    GridFunction u0;
    SplittingConfig config;
    std::function<double(double)> value;
    std::function<double(double)> slope;  // classical derivative where it exists
    std::optional<double> steepest_point;  // argmin of the slope, when known in closed form
};

inline constexpr std::array<std::string_view, 6> preset_names{
    "box", "bump", "breaking-demo", "smooth-small", "riemann-shock", "riemann-fan"};

namespace detail {

inline double quartic_bump(double s) { return std::abs(s) < 1.0 ? (1.0 - s * s) * (1.0 - s * s) : 0.0; }
inline double quartic_bump_slope(double s) { return std::abs(s) < 1.0 ? -4.0 * s * (1.0 - s * s) : 0.0; }

// 8 / (3 sqrt 3): max |d/ds (1 - s^2)^2|, attained at s = 1/sqrt 3.
inline constexpr double quartic_bump_max_slope = 1.5396007178390020;

inline double jump_value(double x, double left, double right, double eps) {
    if (std::abs(x) <= eps) return 0.5 * (left + right);
    return x < 0.0 ? left : right;
}

}  // namespace detail

/// Builds a preset. When `grid` is given it replaces the recommended grid.
inline Preset make_preset(std::string_view name, std::optional<Grid1D> grid = std::nullopt) {
    Preset p{std::string(name), {}, GridFunction(Grid1D(-1, 1, 2)), {}, {}, {}, std::nullopt};
    SplittingConfig& c = p.config;

    if (name == "box") {
        p.description = "indicator of [-1, 1]";
        c.grid = Grid1D(-30.0, 30.0, 6000);
        c.nu = 8;
        c.T = 2.0;
        p.value = [](double x) { return std::abs(x) < 1.0 ? 1.0 : (std::abs(x) == 1.0 ? 0.5 : 0.0); };
        p.slope = [](double) { return 0.0; };
    } else if (name == "bump") {
        p.description = "(1 - x^2)^2 on |x| < 1";
        c.grid = Grid1D(-10.0, 10.0, 16000);
        c.nu = 8;
        c.T = 1.0;
        p.value = detail::quartic_bump;
        p.slope = detail::quartic_bump_slope;
    } else if (name == "breaking-demo") {
        p.description = "-10 x (1 - x^2)^2 on |x| < 1";
        c.grid = Grid1D(-10.0, 10.0, 8000);
        c.nu = 10;
        c.T = 0.25;
        p.value = [](double x) { return -10.0 * x * detail::quartic_bump(x); };
        p.slope = [](double x) {
            return -10.0 * (detail::quartic_bump(x) + x * detail::quartic_bump_slope(x));
        };
        p.steepest_point = 0.0;
    } else if (name == "smooth-small") {
        constexpr double width = 2.0;
        constexpr double height = 0.1 * width / detail::quartic_bump_max_slope;
        p.description = "a (1 - (x/2)^2)^2 on |x| < 2, max |u'| = 0.1";
        c.grid = Grid1D(-15.0, 15.0, 3000);
        c.nu = 8;
        c.T = 2.2;
        p.value = [=](double x) { return height * detail::quartic_bump(x / width); };
        p.slope = [=](double x) { return height / width * detail::quartic_bump_slope(x / width); };
        p.steepest_point = width / std::sqrt(3.0);
    } else if (name == "riemann-shock" || name == "riemann-fan") {
        const bool shock = name == "riemann-shock";
        const double left = shock ? 1.0 : 0.0, right = shock ? 0.0 : 1.0;
        p.description = shock ? "Riemann shock 1 | 0" : "Riemann fan 0 | 1";
        c.grid = Grid1D(-10.0, 10.0, 2000);
        c.nu = 8;
        c.T = 1.0;
        c.source_enabled = false;
        p.value = [=](double x) { return x < 0.0 ? left : (x > 0.0 ? right : 0.5 * (left + right)); };
        p.slope = [](double) { return 0.0; };
        if (shock) p.steepest_point = 0.0;
    } else {
        std::string known;
        for (auto n : preset_names) known += (known.empty() ? "" : ", ") + std::string(n);
        throw ConfigError("unknown preset '" + std::string(name) + "' (known: " + known + ")");
    }

    if (grid) c.grid = *grid;
    const double eps = 1e-9 * c.grid.dx();
    if (name == "box") {
        p.u0 = sample_indicator(c.grid, -1.0, 1.0);
    } else if (name == "riemann-shock") {
        p.u0 = sample(c.grid, [=](double x) { return detail::jump_value(x, 1.0, 0.0, eps); });
    } else if (name == "riemann-fan") {
        p.u0 = sample(c.grid, [=](double x) { return detail::jump_value(x, 0.0, 1.0, eps); });
    } else {
        p.u0 = sample(c.grid, p.value);
    }
    if (c.source_enabled) c.tail_margin = required_tail_margin(c.T, l1_norm(p.u0));
    return p;
}

}  // namespace bp

#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace bp {

/// Uniform mesh x_j = x_min + j*dx, j = 0..n, on a bounded window standing in
/// for the real line.
class Grid1D {
public:
    Grid1D(double x_min, double x_max, int n) : x_min_(x_min), x_max_(x_max), n_(n) {
        if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
            throw DomainError("Grid1D: need finite x_min < x_max");
        }
        if (n < 2) {
            throw DomainError("Grid1D: need at least 2 intervals");
        }
    }

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    int n() const noexcept { return n_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) + 1; }
    double dx() const noexcept { return (x_max_ - x_min_) / n_; }
    double length() const noexcept { return x_max_ - x_min_; }

    double node(std::size_t j) const noexcept {
        return j == static_cast<std::size_t>(n_) ? x_max_ : x_min_ + static_cast<double>(j) * dx();
    }

    bool contains(double x) const noexcept { return x >= x_min_ && x <= x_max_; }

    bool operator==(const Grid1D&) const = default;

private:
    double x_min_;
    double x_max_;
    int n_;
};

/// Node samples of a real function on a Grid1D.
class GridFunction {
public:
    explicit GridFunction(Grid1D grid) : grid_(grid), values_(grid.size(), 0.0) {}

    GridFunction(Grid1D grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) {
            throw DomainError("GridFunction: expected " + std::to_string(grid_.size()) +
                              " values, got " + std::to_string(values_.size()));
        }
        for (std::size_t j = 0; j < values_.size(); ++j) {
            if (!std::isfinite(values_[j])) {
                throw NumericalError("GridFunction: non-finite value at node " + std::to_string(j));
            }
        }
    }

    const Grid1D& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }
    double operator[](std::size_t j) const noexcept { return values_[j]; }
    double& operator[](std::size_t j) noexcept { return values_[j]; }
    double x(std::size_t j) const noexcept { return grid_.node(j); }

    bool all_finite() const noexcept {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }

    bool operator==(const GridFunction&) const = default;

private:
    Grid1D grid_;
    std::vector<double> values_;
};

inline void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what) {
    if (!(a.grid() == b.grid())) {
        throw DomainError(std::string(what) + ": grid mismatch");
    }
}

inline GridFunction sample(const Grid1D& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
    return GridFunction(grid, std::move(v));
}

/// Samples the indicator of [a, b]; nodes that land on an endpoint (up to
/// roundoff in the node formula) get 1/2 so the interpolant has the exact mass
/// and first moment of the indicator.
inline GridFunction sample_indicator(const Grid1D& grid, double a, double b, double height = 1.0) {
    const double eps = 1e-9 * grid.dx();
    return sample(grid, [=](double x) {
        if (std::abs(x - a) <= eps || std::abs(x - b) <= eps) return 0.5 * height;
        return (x > a && x < b) ? height : 0.0;
    });
}

inline GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "operator+");
    GridFunction r = a;
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += b[j];
    return r;
}

inline GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b, "operator-");
    GridFunction r = a;
    for (std::size_t j = 0; j < r.size(); ++j) r[j] -= b[j];
    return r;
}

inline GridFunction operator*(double s, const GridFunction& a) {
    GridFunction r = a;
    for (double& v : r.values()) v *= s;
    return r;
}

/// Composite trapezoid approximation of the integral of |f| over [x_min, x_max].
inline double l1_norm(const GridFunction& f) {
    const auto v = f.values();
    double s = 0.5 * (std::abs(v.front()) + std::abs(v.back()));
    for (std::size_t j = 1; j + 1 < v.size(); ++j) s += std::abs(v[j]);
    return s * f.grid().dx();
}

/// Trapezoid integral of |f| restricted to the nodes with lo <= x_j <= hi.
inline double l1_norm_on(const GridFunction& f, double lo, double hi) {
    const auto& g = f.grid();
    std::size_t first = g.size(), last = 0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = g.node(j);
        if (x >= lo && x <= hi) {
            first = std::min(first, j);
            last = j;
        }
    }
    if (first >= last) return 0.0;
    double s = 0.5 * (std::abs(f[first]) + std::abs(f[last]));
    for (std::size_t j = first + 1; j < last; ++j) s += std::abs(f[j]);
    return s * g.dx();
}

inline double linf_norm(const GridFunction& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

/// Cumulative trapezoid integral from x_min; exact for the piecewise-linear
/// interpolant of f.
inline GridFunction primitive(const GridFunction& f) {
    const double h = f.grid().dx();
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t j = 1; j < out.size(); ++j) out[j] = out[j - 1] + 0.5 * h * (f[j - 1] + f[j]);
    return GridFunction(f.grid(), std::move(out));
}

/// Linear interpolation. Throws OutOfDomain outside [x_min, x_max].
inline double interp(const GridFunction& f, double x) {
    const auto& g = f.grid();
    if (!(x >= g.x_min() && x <= g.x_max())) {
        throw OutOfDomain("interp: x = " + std::to_string(x) + " outside [" +
                          std::to_string(g.x_min()) + ", " + std::to_string(g.x_max()) + "]");
    }
    const double s = (x - g.x_min()) / g.dx();
    const auto nearest = static_cast<std::size_t>(std::lround(s));
    if (x == g.node(nearest)) return f[nearest];
    auto j = static_cast<std::size_t>(std::floor(s));
    if (j >= static_cast<std::size_t>(g.n())) j = static_cast<std::size_t>(g.n()) - 1;
    const double w = s - static_cast<double>(j);
    if (w == 0.0) return f[j];
    if (w == 1.0) return f[j + 1];
    return (1.0 - w) * f[j] + w * f[j + 1];
}

/// max_j (f_{j+1} - f_j)/dx: the one-sided Lipschitz constant of the
/// piecewise-linear interpolant.
inline double max_difference_quotient(const GridFunction& f) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < f.size(); ++j) m = std::max(m, f[j + 1] - f[j]);
    return m / f.grid().dx();
}

inline double min_difference_quotient(const GridFunction& f) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < f.size(); ++j) m = std::min(m, f[j + 1] - f[j]);
    return m / f.grid().dx();
}

inline double max_abs_difference_quotient(const GridFunction& f) {
    return std::max(std::abs(max_difference_quotient(f)), std::abs(min_difference_quotient(f)));
}

/// Smallest interval [lo, hi] of nodes outside of which |f| <= tol.
/// Returns nothing when f is below tol everywhere.
inline std::optional<std::pair<double, double>> support(const GridFunction& f, double tol = 0.0) {
    std::optional<std::pair<double, double>> out;
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (std::abs(f[j]) > tol) {
            if (!out) out = std::pair{f.x(j), f.x(j)};
            out->second = f.x(j);
        }
    }
    return out;
}

// ---------------------------------------------------------------- CSV

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const GridFunction& f) {
    os << "x,u\n";
    for (std::size_t j = 0; j < f.size(); ++j) {
        os << format_double(f.x(j)) << ',' << format_double(f[j]) << '\n';
    }
}

inline void write_csv(const std::string& path, const GridFunction& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path);
    write_csv(os, f);
}

/// Reads `x,u` rows. x must be strictly increasing and uniform to 1e-6 of a cell.
inline GridFunction read_csv(std::istream& is, const std::string& name = "<stream>") {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError(name + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,u") throw ConfigError(name + ": expected header 'x,u', got '" + line + "'");
    std::vector<double> xs, us;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ConfigError(name + ":" + std::to_string(lineno) + ": expected two columns");
        }
        try {
            std::size_t used = 0;
            const std::string xs_str = line.substr(0, comma), us_str = line.substr(comma + 1);
            const double x = std::stod(xs_str, &used);
            if (used != xs_str.size()) throw std::invalid_argument("x");
            const double u = std::stod(us_str, &used);
            if (used != us_str.size()) throw std::invalid_argument("u");
            xs.push_back(x);
            us.push_back(u);
        } catch (const std::logic_error&) {
            throw ConfigError(name + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
    if (xs.size() < 3) throw ConfigError(name + ": need at least 3 rows");
    for (std::size_t j = 1; j < xs.size(); ++j) {
        if (!(xs[j] > xs[j - 1])) {
            throw ConfigError(name + ": x column not strictly increasing at row " + std::to_string(j + 1));
        }
    }
    const double dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    for (std::size_t j = 1; j < xs.size(); ++j) {
        const double expected = xs.front() + static_cast<double>(j) * dx;
        if (std::abs(xs[j] - expected) > 1e-6 * dx) {
            throw ConfigError(name + ": x column not uniform at row " + std::to_string(j + 1));
        }
    }
    return GridFunction(Grid1D(xs.front(), xs.back(), static_cast<int>(xs.size() - 1)), std::move(us));
}

inline GridFunction read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + path);
    return read_csv(is, path);
}

}  // namespace bp

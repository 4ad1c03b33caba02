#pragma once

// Entropy solution operator of u_t + (u^2/2)_x = 0 via the Lax–Oleinik
// (Hopf–Lax) formula
//
//     U(t, x) = min_y [ U0(y) + (x - y)^2 / (2t) ],      u = U_x,
//
// applied to a reconstruction of the node data: node j carries the average of
// u over its dual cell [x_j - dx/2, x_j + dx/2], and inside that cell u0 is
// linear with slope max(0, minmod(left, right difference quotient)).
// Decreasing stretches stay piecewise constant, increasing ones have no upward
// jumps at cell edges, so the reconstruction is no steeper than the data and
// the discrete one-sided Lipschitz bound decays like the exact one. U0 is
// piecewise quadratic and convex on each cell, the minimum over each cell has a
// closed form, and the new node value is the difference quotient of U across
// its dual cell. Outside the grid u0 is continued by its boundary values.
//
// The leftmost minimizer is nondecreasing in x (the cost is a Monge array), so
// the argmin over all evaluation points is found by divide and conquer.

#include "grid.hpp"
#include "tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bp {

/// Lax–Oleinik data for one evolution: the node field, the primitive of its
/// dual-cell reconstruction at the cell edges, the reconstruction slopes and
/// the evolution time.
struct LaxOleinikProblem {
    GridFunction u0;
    std::vector<double> edges;           // e_k = x_k - dx/2, k = 0..n+1
    std::vector<double> edge_primitive;  // U0(e_k), U0(e_0) = 0
    std::vector<double> slope;           // reconstruction slope on dual cell k, >= 0
    double t;

    LaxOleinikProblem(GridFunction u, double time) : u0(std::move(u)), t(time) {
        if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("LaxOleinikProblem: need t > 0");
        const auto& g = u0.grid();
        const std::size_t m = u0.size();
        const double h = g.dx();
        edges.resize(m + 1);
        edge_primitive.resize(m + 1);
        for (std::size_t k = 0; k <= m; ++k) {
            edges[k] = g.x_min() + (static_cast<double>(k) - 0.5) * h;
        }
        edge_primitive[0] = 0.0;
        for (std::size_t k = 0; k < m; ++k) edge_primitive[k + 1] = edge_primitive[k] + h * u0[k];
        slope.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            const double left = k > 0 ? (u0[k] - u0[k - 1]) / h : 0.0;
            const double right = k + 1 < m ? (u0[k + 1] - u0[k]) / h : 0.0;
            slope[k] = std::max(0.0, std::min(left, right));
        }
    }

    /// U0 at y inside candidate cell c (see cell_minimum for the numbering).
    double primitive(double y, std::size_t c) const noexcept {
        const std::size_t m = u0.size();
        if (c == 0) return u0[0] * (y - edges.front());
        if (c == m + 1) return edge_primitive.back() + u0[m - 1] * (y - edges.back());
        const std::size_t k = c - 1;
        const double mid = 0.5 * (edges[k] + edges[k + 1]);
        const double half = 0.5 * (edges[k + 1] - edges[k]);
        return edge_primitive[k] + u0[k] * (y - edges[k]) + 0.5 * slope[k] * ((y - mid) * (y - mid) - half * half);
    }

    /// Number of candidate cells: the n+1 dual cells plus one far-field cell on
    /// each side. Candidate c corresponds to dual cell c - 1.
    std::size_t candidate_count() const noexcept { return u0.size() + 2; }
    std::size_t evaluation_count() const noexcept { return edges.size(); }

    /// min over y in candidate cell c of U0(y) + (x - y)^2 / (2t).
    double cell_minimum(double x, std::size_t c) const noexcept {
        const std::size_t m = u0.size();
        double y;
        if (c == 0) {
            y = std::min(x - t * u0[0], edges.front());
        } else if (c == m + 1) {
            y = std::max(x - t * u0[m - 1], edges.back());
        } else {
            const std::size_t k = c - 1;
            const double mid = 0.5 * (edges[k] + edges[k + 1]);
            const double s = slope[k];
            y = std::clamp((x - t * u0[k] + t * s * mid) / (1.0 + t * s), edges[k], edges[k + 1]);
        }
        const double d = x - y;
        return primitive(y, c) + d * d / (2.0 * t);
    }
};

namespace detail {

struct HopfLaxResult {
    std::vector<int> cell;      // leftmost minimizing candidate, minus one
    std::vector<double> value;  // U(t, e_j)
};

inline HopfLaxResult hopf_lax(const LaxOleinikProblem& p) {
    const std::size_t rows = p.evaluation_count();
    HopfLaxResult r{std::vector<int>(rows), std::vector<double>(rows)};

    struct Frame {
        std::size_t row_lo, row_hi, col_lo, col_hi;
    };
    std::vector<Frame> stack;
    stack.push_back({0, rows - 1, 0, p.candidate_count() - 1});
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const std::size_t mid = f.row_lo + (f.row_hi - f.row_lo) / 2;
        const double x = p.edges[mid];
        std::size_t best = f.col_lo;
        double best_value = p.cell_minimum(x, best);
        for (std::size_t c = f.col_lo + 1; c <= f.col_hi; ++c) {
            const double v = p.cell_minimum(x, c);
            if (v < best_value) {
                best_value = v;
                best = c;
            }
        }
        r.cell[mid] = static_cast<int>(best) - 1;
        r.value[mid] = best_value;
        if (mid > f.row_lo) stack.push_back({f.row_lo, mid - 1, f.col_lo, best});
        if (mid < f.row_hi) stack.push_back({mid + 1, f.row_hi, best, f.col_hi});
    }
    return r;
}

}  // namespace detail

/// Leftmost minimizing dual cell for each edge e_j = x_j - dx/2, j = 0..n+1.
/// -1 and n+1 denote the far-field continuations. Nondecreasing in j.
inline std::vector<int> minimizer_indices(const LaxOleinikProblem& p) {
    return detail::hopf_lax(p).cell;
}

/// Throws MarginError unless u0 equals its boundary value (up to
/// tolerances::far_field_relative * max(1, ||u0||_inf)) within distance
/// ||u0||_inf * t of each end of the grid. The slack admits the exponential
/// tail that the nonlocal source leaves at the boundary.
inline void check_far_field_margin(const GridFunction& u0, double t) {
    const double reach = linf_norm(u0) * t;
    const double tol = tolerances::far_field_relative * std::max(1.0, linf_norm(u0));
    const auto& g = u0.grid();
    const double left = u0[0], right = u0[u0.size() - 1];
    for (std::size_t j = 0; j < u0.size(); ++j) {
        const double x = g.node(j);
        if (x - g.x_min() <= reach && std::abs(u0[j] - left) > tol) {
            throw MarginError("evolve: data not constant within " + std::to_string(reach) +
                              " of the left boundary (node " + std::to_string(j) + ")");
        }
        if (g.x_max() - x <= reach && std::abs(u0[j] - right) > tol) {
            throw MarginError("evolve: data not constant within " + std::to_string(reach) +
                              " of the right boundary (node " + std::to_string(j) + ")");
        }
    }
}

/// Kruzkov entropy solution of Burgers' equation at time t, averaged over the
/// dual cells. t = 0 returns u0 unchanged.
inline GridFunction evolve(const GridFunction& u0, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evolve: t must be finite and >= 0");
    if (t == 0.0) return u0;
    check_far_field_margin(u0, t);
    const LaxOleinikProblem p(u0, t);
    const auto hl = detail::hopf_lax(p);
    const double h = u0.grid().dx();
    std::vector<double> out(u0.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = (hl.value[j + 1] - hl.value[j]) / h;
    return GridFunction(u0.grid(), std::move(out));
}

/// Exact entropy solution of the Riemann problem for flux u^2/2.
inline double riemann_exact(double u_left, double u_right, double t, double x) {
    if (!(t > 0.0)) throw DomainError("riemann_exact: need t > 0");
    const double s = x / t;
    if (u_left > u_right) return s < 0.5 * (u_left + u_right) ? u_left : u_right;
    if (u_left < u_right) {
        if (s <= u_left) return u_left;
        if (s >= u_right) return u_right;
        return s;
    }
    return u_left;
}

}  // namespace bp

#pragma once

// Convolution with the Green's function G(x) = -exp(-|x|)/2 of phi'' - phi = u
// and with its derivative G'. Both are evaluated at the nodes by integrating the
// piecewise-linear interpolant of u exactly against exp(-|x - z|), using two
// exponential recursions (left and right sweeps), so each call is O(n).

#include "grid.hpp"

#include <cmath>
#include <vector>

namespace bp {

namespace detail {

// Cell moments of exp(-h*w) over w in [0,1]:
//   I0 = int exp(-h w) dw,   I1 = int w exp(-h w) dw.
struct ExpMoments {
    double i0;
    double i1;
};

inline ExpMoments exp_moments(double h) {
    if (h < 0.05) {
        // I_k = sum_m (-h)^m / (m! (m + k + 1)); the closed form cancels badly here.
        double term = 1.0, i0 = 0.0, i1 = 0.0;
        for (int m = 0; m < 14; ++m) {
            i0 += term / (m + 1);
            i1 += term / (m + 2);
            term *= -h / (m + 1);
        }
        return {i0, i1};
    }
    const double em = std::exp(-h);
    return {-std::expm1(-h) / h, (1.0 - em * (1.0 + h)) / (h * h)};
}

}  // namespace detail

/// Scratch space for the kernel sweeps on one grid. Not thread safe; use one
/// workspace per thread.
class KernelWorkspace {
public:
    explicit KernelWorkspace(const Grid1D& grid)
        : grid_(grid), decay_(std::exp(-grid.dx())), left_(grid.size()), right_(grid.size()) {
        const double h = grid.dx();
        const auto m = detail::exp_moments(h);
        w_far_ = h * m.i1;
        w_near_ = h * (m.i0 - m.i1);
    }

    const Grid1D& grid() const noexcept { return grid_; }
    double decay() const noexcept { return decay_; }

    /// Node values of G*u, u extended by zero outside the grid.
    GridFunction conv_G(const GridFunction& u) {
        sweep(u);
        GridFunction out(grid_);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = -0.5 * (left_[j] + right_[j]);
        return out;
    }

    /// Node values of G'*u = (1/2)[int_{-inf}^x e^{z-x} u - int_x^inf e^{x-z} u].
    GridFunction conv_Gx(const GridFunction& u) {
        sweep(u);
        GridFunction out(grid_);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = 0.5 * (left_[j] - right_[j]);
        return out;
    }

private:
    void sweep(const GridFunction& u) {
        if (!(u.grid() == grid_)) throw DomainError("KernelWorkspace: grid mismatch");
        const std::size_t n = u.size();
        // left_[j]  = int_{x_min}^{x_j} e^{z - x_j} u(z) dz
        // right_[j] = int_{x_j}^{x_max} e^{x_j - z} u(z) dz
        left_[0] = 0.0;
        for (std::size_t j = 1; j < n; ++j) {
            left_[j] = decay_ * left_[j - 1] + w_near_ * u[j] + w_far_ * u[j - 1];
        }
        right_[n - 1] = 0.0;
        for (std::size_t j = n - 1; j-- > 0;) {
            right_[j] = decay_ * right_[j + 1] + w_near_ * u[j] + w_far_ * u[j + 1];
        }
    }

    Grid1D grid_;
    double decay_;
    double w_near_ = 0.0;
    double w_far_ = 0.0;
    std::vector<double> left_;
    std::vector<double> right_;
};

inline GridFunction conv_G(const GridFunction& u) {
    KernelWorkspace ws(u.grid());
    return ws.conv_G(u);
}

inline GridFunction conv_Gx(const GridFunction& u) {
    KernelWorkspace ws(u.grid());
    return ws.conv_Gx(u);
}

struct ContractionReport {
    double lhs;
    double rhs;
    bool pass;
};

/// ||G'*u||_1 <= ||u||_1, with the quadrature slack (1 + 10 dx).
inline ContractionReport l1_contraction_check(const GridFunction& u) {
    const double lhs = l1_norm(conv_Gx(u));
    const double rhs = l1_norm(u);
    return {lhs, rhs, lhs <= rhs * (1.0 + 10.0 * u.grid().dx())};
}

}  // namespace bp

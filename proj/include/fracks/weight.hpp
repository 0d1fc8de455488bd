#pragma once

#include <array>
#include <cmath>

#include "fracks/common.hpp"

namespace fracks {

// The moment weight phi(x) = (1 + |x|^2)^{gamma/2} - 1, gamma in (1, 2].
// Smooth, radial, grows like |x|^gamma, and satisfies
//   phi(x) <= |x|^gamma <= eps + C(eps) phi(x)   for every eps > 0.
struct WeightFunction {
    double gamma;

    explicit WeightFunction(double gamma_) : gamma(gamma_) {
        require(gamma > 1.0 && gamma <= 2.0, "WeightFunction: gamma must lie in (1, 2]");
    }

    double value(const Point& x, int d) const {
        const double q = 1.0 + dot(x, x, d);
        return std::pow(q, 0.5 * gamma) - 1.0;
    }

    double value_radial(double r) const {
        return std::pow(1.0 + r * r, 0.5 * gamma) - 1.0;
    }

    Point gradient(const Point& x, int d) const {
        const double q = 1.0 + dot(x, x, d);
        const double s = gamma * std::pow(q, 0.5 * gamma - 1.0);
        Point g{0, 0, 0};
        for (int j = 0; j < d; ++j) g[j] = s * x[j];
        return g;
    }

    // H_ij = (gamma (1+|x|^2) delta_ij - gamma (2-gamma) x_i x_j) (1+|x|^2)^{gamma/2-2}
    std::array<std::array<double, 3>, 3> hessian(const Point& x, int d) const {
        const double q = 1.0 + dot(x, x, d);
        const double s = std::pow(q, 0.5 * gamma - 2.0);
        std::array<std::array<double, 3>, 3> h{};
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double v = -gamma * (2.0 - gamma) * x[i] * x[j];
                if (i == j) v += gamma * q;
                h[i][j] = v * s;
            }
        return h;
    }

    double laplacian(const Point& x, int d) const {
        const double r2 = dot(x, x, d);
        const double q = 1.0 + r2;
        return gamma * std::pow(q, 0.5 * gamma - 2.0) * (d + (d - 2.0 + gamma) * r2);
    }

    // Constructive constant in |x|^gamma <= eps + C(eps) phi(x): the ratio
    // |x|^gamma / phi(x) is decreasing, so its sup over |x| >= eps^{1/gamma}
    // sits at the left endpoint.
    double sandwich_constant(double eps) const {
        require(eps > 0.0, "sandwich_constant: eps must be positive");
        return eps / (std::pow(1.0 + std::pow(eps, 2.0 / gamma), 0.5 * gamma) - 1.0);
    }
};

struct ConvexityGap {
    double lhs;         // (grad phi(x) - grad phi(y)) . (x - y)
    double rhs_over_k;  // |x-y|^2 / (1 + |x|^{2-gamma} + |y|^{2-gamma})
};

// Quantities of the locally-uniform-convexity inequality
// lhs >= K * rhs_over_k; lhs is nonnegative for every pair.
inline ConvexityGap convexity_gap(const WeightFunction& w, const Point& x, const Point& y, int d) {
    const Point gx = w.gradient(x, d);
    const Point gy = w.gradient(y, d);
    double lhs = 0.0, dist2 = 0.0;
    for (int j = 0; j < d; ++j) {
        const double dj = x[j] - y[j];
        lhs += (gx[j] - gy[j]) * dj;
        dist2 += dj * dj;
    }
    const double rx = norm(x, d), ry = norm(y, d);
    const double denom = 1.0 + std::pow(rx, 2.0 - w.gamma) + std::pow(ry, 2.0 - w.gamma);
    return {lhs, dist2 / denom};
}

// Quadratic form D^2 phi(x) y . y.
inline double hessian_quadratic_form(const WeightFunction& w, const Point& x, const Point& y, int d) {
    const auto h = w.hessian(x, d);
    double s = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s += h[i][j] * y[i] * y[j];
    return s;
}

// Lower bound (gamma-1) |y|^2 / (1+|x|^2)^{1-gamma/2} on the quadratic form.
inline double hessian_form_lower_bound(const WeightFunction& w, const Point& x, const Point& y, int d) {
    const double q = 1.0 + dot(x, x, d);
    return (w.gamma - 1.0) * dot(y, y, d) / std::pow(q, 1.0 - 0.5 * w.gamma);
}

}  // namespace fracks

#pragma once

#include <cmath>
#include <vector>

#include "fracks/common.hpp"
#include "fracks/levy.hpp"  // Gauss-Legendre panel helper

namespace fracks {

namespace kernel_detail {

// Oscillatory radial Fourier inversion of exp(-t rho^alpha):
//   d=1: (1/pi)      int_0^inf e^{-t rho^a} cos(rho r) d rho
//   d=2: (1/2 pi)    int_0^inf e^{-t rho^a} J0(rho r) rho d rho
//   d=3: (1/2 pi^2 r) int_0^inf e^{-t rho^a} sin(rho r) rho d rho
// Panels of one oscillation half-period each (Gauss-Legendre 16 within), with
// the exponential factor truncating the range.
inline double radial_inversion(double r, double t, double alpha, int d) {
    const double cutoff = std::pow(46.0 / t, 1.0 / alpha);  // e^{-46} ~ 1e-20
    auto integrand = [&](double rho) {
        const double damp = std::exp(-t * std::pow(rho, alpha));
        switch (d) {
            case 1: return damp * std::cos(rho * r);
            case 2: return damp * std::cyl_bessel_j(0.0, rho * r) * rho;
            default: return damp * std::sin(rho * r) * rho;
        }
    };
    const double period = r > 0.0 ? pi / r : cutoff;
    const double width = std::min(period, cutoff / 48.0);
    // exp(-t rho^alpha) has unbounded curvature at rho = 0 for alpha < 2;
    // substitute rho = w u^4 on the first panel to restore smoothness
    const double w0 = std::min(width, cutoff);
    auto first = [&](double u) { return integrand(w0 * u * u * u * u) * 4.0 * w0 * u * u * u; };
    double total = levy_detail::gl16(first, 0.0, 1.0);
    double lo = w0;
    while (lo < cutoff) {
        const double hi = std::min(lo + width, cutoff);
        total += levy_detail::gl16(integrand, lo, hi);
        lo = hi;
    }
    switch (d) {
        case 1: return total / pi;
        case 2: return total / (2.0 * pi);
        default: return total / (2.0 * pi * pi * r);
    }
}

}  // namespace kernel_detail

// p_alpha(x, t), the fundamental solution of d_t v + (-Delta)^{alpha/2} v = 0,
// evaluated at radius r by numerical Fourier inversion of e^{-t |xi|^alpha}.
// Closed forms exist for alpha = 2 (Gaussian) and alpha = 1 (Cauchy family);
// they are used as test oracles only, the quadrature path serves all alpha.
inline double stable_kernel_value(double r, double t, double alpha, int d) {
    require(alpha > 0.0 && alpha <= 2.0, "stable_kernel_value: alpha must lie in (0, 2]");
    require(t > 0.0, "stable_kernel_value: t must be positive");
    require(d >= 1 && d <= 3, "stable_kernel_value: d must be 1..3");
    require(r >= 0.0, "stable_kernel_value: radius must be nonnegative");
    if (d == 3 && r == 0.0) {
        // sin(rho r)/r -> rho: reduces to a smooth moment integral
        const double cutoff = std::pow(46.0 / t, 1.0 / alpha);
        auto integrand = [&](double rho) {
            return std::exp(-t * std::pow(rho, alpha)) * rho * rho;
        };
        const double width = cutoff / 64.0;
        auto first = [&](double u) {
            return integrand(width * u * u * u * u) * 4.0 * width * u * u * u;
        };
        double total = levy_detail::gl16(first, 0.0, 1.0);
        for (double lo = width; lo < cutoff; lo += width)
            total += levy_detail::gl16(integrand, lo, std::min(lo + width, cutoff));
        return total / (2.0 * pi * pi);
    }
    return kernel_detail::radial_inversion(r, t, alpha, d);
}

inline std::vector<double> stable_kernel_profile(double alpha, int d, double t,
                                                 const std::vector<double>& radii) {
    std::vector<double> out;
    out.reserve(radii.size());
    for (double r : radii) out.push_back(stable_kernel_value(r, t, alpha, d));
    return out;
}

// Self-similar profile P_alpha = p_alpha(., 1) tabulated on a log-spaced
// radius grid, with the decay-bound constant fitted over the table and the
// normalization certified by quadrature.
struct StableKernel {
    double alpha = 0.0;
    int d = 0;
    std::vector<double> radii;
    std::vector<double> profile;
    double value_at_zero = 0.0;
    double decay_constant = 0.0;  // fitted C in P <= C (1+r)^{-(alpha+d)}
    double mass = 0.0;            // quadrature of the kernel, should be 1

    static StableKernel make(double alpha, int d, int points = 257, double r_min = 1e-2,
                             double r_max = 80.0) {
        require(points >= 9 && points % 2 == 1, "StableKernel: points must be odd (Simpson)");
        StableKernel k;
        k.alpha = alpha;
        k.d = d;
        k.radii.resize(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i)
            k.radii[i] = r_min * std::pow(r_max / r_min, static_cast<double>(i) / (points - 1));
        k.profile = stable_kernel_profile(alpha, d, 1.0, k.radii);
        k.value_at_zero = stable_kernel_value(0.0, 1.0, alpha, d);
        for (int i = 0; i < points; ++i) {
            require(k.profile[i] > 0.0, "StableKernel: profile must be positive");
            k.decay_constant = std::max(
                k.decay_constant, k.profile[i] * std::pow(1.0 + k.radii[i], alpha + d));
        }
        k.mass = k.integrate_mass();
        return k;
    }

    // S_d int_0^inf P(r) r^{d-1} dr from the tabulated profile: a quadratic
    // Taylor head on [0, r_min], composite Simpson in log r over the table,
    // and a two-term algebraic tail c1 r^{-(a+d)} + c2 r^{-(2a+d)} beyond the
    // last node (the second term matters for small alpha).
    double integrate_mass() const {
        const double r_min = radii.front(), r_max = radii.back();
        // head: P(r) ~ P(0) + c r^2 with c matched at the first node
        const double c_head = (profile.front() - value_at_zero) / (r_min * r_min);
        const double head = value_at_zero * std::pow(r_min, d) / d +
                            c_head * std::pow(r_min, d + 2) / (d + 2);
        // Simpson in s = log r of P(e^s) e^{ds}
        const std::size_t n = radii.size();
        const double ds = std::log(radii[1] / radii[0]);
        double body = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = (i == 0 || i + 1 == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            body += w * profile[i] * std::pow(radii[i], d);
        }
        body *= ds / 3.0;
        // tail fit from the edge value and a half-radius sample
        const double pa = profile.back();
        const double pb = stable_kernel_value(0.5 * r_max, 1.0, alpha, d);
        const double qa = std::pow(r_max, -(alpha + d)), qa2 = std::pow(r_max, -(2 * alpha + d));
        const double qb = std::pow(0.5 * r_max, -(alpha + d)),
                     qb2 = std::pow(0.5 * r_max, -(2 * alpha + d));
        const double det = qa * qb2 - qa2 * qb;
        const double c1 = (pa * qb2 - qa2 * pb) / det;
        const double c2 = (qa * pb - pa * qb) / det;
        const double tail = c1 * std::pow(r_max, -alpha) / alpha +
                            c2 * std::pow(r_max, -2.0 * alpha) / (2.0 * alpha);
        return unit_sphere_measure(d) * (head + body + tail);
    }
};

// Tail exponent of a sampled profile v(r) ~ c r^s (1 + b r^{-alpha} + ...):
// local log-log slopes carry a first correction proportional to r^{-alpha},
// so they are regressed against it and the intercept is returned. A plain
// log-log fit over a finite window is biased by the second asymptotic term,
// visibly so for alpha near 2.
inline double tail_exponent_fit(const std::vector<double>& radii, const std::vector<double>& values,
                                double alpha) {
    require(radii.size() == values.size() && radii.size() >= 3, "tail_exponent_fit: need >= 3 samples");
    const int m = static_cast<int>(radii.size()) - 1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        const double slope = (std::log(std::abs(values[i + 1])) - std::log(std::abs(values[i]))) /
                             (std::log(radii[i + 1]) - std::log(radii[i]));
        const double x = std::pow(std::sqrt(radii[i] * radii[i + 1]), -alpha);
        sx += x;
        sy += slope;
        sxx += x * x;
        sxy += x * slope;
    }
    const double kappa = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return (sy - kappa * sx) / m;  // extrapolated slope at r -> infinity
}

// Closed forms used as oracles.
inline double heat_kernel(double r, double t, int d) {
    return std::pow(4.0 * pi * t, -0.5 * d) * std::exp(-r * r / (4.0 * t));
}

inline double cauchy_kernel_2d(double r, double t) {
    // alpha = 1, d = 2: t / (2 pi (t^2 + r^2)^{3/2})
    return t / (2.0 * pi * std::pow(t * t + r * r, 1.5));
}

}  // namespace fracks

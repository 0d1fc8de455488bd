#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "fracks/common.hpp"
#include "fracks/weight.hpp"

namespace fracks {

namespace levy_detail {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
inline const std::array<double, 8>& gl16_nodes() {
    static const std::array<double, 8> x = {
        0.09501250983763744, 0.28160355077925891, 0.45801677765722739, 0.61787624440264375,
        0.75540440835500303, 0.86563120238783174, 0.94457502307323258, 0.98940093499164993};
    return x;
}
inline const std::array<double, 8>& gl16_weights() {
    static const std::array<double, 8> w = {
        0.18945061045506850, 0.18260341504492359, 0.16915651939500254, 0.14959598881657673,
        0.12462897125553387, 0.09515851168249278, 0.06225352393864789, 0.02715245941175409};
    return w;
}

template <class Fn>
double gl16(Fn&& fn, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * gl16_nodes()[i];
        s += gl16_weights()[i] * (fn(mid + dx) + fn(mid - dx));
    }
    return s * half;
}

struct Ray {
    Point dir;
    double weight;  // surface-measure weight
};

// Angular rules symmetric under omega -> -omega (needed so the odd gradient
// compensator cancels exactly and radial symmetry is preserved bitwise).
inline std::vector<Ray> angular_rule(int d, int level) {
    std::vector<Ray> rays;
    if (d == 1) {
        rays.push_back({{1, 0, 0}, 1.0});
        rays.push_back({{-1, 0, 0}, 1.0});
        return rays;
    }
    if (d == 2) {
        const int n = 16 << level;
        rays.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double th = 2.0 * pi * (i + 0.5) / n;
            rays.push_back({{std::cos(th), std::sin(th), 0}, 2.0 * pi / n});
        }
        return rays;
    }
    // d == 3: Gauss-Legendre in cos(theta) x uniform azimuth
    const int nu = 8 << level;
    const int nphi = 2 * nu;
    // compute GL nodes for nu points by Newton on Legendre polynomials
    std::vector<double> xs(nu), ws(nu);
    for (int i = 0; i < nu; ++i) {
        double x = std::cos(pi * (i + 0.75) / (nu + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= nu; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = nu * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= nu; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = nu * (x * p1 - p0) / (x * x - 1.0);
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    rays.reserve(static_cast<std::size_t>(nu * nphi));
    for (int i = 0; i < nu; ++i) {
        const double mu = xs[i], s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        for (int j = 0; j < nphi; ++j) {
            const double ph = 2.0 * pi * (j + 0.5) / nphi;
            rays.push_back({{s * std::cos(ph), s * std::sin(ph), mu}, ws[i] * 2.0 * pi / nphi});
        }
    }
    return rays;
}

}  // namespace levy_detail

struct LevyOptions {
    double rel_tol = 1e-9;      // angular refinement target
    double inner_frac = 1e-3;   // rho0 = inner_frac * (1 + |x|)
    int panels_per_decade = 6;  // log-spaced radial panels
    double tail_power = -1.0;   // >= 0: integrand f + tail_shift ~ r^{tail_power} far out
    double tail_shift = 0.0;
    double far_radius = 200.0;  // numeric radial range = far_radius * (1 + |x|)
    int max_angular_level = 4;
};

// Singular integral  I(x) = int [f(x+y) - f(x) - grad f(x).y] / |y|^{d+alpha} dy
// for smooth f with known gradient and Hessian trace at x.
//
// Inner ball |y| <= rho0: second-order Taylor in polar coordinates, integrated
// analytically (the angular average of the Hessian form is trace/d).
// Outer region: per ray, the -f(x) and -grad.y compensators integrate in
// closed form; the f(x+r w) part uses Gauss-Legendre panels, plus a three-term
// algebraic tail fit when f has power-law growth.
template <class Fn>
double levy_bracket(Fn&& f, const Point& x, const Point& grad_x, double trace_hess_x, int d,
                    double alpha, const LevyOptions& opt = {}) {
    require(alpha > 1.0 && alpha < 2.0, "levy_bracket: alpha must lie in (1, 2)");
    const double scale = 1.0 + norm(x, d);
    const double rho0 = opt.inner_frac * scale;
    const double r_end = opt.far_radius * scale;

    const double inner = unit_sphere_measure(d) / d * trace_hess_x *
                         std::pow(rho0, 2.0 - alpha) / (2.0 * (2.0 - alpha));
    const double comp_f = std::pow(rho0, -alpha) / alpha;          // times f(x), per ray
    const double comp_g = std::pow(rho0, 1.0 - alpha) / (alpha - 1.0);  // times grad.w, per ray

    const double fx = f(x);

    const int n_panels = static_cast<int>(std::ceil(std::log10(r_end / rho0) * opt.panels_per_decade));
    std::vector<double> edges(static_cast<std::size_t>(n_panels) + 1);
    const double lr0 = std::log(rho0), lr1 = std::log(r_end);
    for (int i = 0; i <= n_panels; ++i)
        edges[i] = std::exp(lr0 + (lr1 - lr0) * i / n_panels);

    auto ray_integral = [&](const Point& w) {
        auto integrand = [&](double r) {
            Point p = x;
            for (int j = 0; j < d; ++j) p[j] += r * w[j];
            return f(p) * std::pow(r, -1.0 - alpha);
        };
        double s = 0.0;
        for (int i = 0; i < n_panels; ++i) s += levy_detail::gl16(integrand, edges[i], edges[i + 1]);
        if (opt.tail_power >= 0.0) {
            // fit (f + shift)(x + r w) r^{-1-alpha} ~ sum A_k r^{p-k-1-alpha}
            const double p = opt.tail_power;
            const double rs[3] = {r_end, 0.5 * r_end, 0.25 * r_end};
            double m[3][3], rhs[3];
            for (int i = 0; i < 3; ++i) {
                Point q = x;
                for (int j = 0; j < d; ++j) q[j] += rs[i] * w[j];
                rhs[i] = (f(q) + opt.tail_shift) * std::pow(rs[i], -1.0 - alpha);
                for (int k = 0; k < 3; ++k) m[i][k] = std::pow(rs[i], p - k - 1.0 - alpha);
            }
            // 3x3 Gaussian elimination
            for (int c = 0; c < 3; ++c) {
                int piv = c;
                for (int r2 = c + 1; r2 < 3; ++r2)
                    if (std::abs(m[r2][c]) > std::abs(m[piv][c])) piv = r2;
                std::swap(m[c], m[piv]);
                std::swap(rhs[c], rhs[piv]);
                for (int r2 = c + 1; r2 < 3; ++r2) {
                    const double fac = m[r2][c] / m[c][c];
                    for (int k = c; k < 3; ++k) m[r2][k] -= fac * m[c][k];
                    rhs[r2] -= fac * rhs[c];
                }
            }
            double coef[3];
            for (int c = 2; c >= 0; --c) {
                double v = rhs[c];
                for (int k = c + 1; k < 3; ++k) v -= m[c][k] * coef[k];
                coef[c] = v / m[c][c];
            }
            double tail = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double expo = alpha - p + k;  // int_R^inf r^{p-k-1-alpha} dr = R^{-expo}/expo
                tail += coef[k] * std::pow(r_end, -expo) / expo;
            }
            // remove the shift's own tail: int_R^inf shift * r^{-1-alpha} dr
            tail -= opt.tail_shift * std::pow(r_end, -alpha) / alpha;
            s += tail;
        }
        return s - fx * comp_f - dot(grad_x, w, d) * comp_g;
    };

    double prev = 0.0;
    for (int level = 0;; ++level) {
        const auto rays = levy_detail::angular_rule(d, level);
        double total = 0.0;
        for (const auto& ray : rays) total += ray.weight * ray_integral(ray.dir);
        if (d == 1) return inner + total;  // the two-ray rule is exact in angle
        if (level > 0 && std::abs(total - prev) <= opt.rel_tol * std::abs(total))
            return inner + total;
        if (level >= opt.max_angular_level) return inner + total;
        prev = total;
    }
}

// Normalization constant C(d, alpha) in the singular-integral representation
// of (-Delta)^{alpha/2}, fixed by matching the Fourier multiplier on the
// reference Gaussian exp(-|x|^2/2) at the origin, where the multiplier value
// has the closed form 2^{alpha/2} Gamma((d+alpha)/2) / Gamma(d/2).
inline double levy_normalization(int d, double alpha) {
    require(d >= 1 && d <= 3, "levy_normalization: d must be 1..3");
    require(alpha > 1.0 && alpha < 2.0, "levy_normalization: alpha must lie in (1, 2)");
    static std::map<std::pair<int, double>, double> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find({d, alpha});
        if (it != cache.end()) return it->second;
    }
    auto gauss = [](const Point& p) {
        return std::exp(-0.5 * (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
    };
    LevyOptions opt;
    opt.far_radius = 40.0;  // e^{-r^2/2} is negligible far earlier
    const Point zero{0, 0, 0};
    const double bracket = levy_bracket(gauss, zero, zero, -static_cast<double>(d), d, alpha, opt);
    const double exact = std::pow(2.0, 0.5 * alpha) * std::tgamma(0.5 * (d + alpha)) /
                         std::tgamma(0.5 * d);
    const double c = exact / bracket;
    std::lock_guard<std::mutex> lock(mtx);
    cache[{d, alpha}] = c;
    return c;
}

// (-Delta)^{alpha/2} phi_gamma (x), via the singular-integral representation.
// Requires gamma < alpha < 2: the bound sup |(-Delta)^{alpha/2} phi| is lost at
// gamma >= alpha (the far field grows too fast against the kernel).
inline double frac_laplacian_weight(const Point& x, double alpha, double gamma, int d,
                                    const LevyOptions& user_opt = {}) {
    require(alpha > 1.0 && alpha < 2.0, "frac_laplacian_weight: alpha must lie in (1, 2)");
    require(gamma > 1.0 && gamma < alpha,
            "frac_laplacian_weight: gamma must lie in (1, alpha); the representation is "
            "unbounded for gamma >= alpha");
    const WeightFunction w(gamma);
    LevyOptions opt = user_opt;
    opt.tail_power = gamma;
    opt.tail_shift = 1.0;  // integrate (1+|z|^2)^{gamma/2} = phi + 1 in the tail fit
    auto f = [&](const Point& p) { return w.value(p, d); };
    const Point grad = w.gradient(x, d);
    double tr = 0.0;
    const auto h = w.hessian(x, d);
    for (int j = 0; j < d; ++j) tr += h[j][j];
    return levy_normalization(d, alpha) * levy_bracket(f, x, grad, tr, d, alpha, opt);
}

inline double frac_laplacian_weight_radial(double r, double alpha, double gamma, int d,
                                           const LevyOptions& opt = {}) {
    return frac_laplacian_weight({r, 0, 0}, alpha, gamma, d, opt);
}

struct SupNormResult {
    double value = 0.0;
    double argmax_radius = 0.0;
};

// C2 = sup_x |(-Delta)^{alpha/2} phi_gamma|, maximized over a radial search
// grid (dense near the origin, log-spaced far out). phi is radial, so the
// search is one-dimensional. `density` scales the number of probe radii.
inline SupNormResult weight_sup_norm(double alpha, double gamma, int d, int density = 1) {
    require(density >= 1, "weight_sup_norm: density must be >= 1");
    std::vector<double> radii;
    radii.push_back(0.0);
    const int n_lin = 48 * density, n_log = 32 * density;
    for (int i = 1; i <= n_lin; ++i) radii.push_back(3.0 * i / n_lin);
    for (int i = 1; i <= n_log; ++i)
        radii.push_back(3.0 * std::pow(1e3 / 3.0, static_cast<double>(i) / n_log));
    SupNormResult best;
    for (double r : radii) {
        const double v = std::abs(frac_laplacian_weight_radial(r, alpha, gamma, d));
        if (v > best.value) {
            best.value = v;
            best.argmax_radius = r;
        }
    }
    return best;
}

// Radial lookup table for (-Delta)^{alpha/2} phi_gamma, so the O(N^2) moment
// sums do not re-run the quadrature per node. Cubic interpolation in log r
// with a quadratic Taylor patch near 0 and the r^{gamma-alpha} asymptote
// beyond the table.
class WeightFlapTable {
  public:
    WeightFlapTable(int d, double alpha, double gamma, double r_max = 64.0, int points = 288)
        : d_(d), alpha_(alpha), gamma_(gamma), r_min_(1e-2), r_max_(r_max) {
        require(points >= 16, "WeightFlapTable: too few points");
        value0_ = frac_laplacian_weight_radial(0.0, alpha, gamma, d);
        log_r_.resize(static_cast<std::size_t>(points));
        val_.resize(static_cast<std::size_t>(points));
        const double l0 = std::log(r_min_), l1 = std::log(r_max_);
        for (int i = 0; i < points; ++i) {
            log_r_[i] = l0 + (l1 - l0) * i / (points - 1);
            val_[i] = frac_laplacian_weight_radial(std::exp(log_r_[i]), alpha, gamma, d_);
        }
        // asymptote coefficient from the last point
        asym_coef_ = val_.back() * std::pow(r_max_, alpha_ - gamma_);
    }

    double operator()(double r) const {
        if (r <= r_min_) {
            // quadratic in r between the exact value at 0 and the first node
            const double f1 = val_.front();
            return value0_ + (f1 - value0_) * (r * r) / (r_min_ * r_min_);
        }
        if (r >= r_max_) return asym_coef_ * std::pow(r, gamma_ - alpha_);
        const double lr = std::log(r);
        const double step = log_r_[1] - log_r_[0];
        const int i = std::min(static_cast<int>((lr - log_r_[0]) / step),
                               static_cast<int>(log_r_.size()) - 2);
        const double t = (lr - log_r_[i]) / step;
        // Catmull-Rom with clamped ends
        const double p0 = val_[std::max(i - 1, 0)];
        const double p1 = val_[i], p2 = val_[i + 1];
        const double p3 = val_[std::min<std::size_t>(i + 2, val_.size() - 1)];
        const double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
        const double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
        const double c = -0.5 * p0 + 0.5 * p2;
        return ((a * t + b) * t + c) * t + p1;
    }

    int dimension() const { return d_; }
    double alpha() const { return alpha_; }
    double gamma() const { return gamma_; }

  private:
    int d_;
    double alpha_, gamma_, r_min_, r_max_;
    double value0_ = 0.0, asym_coef_ = 0.0;
    std::vector<double> log_r_, val_;
};

}  // namespace fracks

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "fracks/grid.hpp"
#include "fracks/rng.hpp"
#include "fracks/spectral.hpp"

namespace fracks {

// Empirical certification of the semigroup decay estimates
//   ||S_a(t) u0||_p         <= C t^{-(d/a)(1/q - 1/p)}        ||u0||_q
//   ||grad S_a(t) u0||_p    <= C t^{-(d/a)(1/q - 1/p) - 1/a}  ||u0||_q
// over random concentrated fields and a logarithmic time ladder. The fits are
// meaningful in the window where the kernel width t^{1/a} sits between the
// bump width and the box size; the ladder is placed there.
struct SmoothingReport {
    double expected_exponent = 0.0;
    double fitted_exponent = 0.0;
    double best_constant = 0.0;  // smallest admissible C over the ladder
    double expected_gradient_exponent = 0.0;
    double fitted_gradient_exponent = 0.0;
    double best_gradient_constant = 0.0;
    bool exponent_within_10pct = false;
    bool gradient_exponent_within_10pct = false;
};

inline SmoothingReport smoothing_estimate_check(const Grid& g, double alpha, double p, double q,
                                                int trials, std::uint64_t seed = 7) {
    require(q >= 1.0 && p >= q, "smoothing_estimate_check: need 1 <= q <= p");
    require(trials >= 1, "smoothing_estimate_check: trials must be >= 1");
    SmoothingReport rep;
    const double theta = -(g.d / alpha) * (1.0 / q - 1.0 / p);
    rep.expected_exponent = theta;
    rep.expected_gradient_exponent = theta - 1.0 / alpha;

    Rng rng(seed);
    std::vector<Field> inits;
    std::vector<double> q_norms;
    for (int tr = 0; tr < trials; ++tr) {
        const Field u0 =
            random_bumps(g, rng, rng.uniform_int(1, 2), 0.5, 2.0, 2.0 * g.spacing, 4.0 * g.spacing);
        q_norms.push_back(lp_norm(u0, q));
        inits.push_back(u0);
    }

    const double t_lo = std::pow(8.0 * g.spacing, alpha);
    const double t_hi = std::pow(g.half_width / 6.0, alpha);
    require(t_hi > t_lo, "smoothing_estimate_check: grid too coarse for a scaling window");
    const int rungs = 10;

    std::vector<double> log_t, log_ratio, log_grad_ratio;
    for (int i = 0; i < rungs; ++i) {
        const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (rungs - 1));
        double ratio = 0.0, grad_ratio = 0.0;
        for (int tr = 0; tr < trials; ++tr) {
            const Field ut = semigroup_apply(inits[tr], alpha, t);
            ratio = std::max(ratio, lp_norm(ut, p) / q_norms[tr]);
            Field grad_mag(g);
            for (int axis = 0; axis < g.d; ++axis) {
                const Field dg = spectral_gradient(ut, axis);
                for (std::size_t k = 0; k < grad_mag.values.size(); ++k)
                    grad_mag.values[k] += dg.values[k] * dg.values[k];
            }
            for (double& v : grad_mag.values) v = std::sqrt(v);
            grad_ratio = std::max(grad_ratio, lp_norm(grad_mag, p) / q_norms[tr]);
        }
        log_t.push_back(std::log(t));
        log_ratio.push_back(std::log(ratio));
        log_grad_ratio.push_back(std::log(grad_ratio));
        rep.best_constant = std::max(rep.best_constant, ratio * std::pow(t, -theta));
        rep.best_gradient_constant =
            std::max(rep.best_gradient_constant, grad_ratio * std::pow(t, -theta + 1.0 / alpha));
    }

    auto slope = [&](const std::vector<double>& y) {
        const int m = static_cast<int>(log_t.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < m; ++i) {
            sx += log_t[i];
            sy += y[i];
            sxx += log_t[i] * log_t[i];
            sxy += log_t[i] * y[i];
        }
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };
    rep.fitted_exponent = slope(log_ratio);
    rep.fitted_gradient_exponent = slope(log_grad_ratio);

    auto within = [](double fitted, double expected) {
        if (expected == 0.0) return std::abs(fitted) < 0.02;
        return std::abs(fitted - expected) <= 0.10 * std::abs(expected);
    };
    rep.exponent_within_10pct = within(rep.fitted_exponent, rep.expected_exponent);
    rep.gradient_exponent_within_10pct =
        within(rep.fitted_gradient_exponent, rep.expected_gradient_exponent);
    return rep;
}

}  // namespace fracks

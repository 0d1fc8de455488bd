#pragma once

#include <cmath>
#include <vector>

#include "fracks/fft.hpp"
#include "fracks/grid.hpp"
#include "fracks/solver.hpp"
#include "fracks/spectral.hpp"

namespace fracks {

// Admissible Lebesgue exponent window for the fixed-point construction:
// max{ d/(alpha+beta-2), 2d/(d+beta-1) } < p <= d.
inline bool picard_p_admissible(int d, double alpha, double beta, double p) {
    const double lower = std::max(d / (alpha + beta - 2.0), 2.0 * d / (d + beta - 1.0));
    return p > lower && p <= d;
}

// Exponent of the local-time factor in the bilinear bound,
// 1 - 1/alpha - (d/alpha)(1/r - 1/p) with 1/r = 2/p - (beta-1)/d.
inline double picard_time_exponent(int d, double alpha, double beta, double p) {
    const double inv_r = 2.0 / p - (beta - 1.0) / d;
    return 1.0 - 1.0 / alpha - (d / alpha) * (inv_r - 1.0 / p);
}

struct PicardOptions {
    int time_nodes = 64;     // uniform tau grid on [0, T]
    int max_iter = 12;
    double p = 2.0;          // norm for the contraction diagnostics
    double rel_tol = 1e-12;  // stop once successive distances fall below this
};

struct PicardResult {
    std::vector<double> distances;  // sup-in-time L^p distance between successive iterates
    std::vector<double> ratios;     // distances[k+1] / distances[k]
    Field final_state;              // last iterate at t = T
    int iterations = 0;
    bool contracted = true;  // all observed ratios < 1
};

// Fixed-point iteration for the integral form of the evolution:
//   u^{k+1}(t) = S_a(t) u0 - int_0^t grad . S_a(t - tau) (u^k B u^k)(tau) dtau,
// discretized on a uniform tau grid with trapezoid weights. Exists as a
// validation of the mild construction at coarse resolution; production
// stepping uses the exponential integrator.
inline PicardResult picard_iterate(const SimParams& params, const Field& u0, double t_local,
                                   int max_iter, const PicardOptions& opt_in = {}) {
    params.check();
    PicardOptions opt = opt_in;
    opt.max_iter = max_iter;
    require(t_local > 0.0, "picard_iterate: t_local must be positive");
    require(picard_p_admissible(params.d, params.alpha, params.beta, opt.p),
            "picard_iterate: p outside the admissible window "
            "(max{d/(alpha+beta-2), 2d/(d+beta-1)}, d]");
    validate(u0);
    const Grid g = u0.grid;
    require(g == params.grid(), "picard_iterate: grid mismatch");

    const int m = opt.time_nodes;
    const double dtau = t_local / m;
    const SymbolTable symbols = SymbolTable::make(g, params.alpha, params.beta);
    const std::size_t nn = g.size();

    // semigroup multipliers for all node offsets
    std::vector<std::vector<double>> exp_table(static_cast<std::size_t>(m) + 1,
                                               std::vector<double>(nn));
    for (int j = 0; j <= m; ++j)
        for (std::size_t i = 0; i < nn; ++i)
            exp_table[j][i] = std::exp(-j * dtau * symbols.alpha_symbol[i]);

    const Spectrum u0_hat = fft_forward(u0);
    const std::complex<double> iu(0.0, 1.0);

    auto nonlinear_div = [&](const Spectrum& u_hat, const Field& u_real) {
        Spectrum n_hat(nn, {0.0, 0.0});
        int idx[3];
        for (int axis = 0; axis < g.d; ++axis) {
            Spectrum comp(nn);
            for (std::size_t i = 0; i < nn; ++i)
                comp[i] = u_hat[i] * (iu * symbols.beta_symbol[i][axis]);
            const Field b = fft_inverse(g, std::move(comp));
            Field flux(g);
            for (std::size_t i = 0; i < nn; ++i) flux.values[i] = u_real.values[i] * b.values[i];
            Spectrum flux_hat = fft_forward(flux);
            for (std::size_t i = 0; i < nn; ++i) {
                if (params.dealias && !symbols.dealias_mask[i]) continue;
                g.decode(i, idx);
                n_hat[i] -= iu * symbols.grad_symbol_axis[idx[axis]] * flux_hat[i];
            }
        }
        return n_hat;
    };

    // iterate 0: the free evolution S_a(t) u0
    std::vector<Spectrum> cur_hat(static_cast<std::size_t>(m) + 1);
    std::vector<Field> cur(static_cast<std::size_t>(m) + 1, Field(g));
    for (int j = 0; j <= m; ++j) {
        Spectrum s(nn);
        for (std::size_t i = 0; i < nn; ++i) s[i] = exp_table[j][i] * u0_hat[i];
        cur[j] = fft_inverse(g, Spectrum(s));
        cur_hat[j] = std::move(s);
    }

    PicardResult res;
    res.final_state = cur[m];
    double prev_dist = -1.0;
    const double scale = std::max(lp_norm(u0, opt.p), 1e-300);

    for (int k = 0; k < opt.max_iter; ++k) {
        // flux divergences of the current iterate at every node
        std::vector<Spectrum> n_hat(static_cast<std::size_t>(m) + 1);
        for (int j = 0; j <= m; ++j) n_hat[j] = nonlinear_div(cur_hat[j], cur[j]);

        std::vector<Spectrum> next_hat(static_cast<std::size_t>(m) + 1);
        std::vector<Field> next(static_cast<std::size_t>(m) + 1, Field(g));
        double dist = 0.0;
        for (int j = 0; j <= m; ++j) {
            Spectrum acc(nn, {0.0, 0.0});
            for (int l = 0; l <= j; ++l) {
                const double w = (l == 0 || l == j) ? 0.5 : 1.0;
                if (j == 0) break;
                const std::vector<double>& e = exp_table[j - l];
                for (std::size_t i = 0; i < nn; ++i) acc[i] += w * e[i] * n_hat[l][i];
            }
            Spectrum s(nn);
            for (std::size_t i = 0; i < nn; ++i)
                s[i] = exp_table[j][i] * u0_hat[i] + dtau * acc[i];
            next[j] = fft_inverse(g, Spectrum(s));
            next_hat[j] = std::move(s);

            Field diff(g);
            for (std::size_t i = 0; i < nn; ++i)
                diff.values[i] = next[j].values[i] - cur[j].values[i];
            dist = std::max(dist, lp_norm(diff, opt.p));
        }
        res.distances.push_back(dist);
        if (prev_dist > 0.0) {
            const double ratio = dist / prev_dist;
            res.ratios.push_back(ratio);
            if (ratio >= 1.0) res.contracted = false;  // reported, not fatal
        }
        prev_dist = dist;
        cur = std::move(next);
        cur_hat = std::move(next_hat);
        res.final_state = cur[m];
        ++res.iterations;
        if (dist <= opt.rel_tol * scale) break;
    }
    return res;
}

}  // namespace fracks

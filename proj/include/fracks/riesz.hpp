#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "fracks/grid.hpp"
#include "fracks/spectral.hpp"

namespace fracks {

// The interaction drift admits the convolution form
//   B(u)(x) = s_{d,beta} int (y - x) / |x - y|^{d - beta + 2} u(y) dy,
// equal to grad (-Delta)^{-beta/2} u for a positive constant s_{d,beta}.
// The constant is calibrated numerically: the unnormalized kernel sum and the
// spectral operator are both applied to a reference Gaussian, and s is the
// least-squares ratio between them. The residual after calibration doubles as
// the consistency certificate for the two representations.
struct RieszCalibration {
    double constant = 0.0;
    double max_rel_deviation = 0.0;  // max |B_spec - s K| / max |B_spec|
};

inline RieszCalibration calibrate_riesz_constant(int d, double beta) {
    require(d == 2 || d == 3, "riesz_constant: d must be 2 or 3");
    require(beta > 1.0 && beta <= d, "riesz_constant: beta must lie in (1, d]");

    const int n = d == 2 ? 128 : 64;
    const double half_width = d == 2 ? 4.0 : 6.0;
    const double sigma = d == 2 ? 0.3 : 1.1;
    const double eval_radius = d == 2 ? 1.0 : 1.8;
    const int stride = d == 2 ? 4 : 4;

    const Grid g = Grid::make(d, n, half_width);
    const Field u = gaussian_bump(g, 1.0, sigma);
    const auto b_spec = interaction(u, beta);

    // The spectral operator annihilates the mean (torus convention), which is
    // equivalent to a neutralizing background in real space; the kernel sum
    // must act on the mean-subtracted density to match it.
    const double mean = integrate(u) / std::pow(2.0 * g.half_width, d);

    // evaluation nodes: strided lattice inside |x| <= eval_radius
    std::vector<std::size_t> eval_nodes;
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.decode(i, idx);
        bool on_stride = true;
        double r2 = 0.0;
        for (int j = 0; j < d; ++j) {
            if (idx[j] % stride != 0) on_stride = false;
            const double x = g.coord(idx[j]);
            r2 += x * x;
        }
        if (on_stride && r2 <= eval_radius * eval_radius) eval_nodes.push_back(i);
    }

    const double exponent = 0.5 * (d - beta + 2.0);
    const double hv = g.cell_volume();
    double num = 0.0, den = 0.0;
    std::vector<std::array<double, 3>> kernel_sum(eval_nodes.size(), {0, 0, 0});
    for (std::size_t e = 0; e < eval_nodes.size(); ++e) {
        const Point x = g.node(eval_nodes[e]);
        std::array<double, 3> acc{0, 0, 0};
        for (std::size_t ysrc = 0; ysrc < g.size(); ++ysrc) {
            if (ysrc == eval_nodes[e]) continue;  // integrable singularity, cell dropped
            const Point y = g.node(ysrc);
            double dist2 = 0.0;
            for (int j = 0; j < d; ++j) dist2 += (x[j] - y[j]) * (x[j] - y[j]);
            const double k = (u.values[ysrc] - mean) * hv / std::pow(dist2, exponent);
            for (int j = 0; j < d; ++j) acc[j] += (y[j] - x[j]) * k;
        }
        kernel_sum[e] = acc;
        for (int j = 0; j < d; ++j) {
            num += b_spec[j].values[eval_nodes[e]] * acc[j];
            den += acc[j] * acc[j];
        }
    }
    RieszCalibration cal;
    cal.constant = num / den;

    double scale = 0.0;
    for (int j = 0; j < d; ++j) scale = std::max(scale, linf_norm(b_spec[j]));
    for (std::size_t e = 0; e < eval_nodes.size(); ++e)
        for (int j = 0; j < d; ++j)
            cal.max_rel_deviation =
                std::max(cal.max_rel_deviation,
                         std::abs(b_spec[j].values[eval_nodes[e]] - cal.constant * kernel_sum[e][j]) /
                             scale);
    return cal;
}

inline double riesz_constant(int d, double beta) {
    static std::map<std::pair<int, double>, double> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find({d, beta});
        if (it != cache.end()) return it->second;
    }
    const double s = calibrate_riesz_constant(d, beta).constant;
    std::lock_guard<std::mutex> lock(mtx);
    cache[{d, beta}] = s;
    return s;
}

}  // namespace fracks

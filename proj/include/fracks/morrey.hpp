#pragma once

#include <cmath>
#include <vector>

#include "fracks/fft.hpp"
#include "fracks/grid.hpp"

namespace fracks {

// Radius ladder for the Morrey sup: logarithmic between h and L.
inline std::vector<double> morrey_radius_ladder(const Grid& g, int rungs = 24) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(rungs));
    const double lo = g.spacing, hi = g.half_width;
    for (int i = 0; i < rungs; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (rungs - 1)));
    return out;
}

// Mass of |f| in the ball of radius R around every node at once: circular
// convolution with the ball indicator (minimum-image distance), done
// spectrally. Returns h^d * (|f| conv 1_R) per node.
inline std::vector<double> ball_masses(const Field& f, double radius) {
    const Grid& g = f.grid;
    Field absf(g);
    for (std::size_t i = 0; i < f.values.size(); ++i) absf.values[i] = std::abs(f.values[i]);
    Field ball(g);
    const double r2 = radius * radius;
    int idx[3];
    for (std::size_t i = 0; i < ball.values.size(); ++i) {
        g.decode(i, idx);
        double dist2 = 0.0;
        for (int j = 0; j < g.d; ++j) {
            // minimum-image offset of node i from the origin
            double dx = g.coord(idx[j]);
            dx = std::abs(dx);
            dx = std::min(dx, 2.0 * g.half_width - dx);
            dist2 += dx * dx;
        }
        ball.values[i] = dist2 <= r2 ? 1.0 : 0.0;
    }
    Spectrum fa = fft_forward(absf);
    const Spectrum fb = fft_forward(ball);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
    const Field conv = fft_inverse(g, std::move(fa));
    std::vector<double> out(conv.values.size());
    const double hv = g.cell_volume();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = hv * std::max(conv.values[i], 0.0);
    return out;
}

// sup over the radius ladder and grid centers of R^{d(1/p-1)} * ball mass.
// A finite ladder only explores part of the continuum sup, so the reported
// value is a certified lower bound of the true norm. `stride` subsamples the
// centers (1 = every node).
inline double morrey_norm(const Field& f, double p, int stride = 1, int rungs = 24) {
    validate(f);
    require(p > 1.0 && std::isfinite(p), "morrey_norm: p must lie in (1, inf)");
    require(stride >= 1, "morrey_norm: stride must be >= 1");
    const Grid& g = f.grid;
    double best = 0.0;
    int idx[3];
    for (double radius : morrey_radius_ladder(g, rungs)) {
        const std::vector<double> masses = ball_masses(f, radius);
        const double scale = std::pow(radius, g.d * (1.0 / p - 1.0));
        for (std::size_t i = 0; i < masses.size(); ++i) {
            if (stride > 1) {
                g.decode(i, idx);
                bool keep = true;
                for (int j = 0; j < g.d; ++j)
                    if (idx[j] % stride != 0) keep = false;
                if (!keep) continue;
            }
            best = std::max(best, scale * masses[i]);
        }
    }
    return best;
}

}  // namespace fracks

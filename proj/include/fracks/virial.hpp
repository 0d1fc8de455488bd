#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "fracks/grid.hpp"
#include "fracks/levy.hpp"
#include "fracks/riesz.hpp"
#include "fracks/weight.hpp"

namespace fracks {

struct VirialParams {
    int d = 2;
    double alpha = 2.0;
    double beta = 2.0;
    double gamma = 1.5;
};

namespace virial_detail {

inline const WeightFlapTable& flap_table(int d, double alpha, double gamma) {
    static std::map<std::tuple<int, double, double>, std::unique_ptr<WeightFlapTable>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[{d, alpha, gamma}];
    if (!slot) slot = std::make_unique<WeightFlapTable>(d, alpha, gamma);
    return *slot;
}

}  // namespace virial_detail

// Right-hand side of the moment evolution identity
//   dw/dt = - int (-Delta)^{alpha/2} phi u dx
//           - (s/2) int int (grad phi(x) - grad phi(y)).(x-y)
//                          u(x) u(y) / |x-y|^{d-beta+2} dx dy,
// evaluated by direct quadrature. The diagonal x = y of the double sum is
// dropped: the convexity factor is O(|x-y|^2), so the integrand extends
// continuously there and the omitted cell contributes O(h^beta).
//
// The pairwise sum is O(N^2); grids above 2^14 nodes are refused.
inline double moment_rhs(const Field& u, const VirialParams& vp) {
    validate(u);
    const Grid& g = u.grid;
    require(g.d == vp.d, "moment_rhs: params dimension mismatch");
    require(g.size() <= (1u << 14), "moment_rhs: grid too large for the O(N^2) sum");
    require(vp.beta > 1.0 && vp.beta <= vp.d, "moment_rhs: beta must lie in (1, d]");
    if (vp.alpha < 2.0)
        require(vp.gamma < vp.alpha, "moment_rhs: gamma must be below alpha when alpha < 2");
    require(vp.gamma > 1.0 && vp.gamma <= 2.0, "moment_rhs: gamma must lie in (1, 2]");

    const WeightFunction w(vp.gamma);
    const double hv = g.cell_volume();
    const std::size_t nn = g.size();

    // diffusion term: -sum (-Delta)^{alpha/2} phi(x) u(x) h^d
    double diffusion = 0.0;
    if (vp.alpha == 2.0) {
        for (std::size_t i = 0; i < nn; ++i)
            diffusion += w.laplacian(g.node(i), g.d) * u.values[i];
        diffusion *= hv;
    } else {
        const WeightFlapTable& table = virial_detail::flap_table(vp.d, vp.alpha, vp.gamma);
        for (std::size_t i = 0; i < nn; ++i)
            diffusion -= table(norm(g.node(i), g.d)) * u.values[i];
        diffusion *= hv;
    }

    // pairwise interaction sink, parallel by row with symmetry
    std::vector<Point> pos(nn), grad(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        pos[i] = g.node(i);
        grad[i] = w.gradient(pos[i], g.d);
    }
    const double exponent = 0.5 * (vp.d - vp.beta + 2.0);
    const bool inverse_dist2 = std::abs(exponent - 1.0) < 1e-14;
    const int d = g.d;
    const double* uv = u.values.data();
    const double pair_sum = parallel_sum(nn, [&](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            if (uv[i] == 0.0) continue;
            double row = 0.0;
            for (std::size_t j = i + 1; j < nn; ++j) {
                double dist2 = 0.0, conv = 0.0;
                for (int k = 0; k < d; ++k) {
                    const double dx = pos[i][k] - pos[j][k];
                    dist2 += dx * dx;
                    conv += (grad[i][k] - grad[j][k]) * dx;
                }
                const double kernel =
                    inverse_dist2 ? 1.0 / dist2 : std::pow(dist2, -exponent);
                row += conv * kernel * uv[j];
            }
            acc += row * uv[i];
        }
        return 2.0 * acc;  // the (i, j) and (j, i) contributions coincide
    });
    const double s = riesz_constant(vp.d, vp.beta);
    return diffusion - 0.5 * s * pair_sum * hv * hv;
}

// Exponent system of the Holder step in the moment estimate:
//   nu p = d - beta,  delta p = 1,  nu p' + (2 - gamma) delta p' = gamma,
// solved in closed form by p = (d - beta + 2) / gamma.
struct HolderExponents {
    double nu = 0.0;
    double delta = 0.0;
    double p = 0.0;
    double p_prime = 0.0;
};

inline HolderExponents holder_exponents(int d, double beta, double gamma) {
    require(beta > 1.0 && beta <= d, "holder_exponents: beta must lie in (1, d]");
    require(gamma > 1.0 && gamma < 2.0, "holder_exponents: gamma must lie in (1, 2)");
    HolderExponents e;
    e.p = (d - beta + 2.0) / gamma;
    require(e.p > 1.0, "holder_exponents: gamma must be below d - beta + 2");
    e.p_prime = e.p / (e.p - 1.0);
    e.nu = (d - beta) / e.p;
    e.delta = 1.0 / e.p;
    // the three defining relations, re-checked to guard the algebra
    require(std::abs(e.nu * e.p - (d - beta)) < 1e-12, "holder_exponents: relation 1 failed");
    require(std::abs(e.delta * e.p - 1.0) < 1e-12, "holder_exponents: relation 2 failed");
    require(std::abs(e.nu * e.p_prime + (2.0 - gamma) * e.delta * e.p_prime - gamma) < 1e-12,
            "holder_exponents: relation 3 failed");
    return e;
}

}  // namespace fracks

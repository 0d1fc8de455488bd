#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "fracks/fft.hpp"
#include "fracks/grid.hpp"

namespace fracks {

namespace detail {

// Per-axis signed modes with the Nyquist entry zeroed. Odd symbols (plain and
// Riesz gradients) must vanish there or the inverse transform turns complex.
inline std::vector<double> axis_wavenumbers(const Grid& g, bool zero_nyquist) {
    std::vector<double> k(static_cast<std::size_t>(g.n));
    for (int m = 0; m < g.n; ++m) {
        if (zero_nyquist && m == g.n / 2) {
            k[m] = 0.0;
            continue;
        }
        k[m] = g.wavenumber(m);
    }
    return k;
}

template <class Fn>
inline void for_each_mode(const Grid& g, Fn&& fn) {
    const std::size_t nn = g.size();
    int idx[3];
    for (std::size_t i = 0; i < nn; ++i) {
        g.decode(i, idx);
        fn(i, idx);
    }
}

}  // namespace detail

// Fourier multipliers for one (grid, alpha, beta) triple.
//
// alpha_symbol  |k|^alpha, zero exactly at k = 0.
// beta_symbol   k_j |k|^{-beta} per axis, with the k = 0 mode set to zero:
//               on the torus the Riesz potential of the mean is not defined,
//               so the mean is annihilated. The omission only shifts the
//               potential by a constant, whose gradient vanishes, so the drift
//               of a contained bump is unaffected.
// dealias_mask  2/3-rule mask (true = keep).
struct SymbolTable {
    Grid grid;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> alpha_symbol;
    std::vector<std::array<double, 3>> beta_symbol;
    std::vector<double> grad_symbol_axis;  // per-axis k with Nyquist zeroed, length n
    std::vector<unsigned char> dealias_mask;

    static SymbolTable make(const Grid& g, double alpha, double beta) {
        require(alpha > 0.0 && alpha <= 2.0, "SymbolTable: alpha must lie in (0, 2]");
        require(beta > 1.0 && beta <= g.d, "SymbolTable: beta must lie in (1, d]");
        SymbolTable t;
        t.grid = g;
        t.alpha = alpha;
        t.beta = beta;
        const std::size_t nn = g.size();
        t.alpha_symbol.resize(nn);
        t.beta_symbol.resize(nn, {0.0, 0.0, 0.0});
        t.dealias_mask.resize(nn, 1);
        t.grad_symbol_axis = detail::axis_wavenumbers(g, true);
        const auto k_full = detail::axis_wavenumbers(g, false);
        const int keep = g.n / 3;  // keep |mode| <= n/3
        detail::for_each_mode(g, [&](std::size_t i, const int idx[3]) {
            double k2 = 0.0;
            bool keep_mode = true;
            for (int j = 0; j < g.d; ++j) {
                const double kj = k_full[idx[j]];
                k2 += kj * kj;
                if (std::abs(g.signed_mode(idx[j])) > keep) keep_mode = false;
            }
            t.dealias_mask[i] = keep_mode ? 1 : 0;
            t.alpha_symbol[i] = k2 == 0.0 ? 0.0 : std::pow(k2, 0.5 * alpha);
            if (k2 != 0.0) {
                const double riesz = std::pow(k2, -0.5 * beta);
                for (int j = 0; j < g.d; ++j)
                    t.beta_symbol[i][j] = t.grad_symbol_axis[idx[j]] * riesz;
            }
        });
        return t;
    }
};

// (-Delta)^{alpha/2} f via the |k|^alpha multiplier.
inline Field fractional_laplacian(const Field& f, double alpha) {
    validate(f);
    require(alpha > 0.0 && alpha <= 2.0, "fractional_laplacian: alpha must lie in (0, 2]");
    const Grid& g = f.grid;
    Spectrum spec = fft_forward(f);
    const auto k = detail::axis_wavenumbers(g, false);
    detail::for_each_mode(g, [&](std::size_t i, const int idx[3]) {
        double k2 = 0.0;
        for (int j = 0; j < g.d; ++j) k2 += k[idx[j]] * k[idx[j]];
        spec[i] *= k2 == 0.0 ? 0.0 : std::pow(k2, 0.5 * alpha);
    });
    return fft_inverse(g, std::move(spec), 1e-10);
}

// S_alpha(t) f: multiply by exp(-t |k|^alpha). Mass-preserving (symbol is 1 at
// k = 0); t = 0 returns the input unchanged.
inline Field semigroup_apply(const Field& f, double alpha, double t) {
    validate(f);
    require(alpha > 0.0 && alpha <= 2.0, "semigroup_apply: alpha must lie in (0, 2]");
    require(t >= 0.0, "semigroup_apply: t must be >= 0");
    if (t == 0.0) return f;
    const Grid& g = f.grid;
    Spectrum spec = fft_forward(f);
    const auto k = detail::axis_wavenumbers(g, false);
    detail::for_each_mode(g, [&](std::size_t i, const int idx[3]) {
        double k2 = 0.0;
        for (int j = 0; j < g.d; ++j) k2 += k[idx[j]] * k[idx[j]];
        if (k2 != 0.0) spec[i] *= std::exp(-t * std::pow(k2, 0.5 * alpha));
    });
    return fft_inverse(g, std::move(spec), 1e-10);
}

// Spectral gradient component: inverse transform of i k_j f_hat.
inline Field spectral_gradient(const Field& f, int axis) {
    validate(f);
    require(axis >= 0 && axis < f.grid.d, "spectral_gradient: bad axis");
    const Grid& g = f.grid;
    Spectrum spec = fft_forward(f);
    const auto k = detail::axis_wavenumbers(g, true);
    const std::complex<double> iu(0.0, 1.0);
    detail::for_each_mode(g, [&](std::size_t i, const int idx[3]) {
        spec[i] *= iu * k[idx[axis]];
    });
    return fft_inverse(g, std::move(spec), 1e-10);
}

// Interaction drift B(f) = grad (-Delta)^{-beta/2} f, component j the inverse
// transform of i k_j |k|^{-beta} f_hat with the zero mode annihilated.
inline std::vector<Field> interaction(const Field& f, double beta) {
    validate(f);
    const Grid& g = f.grid;
    require(beta > 1.0 && beta <= g.d, "interaction: beta must lie in (1, d]");
    const Spectrum spec = fft_forward(f);
    const auto k_full = detail::axis_wavenumbers(g, false);
    const auto k_grad = detail::axis_wavenumbers(g, true);
    const std::complex<double> iu(0.0, 1.0);
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(g.d));
    for (int axis = 0; axis < g.d; ++axis) {
        Spectrum comp(spec.size());
        detail::for_each_mode(g, [&](std::size_t i, const int idx[3]) {
            double k2 = 0.0;
            for (int j = 0; j < g.d; ++j) k2 += k_full[idx[j]] * k_full[idx[j]];
            comp[i] = k2 == 0.0 ? 0.0
                                : spec[i] * (iu * k_grad[idx[axis]] * std::pow(k2, -0.5 * beta));
        });
        out.push_back(fft_inverse(g, std::move(comp), 1e-10));
    }
    return out;
}

}  // namespace fracks

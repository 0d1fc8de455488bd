#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "fracks/common.hpp"
#include "fracks/rng.hpp"

namespace fracks {

// Uniform periodic grid on the box [-L, L)^d with n nodes per axis.
// Node i along an axis sits at x = -L + i*h, h = 2L/n; every node carries the
// quadrature weight h^d (periodic trapezoid rule).
struct Grid {
    int d = 0;
    int n = 0;
    double half_width = 0.0;
    double spacing = 0.0;

    static Grid make(int d, int n, double half_width) {
        require(d >= 1 && d <= 3, "Grid: dimension must be 1, 2, or 3");
        require(n >= 8 && (n & (n - 1)) == 0, "Grid: n must be a power of two >= 8");
        require(half_width > 0.0 && std::isfinite(half_width),
                "Grid: half_width must be positive and finite");
        Grid g;
        g.d = d;
        g.n = n;
        g.half_width = half_width;
        g.spacing = 2.0 * half_width / n;
        return g;
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int j = 0; j < d; ++j) s *= static_cast<std::size_t>(n);
        return s;
    }

    double cell_volume() const { return std::pow(spacing, d); }

    double coord(int i) const { return -half_width + i * spacing; }

    // Integer frequency in {-n/2, ..., n/2-1}; index n/2 maps to -n/2.
    int signed_mode(int m) const { return m < n / 2 ? m : m - n; }

    // Wavenumber pi/L * mode.
    double wavenumber(int m) const { return pi / half_width * signed_mode(m); }

    // Decode a flat row-major index into per-axis indices.
    void decode(std::size_t flat, int idx[3]) const {
        idx[1] = idx[2] = 0;
        for (int j = d - 1; j >= 0; --j) {
            idx[j] = static_cast<int>(flat % static_cast<std::size_t>(n));
            flat /= static_cast<std::size_t>(n);
        }
    }

    Point node(std::size_t flat) const {
        int idx[3];
        decode(flat, idx);
        Point p{0.0, 0.0, 0.0};
        for (int j = 0; j < d; ++j) p[j] = coord(idx[j]);
        return p;
    }

    bool operator==(const Grid& o) const {
        return d == o.d && n == o.n && half_width == o.half_width;
    }
};

// Scalar density sampled on a Grid, row-major over axes.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(g.size(), 0.0) {}
    Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        require(values.size() == g.size(), "Field: value count != n^d");
    }

    template <class Fn>
    static Field from_function(const Grid& g, Fn&& fn) {
        Field f(g);
        const std::size_t nn = g.size();
        for (std::size_t i = 0; i < nn; ++i) f.values[i] = fn(g.node(i));
        return f;
    }
};

inline bool all_finite(const Field& f) {
    for (double v : f.values)
        if (!std::isfinite(v)) return false;
    return true;
}

inline void validate(const Field& f) {
    require(f.values.size() == f.grid.size(), "Field: size mismatch with grid");
    require(all_finite(f), "Field: non-finite values");
}

// Discrete integral h^d * sum(values).
inline double integrate(const Field& f) {
    validate(f);
    const double* v = f.values.data();
    const double s = parallel_sum(f.values.size(), [v](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += v[i];
        return acc;
    });
    return f.grid.cell_volume() * s;
}

// Moment of order gamma about `center`: h^d * sum |x - center|^gamma f(x).
// Distances are plain Euclidean (no periodic wrap); meaningful for fields
// supported well inside the box.
inline double weighted_moment(const Field& f, double gamma, const Point& center = {0, 0, 0}) {
    validate(f);
    require(gamma > 0.0 && gamma <= 2.0, "weighted_moment: gamma must lie in (0, 2]");
    for (int j = 0; j < f.grid.d; ++j)
        require(center[j] >= -f.grid.half_width && center[j] < f.grid.half_width,
                "weighted_moment: center outside the box");
    const Grid& g = f.grid;
    const double* v = f.values.data();
    const double s = parallel_sum(f.values.size(), [&](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        int idx[3];
        for (std::size_t i = lo; i < hi; ++i) {
            g.decode(i, idx);
            double r2 = 0.0;
            for (int j = 0; j < g.d; ++j) {
                const double dx = g.coord(idx[j]) - center[j];
                r2 += dx * dx;
            }
            acc += std::pow(r2, 0.5 * gamma) * v[i];
        }
        return acc;
    });
    return g.cell_volume() * s;
}

// (h^d sum |f|^p)^{1/p}; p = infinity gives max |f|.
inline double lp_norm(const Field& f, double p) {
    validate(f);
    require(p >= 1.0, "lp_norm: p must be >= 1");
    const double* v = f.values.data();
    const std::size_t nn = f.values.size();
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < nn; ++i) m = std::max(m, std::abs(v[i]));
        return m;
    }
    const double s = parallel_sum(nn, [v, p](std::size_t lo, std::size_t hi) {
        double acc = 0.0;
        if (p == 1.0) {
            for (std::size_t i = lo; i < hi; ++i) acc += std::abs(v[i]);
        } else if (p == 2.0) {
            for (std::size_t i = lo; i < hi; ++i) acc += v[i] * v[i];
        } else {
            for (std::size_t i = lo; i < hi; ++i) acc += std::pow(std::abs(v[i]), p);
        }
        return acc;
    });
    return std::pow(f.grid.cell_volume() * s, 1.0 / p);
}

inline double linf_norm(const Field& f) { return lp_norm(f, std::numeric_limits<double>::infinity()); }

inline double min_value(const Field& f) {
    validate(f);
    double m = std::numeric_limits<double>::infinity();
    for (double v : f.values) m = std::min(m, v);
    return m;
}

inline Point center_of_mass(const Field& f) {
    validate(f);
    const Grid& g = f.grid;
    double mass = 0.0;
    Point c{0.0, 0.0, 0.0};
    int idx[3];
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        g.decode(i, idx);
        mass += f.values[i];
        for (int j = 0; j < g.d; ++j) c[j] += f.values[i] * g.coord(idx[j]);
    }
    if (mass != 0.0)
        for (int j = 0; j < g.d; ++j) c[j] /= mass;
    return c;
}

// Largest |x - center| over nodes where |f| exceeds `rel_cut` * max|f|,
// divided by L. Experiments keep this ratio <= 1/4 so the periodic wrap is
// negligible for moment and convolution diagnostics.
inline double support_ratio(const Field& f, const Point& center = {0, 0, 0},
                            double rel_cut = 1e-8) {
    validate(f);
    const Grid& g = f.grid;
    const double cut = rel_cut * linf_norm(f);
    double rmax = 0.0;
    int idx[3];
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        if (std::abs(f.values[i]) <= cut) continue;
        g.decode(i, idx);
        double r2 = 0.0;
        for (int j = 0; j < g.d; ++j) {
            const double dx = g.coord(idx[j]) - center[j];
            r2 += dx * dx;
        }
        rmax = std::max(rmax, r2);
    }
    return std::sqrt(rmax) / g.half_width;
}

// Keep every `factor`-th sample per axis. Exact for fields band-limited to the
// coarse grid; used to shrink snapshots before O(N^2) diagnostics.
inline Field downsample(const Field& f, int factor) {
    require(factor >= 1 && (factor & (factor - 1)) == 0, "downsample: factor must be a power of two");
    const Grid& g = f.grid;
    require(g.n / factor >= 8, "downsample: resulting grid too coarse");
    Grid cg = Grid::make(g.d, g.n / factor, g.half_width);
    Field out(cg);
    int idx[3];
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        cg.decode(i, idx);
        std::size_t src = 0;
        for (int j = 0; j < g.d; ++j)
            src = src * static_cast<std::size_t>(g.n) + static_cast<std::size_t>(idx[j] * factor);
        out.values[i] = f.values[src];
    }
    return out;
}

// --- initial-condition recipes ------------------------------------------------

// Gaussian bump exp(-|x-c|^2 / (2 width^2)) scaled so the discrete mass is
// exactly `mass`.
inline Field gaussian_bump(const Grid& g, double mass, double width, const Point& center = {0, 0, 0}) {
    require(width > 0.0, "gaussian_bump: width must be positive");
    Field f = Field::from_function(g, [&](const Point& x) {
        double r2 = 0.0;
        for (int j = 0; j < g.d; ++j) {
            const double dx = x[j] - center[j];
            r2 += dx * dx;
        }
        return std::exp(-0.5 * r2 / (width * width));
    });
    const double m0 = integrate(f);
    require(m0 > 0.0, "gaussian_bump: degenerate profile");
    for (double& v : f.values) v *= mass / m0;
    return f;
}

// Annular profile exp(-(|x-c| - radius)^2 / (2 width^2)), normalized to `mass`.
inline Field ring_bump(const Grid& g, double mass, double radius, double width,
                       const Point& center = {0, 0, 0}) {
    require(width > 0.0 && radius >= 0.0, "ring_bump: bad geometry");
    Field f = Field::from_function(g, [&](const Point& x) {
        double r2 = 0.0;
        for (int j = 0; j < g.d; ++j) {
            const double dx = x[j] - center[j];
            r2 += dx * dx;
        }
        const double dr = std::sqrt(r2) - radius;
        return std::exp(-0.5 * dr * dr / (width * width));
    });
    const double m0 = integrate(f);
    require(m0 > 0.0, "ring_bump: degenerate profile");
    for (double& v : f.values) v *= mass / m0;
    return f;
}

inline Field two_bump(const Grid& g, double mass, double width, const Point& c1, const Point& c2) {
    Field a = gaussian_bump(g, 0.5 * mass, width, c1);
    Field b = gaussian_bump(g, 0.5 * mass, width, c2);
    for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
    return a;
}

// Smooth nonnegative random field: a few Gaussian bumps with randomized
// centers, widths, and amplitudes, all supported in the inner half of the box.
inline Field random_bumps(const Grid& g, Rng& rng, int n_bumps, double mass_lo, double mass_hi,
                          double width_lo, double width_hi) {
    Field f(g);
    for (int b = 0; b < n_bumps; ++b) {
        Point c{0, 0, 0};
        for (int j = 0; j < g.d; ++j) c[j] = rng.uniform(-0.25, 0.25) * g.half_width;
        const double width = rng.uniform(width_lo, width_hi);
        const double mass = rng.uniform(mass_lo, mass_hi);
        Field bump = gaussian_bump(g, mass, width, c);
        for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] += bump.values[i];
    }
    return f;
}

}  // namespace fracks

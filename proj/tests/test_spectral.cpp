#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracks/grid.hpp"
#include "fracks/rng.hpp"
#include "fracks/spectral.hpp"

using namespace fracks;

namespace {

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

}  // namespace

TEST_CASE("fractional_laplacian: Fourier eigenfunction") {
    const Grid g = Grid::make(1, 128, pi);  // wavenumbers are integers
    const double k = 3.0;
    const Field f = Field::from_function(g, [&](const Point& x) { return std::sin(k * x[0]); });
    for (double alpha : {1.2, 1.5, 2.0}) {
        const Field lf = fractional_laplacian(f, alpha);
        const double fac = std::pow(k, alpha);
        double err = 0.0;
        for (std::size_t i = 0; i < lf.values.size(); ++i)
            err = std::max(err, std::abs(lf.values[i] - fac * f.values[i]));
        CHECK(err < 1e-10 * fac);
    }
    CHECK_THROWS(fractional_laplacian(f, 0.0));
    CHECK_THROWS(fractional_laplacian(f, 2.5));
}

TEST_CASE("fractional_laplacian: alpha=2 equals the spectral Laplacian") {
    // Band-limited field (modes well below Nyquist) so the first-derivative
    // convention of zeroing the Nyquist plane cannot enter the comparison.
    const Grid g = Grid::make(2, 32, 2.0);
    const double k1 = pi / g.half_width, k2 = 3.0 * k1;
    const Field f = Field::from_function(g, [&](const Point& x) {
        return std::sin(k1 * x[0]) * std::cos(k2 * x[1]) + 0.5 * std::cos(k1 * x[1]);
    });
    const Field a = fractional_laplacian(f, 2.0);
    // -Delta via two spectral derivatives per axis
    Field b(g);
    for (int axis = 0; axis < 2; ++axis) {
        const Field d2 = spectral_gradient(spectral_gradient(f, axis), axis);
        for (std::size_t i = 0; i < b.values.size(); ++i) b.values[i] -= d2.values[i];
    }
    CHECK(max_abs_diff(a, b) < 1e-10 * linf_norm(a));
}

TEST_CASE("fractional_laplacian annihilates constants") {
    const Grid g = Grid::make(2, 32, 1.0);
    Field f(g);
    for (double& v : f.values) v = 4.2;
    CHECK(linf_norm(fractional_laplacian(f, 1.5)) < 1e-12);
}

TEST_CASE("semigroup_apply: identity at t=0 and mass preservation") {
    Rng rng(5);
    const Grid g = Grid::make(2, 64, 4.0);
    const Field f = random_bumps(g, rng, 3, 0.5, 1.5, 0.3, 0.8);
    const Field same = semigroup_apply(f, 1.5, 0.0);
    CHECK(max_abs_diff(f, same) == 0.0);

    const double m0 = integrate(f);
    for (double t : {0.01, 0.3, 2.0}) {
        const double m = integrate(semigroup_apply(f, 1.5, t));
        CHECK(m == Catch::Approx(m0).epsilon(1e-12));
    }
    CHECK_THROWS(semigroup_apply(f, 1.5, -0.1));
}

TEST_CASE("semigroup_apply: alpha=2 spreads a Gaussian exactly") {
    const Grid g = Grid::make(2, 128, 6.0);
    const double s0 = 0.4, t = 0.15;
    const double s1 = std::sqrt(s0 * s0 + 2.0 * t);  // heat kernel variance growth
    const Field f0 = Field::from_function(g, [&](const Point& x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        return std::exp(-0.5 * r2 / (s0 * s0)) / (2.0 * pi * s0 * s0);
    });
    const Field expect = Field::from_function(g, [&](const Point& x) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        return std::exp(-0.5 * r2 / (s1 * s1)) / (2.0 * pi * s1 * s1);
    });
    const Field got = semigroup_apply(f0, 2.0, t);
    CHECK(max_abs_diff(got, expect) < 1e-10 * linf_norm(expect));
}

TEST_CASE("semigroup property S(s+t) = S(t) S(s)") {
    Rng rng(17);
    const Grid g = Grid::make(2, 32, 3.0);
    for (int trial = 0; trial < 5; ++trial) {
        const Field f = random_bumps(g, rng, 2, 0.2, 1.0, 0.3, 0.7);
        const double alpha = rng.uniform(1.1, 2.0);
        const double s = rng.uniform(0.01, 0.5), t = rng.uniform(0.01, 0.5);
        const Field once = semigroup_apply(f, alpha, s + t);
        const Field twice = semigroup_apply(semigroup_apply(f, alpha, s), alpha, t);
        CHECK(max_abs_diff(once, twice) < 1e-10 * std::max(linf_norm(once), 1e-30));
    }
}

TEST_CASE("interaction: constants map to the zero drift") {
    const Grid g = Grid::make(2, 32, 1.0);
    Field f(g);
    for (double& v : f.values) v = 2.5;
    for (const Field& comp : interaction(f, 2.0)) CHECK(linf_norm(comp) < 1e-13);
}

TEST_CASE("interaction: plane-wave eigenfunction") {
    const Grid g = Grid::make(2, 64, pi);
    const double k1 = 2.0, beta = 1.6;
    const Field f = Field::from_function(g, [&](const Point& x) { return std::sin(k1 * x[0]); });
    const auto b = interaction(f, beta);
    const double fac = std::pow(k1, -beta) * k1;
    const Field expect0 =
        Field::from_function(g, [&](const Point& x) { return fac * std::cos(k1 * x[0]); });
    CHECK(max_abs_diff(b[0], expect0) < 1e-11);
    CHECK(linf_norm(b[1]) < 1e-12);
    CHECK_THROWS(interaction(f, 1.0));
    CHECK_THROWS(interaction(f, 2.5));
}

TEST_CASE("interaction components have zero mean") {
    Rng rng(23);
    const Grid g = Grid::make(2, 32, 2.0);
    const Field f = random_bumps(g, rng, 3, 0.3, 1.2, 0.25, 0.6);
    for (const Field& comp : interaction(f, 1.7))
        CHECK(std::abs(integrate(comp)) < 1e-12 * std::max(1.0, linf_norm(comp)));
}

TEST_CASE("symbol table invariants") {
    const Grid g = Grid::make(2, 32, 2.0);
    const SymbolTable t = SymbolTable::make(g, 1.5, 1.8);
    // alpha symbol nonnegative, zero exactly at k=0 (flat index 0)
    CHECK(t.alpha_symbol[0] == 0.0);
    for (double s : t.alpha_symbol) CHECK(s >= 0.0);
    // beta symbol finite everywhere, zero mode annihilated
    for (const auto& b : t.beta_symbol)
        for (int j = 0; j < 2; ++j) CHECK(std::isfinite(b[j]));
    CHECK(t.beta_symbol[0][0] == 0.0);
    CHECK(t.beta_symbol[0][1] == 0.0);
    // parity: alpha symbol even, beta symbol odd under k -> -k
    int idx[3];
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.decode(i, idx);
        int neg[3] = {0, 0, 0};
        bool self_conjugate_ok = true;
        for (int j = 0; j < 2; ++j) {
            neg[j] = (g.n - idx[j]) % g.n;
            if (idx[j] == g.n / 2) self_conjugate_ok = false;  // Nyquist pairs with itself
        }
        const std::size_t ni = static_cast<std::size_t>(neg[0]) * g.n + neg[1];
        CHECK(t.alpha_symbol[i] == Catch::Approx(t.alpha_symbol[ni]).epsilon(1e-14));
        if (self_conjugate_ok)
            for (int j = 0; j < 2; ++j)
                CHECK(t.beta_symbol[i][j] == Catch::Approx(-t.beta_symbol[ni][j]).margin(1e-14));
    }
}

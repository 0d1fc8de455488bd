#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "fracks/grid.hpp"
#include "fracks/morrey.hpp"
#include "fracks/rng.hpp"

using namespace fracks;

TEST_CASE("grid invariants") {
    const Grid g = Grid::make(2, 64, 1.0);
    CHECK(g.spacing * g.n == Catch::Approx(2.0 * g.half_width).epsilon(0));
    CHECK(g.size() == 64u * 64u);
    CHECK(g.cell_volume() == Catch::Approx(g.spacing * g.spacing));
    CHECK_THROWS(Grid::make(2, 48, 1.0));   // not a power of two
    CHECK_THROWS(Grid::make(2, 4, 1.0));    // too small
    CHECK_THROWS(Grid::make(4, 64, 1.0));   // d out of range
    CHECK_THROWS(Grid::make(2, 64, -1.0));  // bad half width
}

TEST_CASE("integrate: zero and constant fields") {
    const Grid g = Grid::make(2, 64, 1.0);
    CHECK(integrate(Field(g)) == 0.0);

    Field ones(g);
    for (double& v : ones.values) v = 1.0;
    CHECK(integrate(ones) == Catch::Approx(4.0).epsilon(1e-13));  // box area (2L)^2
}

TEST_CASE("integrate: contained Gaussian matches closed form") {
    // Continuum normalization (2 pi sigma^2)^{-d/2} integrates to 1; the
    // periodic trapezoid rule is spectrally accurate for this profile.
    const Grid g = Grid::make(2, 64, 4.0);
    const double sigma = 0.5;
    const double amp = 1.0 / (2.0 * pi * sigma * sigma);
    const Field f = Field::from_function(g, [&](const Point& x) {
        return amp * std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]) / (sigma * sigma));
    });
    CHECK(integrate(f) == Catch::Approx(1.0).margin(1e-8));
}

TEST_CASE("integrate is linear") {
    Rng rng(42);
    const Grid g = Grid::make(2, 32, 2.0);
    const Field f = random_bumps(g, rng, 3, 0.5, 2.0, 0.2, 0.5);
    const Field h = random_bumps(g, rng, 3, 0.5, 2.0, 0.2, 0.5);
    const double a = 2.75, b = -1.25;
    Field combo(g);
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = a * f.values[i] + b * h.values[i];
    const double lhs = integrate(combo);
    const double rhs = a * integrate(f) + b * integrate(h);
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("weighted_moment: single-node spike at the center") {
    const Grid g = Grid::make(2, 32, 1.0);
    Field f(g);
    // node (n/2, n/2) sits exactly at the origin
    f.values[(g.n / 2) * g.n + g.n / 2] = 7.0;
    CHECK(weighted_moment(f, 1.5, {0, 0, 0}) == 0.0);
}

TEST_CASE("weighted_moment: second moment of the unit box") {
    const Grid g = Grid::make(1, 64, 1.0);
    Field ones(g);
    for (double& v : ones.values) v = 1.0;
    // integral_{-1}^{1} x^2 dx = 2/3, quadrature error O(h^2)
    CHECK(weighted_moment(ones, 2.0, {0, 0, 0}) == Catch::Approx(2.0 / 3.0).margin(5e-3));
    CHECK_THROWS(weighted_moment(ones, 0.0, {0, 0, 0}));
    CHECK_THROWS(weighted_moment(ones, -1.0, {0, 0, 0}));
}

TEST_CASE("weighted_moment: nonnegative and minimal at the center of mass") {
    const Grid g = Grid::make(2, 64, 4.0);
    const Field f = gaussian_bump(g, 2.0, 0.4, {0.75, -0.5, 0});
    CHECK(weighted_moment(f, 1.5, {0, 0, 0}) >= 0.0);

    const Point com = center_of_mass(f);
    CHECK(com[0] == Catch::Approx(0.75).margin(1e-10));
    CHECK(com[1] == Catch::Approx(-0.5).margin(1e-10));
    const double at_com = weighted_moment(f, 1.5, com);
    for (double off : {0.25, -0.4, 0.8}) {
        Point c = com;
        c[0] += off;
        CHECK(at_com <= weighted_moment(f, 1.5, c) + 1e-12);
        c = com;
        c[1] += off;
        CHECK(at_com <= weighted_moment(f, 1.5, c) + 1e-12);
    }
}

TEST_CASE("weighted_moment: monotone in gamma once distances exceed 1") {
    const Grid g = Grid::make(2, 128, 8.0);
    const Field f = ring_bump(g, 1.0, 2.0, 0.2);  // support well outside |x| = 1
    double prev = 0.0;
    bool first = true;
    for (double gamma : {1.1, 1.4, 1.7, 2.0}) {
        const double w = weighted_moment(f, gamma, {0, 0, 0});
        if (!first) CHECK(w > prev);
        prev = w;
        first = false;
    }
}

TEST_CASE("lp_norm: constants, max norm, direct-sum oracle") {
    const Grid g = Grid::make(2, 32, 1.5);
    Field f(g);
    for (double& v : f.values) v = 3.0;
    // c * (2L)^{d/p}
    CHECK(lp_norm(f, 2.0) == Catch::Approx(3.0 * 3.0).epsilon(1e-13));
    CHECK(lp_norm(f, 1.0) == Catch::Approx(3.0 * 9.0).epsilon(1e-13));

    Rng rng(7);
    Field r(g);
    for (double& v : r.values) v = rng.uniform(-2.0, 2.0);
    CHECK(lp_norm(r, std::numeric_limits<double>::infinity()) ==
          Catch::Approx([&] {
              double m = 0;
              for (double v : r.values) m = std::max(m, std::abs(v));
              return m;
          }()).epsilon(0));

    long double acc = 0.0L;
    for (double v : r.values) acc += static_cast<long double>(v) * v;
    const double oracle = std::sqrt(static_cast<double>(acc) * g.cell_volume());
    CHECK(lp_norm(r, 2.0) == Catch::Approx(oracle).epsilon(1e-13));
    CHECK_THROWS(lp_norm(r, 0.5));
}

TEST_CASE("field validation rejects non-finite values") {
    const Grid g = Grid::make(1, 16, 1.0);
    Field f(g);
    f.values[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS(integrate(f));
}

TEST_CASE("morrey_norm: unit-ball indicator") {
    // R^{2(1/2-1)} * min(pi R^2, pi) peaks at R = 1 with value pi.
    const Grid g = Grid::make(2, 128, 2.0);
    const Field f = Field::from_function(g, [](const Point& x) {
        return x[0] * x[0] + x[1] * x[1] <= 1.0 ? 1.0 : 0.0;
    });
    const double m = morrey_norm(f, 2.0);
    CHECK(m == Catch::Approx(pi).epsilon(0.05));
    CHECK(morrey_norm(Field(g), 2.0) == 0.0);
    CHECK_THROWS(morrey_norm(f, 1.0));
}

TEST_CASE("morrey_norm <= unit-ball-measure^{1-1/p} * lp_norm on random fields") {
    // The continuum constant needs resolved profiles: ball quadrature wobbles
    // by O(h/R) at radii near the bump width, so widths stay >= 5h here.
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const Grid g = Grid::make(2, 64, 4.0);
        const Field f = random_bumps(g, rng, rng.uniform_int(1, 3), 0.1, 2.0, 0.65, 1.2);
        const double p = rng.uniform(1.2, 4.0);
        const double bound = std::pow(unit_ball_measure(g.d), 1.0 - 1.0 / p) * lp_norm(f, p);
        CHECK(morrey_norm(f, p) <= bound * (1.0 + 1e-12));
    }
}

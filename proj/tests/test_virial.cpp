#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracks/rng.hpp"
#include "fracks/virial.hpp"

using namespace fracks;

TEST_CASE("moment_rhs vanishes on the zero field") {
    const Grid g = Grid::make(2, 32, 2.0);
    CHECK(moment_rhs(Field(g), {2, 2.0, 2.0, 1.5}) == 0.0);
}

TEST_CASE("moment_rhs: exact quadratic-weight identity 2dM - s M^2") {
    // alpha = 2, beta = d, gamma = 2: the identity holds for any density.
    const Grid g = Grid::make(2, 64, 4.0);
    const double s = riesz_constant(2, 2.0);
    Rng rng(314);
    for (int trial = 0; trial < 20; ++trial) {
        const Field u = random_bumps(g, rng, rng.uniform_int(1, 3), 0.4, 1.5, 0.85, 1.3);
        const double mass = integrate(u);
        const double expect = 2.0 * 2.0 * mass - s * mass * mass;
        const double got = moment_rhs(u, {2, 2.0, 2.0, 2.0});
        CHECK(got == Catch::Approx(expect).epsilon(1e-3));
    }
}

TEST_CASE("moment_rhs: quadratic identity also holds in d=3 at coarse resolution") {
    const Grid g = Grid::make(3, 16, 4.0);
    const double s = riesz_constant(3, 3.0);
    Rng rng(2718);
    for (int trial = 0; trial < 3; ++trial) {
        const Field u = random_bumps(g, rng, 1, 0.5, 1.5, 1.0, 1.4);
        const double mass = integrate(u);
        const double expect = 2.0 * 3.0 * mass - s * mass * mass;
        CHECK(moment_rhs(u, {3, 2.0, 3.0, 2.0}) == Catch::Approx(expect).epsilon(2e-2));
    }
}

TEST_CASE("moment_rhs guards") {
    const Grid big = Grid::make(2, 256, 4.0);
    CHECK_THROWS(moment_rhs(Field(big), {2, 2.0, 2.0, 1.5}));  // N^2 guard
    const Grid g = Grid::make(2, 32, 2.0);
    CHECK_THROWS(moment_rhs(Field(g), {2, 1.5, 2.0, 1.7}));  // gamma >= alpha < 2
    CHECK_THROWS(moment_rhs(Field(g), {2, 2.0, 0.5, 1.5}));  // beta out of range
}

TEST_CASE("moment_rhs with fractional alpha is finite and diffusion-positive for spread data") {
    // a wide, low bump: the interaction sink is quadratically small in mass,
    // diffusion dominates and the moment grows
    const Grid g = Grid::make(2, 64, 4.0);
    const Field u = gaussian_bump(g, 0.05, 1.0);
    const double rhs = moment_rhs(u, {2, 1.6, 2.0, 1.3});
    CHECK(std::isfinite(rhs));
    CHECK(rhs > 0.0);
}

TEST_CASE("holder_exponents: beta = d reduction") {
    const auto e = holder_exponents(2, 2.0, 1.5);
    CHECK(e.nu == 0.0);
    CHECK(e.p == Catch::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(e.p_prime == Catch::Approx(4.0).epsilon(1e-12));
    CHECK(e.delta == Catch::Approx(0.75).epsilon(1e-14));
    // third relation by hand: 0 + (2 - 1.5) * 0.75 * 4 = 1.5
    CHECK(e.nu * e.p_prime + 0.5 * e.delta * e.p_prime == Catch::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("holder_exponents: d=3, beta=2, gamma=1.5") {
    const auto e = holder_exponents(3, 2.0, 1.5);
    CHECK(e.p == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(e.p_prime == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(e.nu == Catch::Approx(0.5).epsilon(1e-14));
    CHECK(e.delta == Catch::Approx(0.5).epsilon(1e-14));
    // 0.5 * 2 + 0.5 * 0.5 * 2 = 1.5
    CHECK(e.nu * e.p_prime + (2.0 - 1.5) * e.delta * e.p_prime == Catch::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("holder_exponents relations hold across the admissible wedge") {
    Rng rng(99);
    for (int t = 0; t < 200; ++t) {
        const int d = rng.uniform_int(2, 3);
        const double beta = rng.uniform(1.01, static_cast<double>(d));
        const double gamma = rng.uniform(1.01, 1.99);
        const auto e = holder_exponents(d, beta, gamma);
        CHECK(e.p > 1.0);
        CHECK(std::abs(e.nu * e.p - (d - beta)) < 1e-12);
        CHECK(std::abs(e.delta * e.p - 1.0) < 1e-12);
        CHECK(std::abs(e.nu * e.p_prime + (2.0 - gamma) * e.delta * e.p_prime - gamma) < 1e-12);
    }
}

TEST_CASE("holder_exponents rejects out-of-range parameters") {
    CHECK_THROWS(holder_exponents(2, 2.0, 2.0));   // gamma not below 2
    CHECK_THROWS(holder_exponents(2, 2.5, 1.5));   // beta > d
    CHECK_THROWS(holder_exponents(3, 1.0, 1.5));   // beta not above 1
}

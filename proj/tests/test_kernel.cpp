#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracks/smoothing.hpp"
#include "fracks/stable_kernel.hpp"

using namespace fracks;

TEST_CASE("alpha=2 reproduces the Gaussian kernel") {
    for (int d : {1, 2, 3})
        for (double r : {0.0, 0.5, 1.5, 3.0})
            for (double t : {0.25, 1.0}) {
                const double got = stable_kernel_value(r, t, 2.0, d);
                const double expect = heat_kernel(r, t, d);
                CHECK(got == Catch::Approx(expect).epsilon(1e-8));
            }
}

TEST_CASE("alpha=1, d=2 reproduces the Cauchy family kernel") {
    for (double r : {0.0, 0.4, 1.0, 2.5})
        for (double t : {0.5, 1.0, 2.0}) {
            const double got = stable_kernel_value(r, t, 1.0, 2);
            CHECK(got == Catch::Approx(cauchy_kernel_2d(r, t)).epsilon(1e-8));
        }
}

TEST_CASE("self-similarity p(r, 4t) = 4^{-d/a} p(r 4^{-1/a}, t)") {
    for (double alpha : {1.3, 1.7})
        for (int d : {1, 2}) {
            const double t = 0.7;
            for (double r : {0.2, 1.0, 3.0, 8.0}) {
                const double lhs = stable_kernel_value(r, 4.0 * t, alpha, d);
                const double rhs = std::pow(4.0, -d / alpha) *
                                   stable_kernel_value(r * std::pow(4.0, -1.0 / alpha), t, alpha, d);
                CHECK(lhs == Catch::Approx(rhs).epsilon(1e-6));
            }
        }
    CHECK_THROWS(stable_kernel_value(1.0, 0.0, 1.5, 2));
    CHECK_THROWS(stable_kernel_value(1.0, -1.0, 1.5, 2));
}

TEST_CASE("kernel table: positivity, unit mass, decay bound with fitted tail") {
    for (double alpha : {1.2, 1.5, 1.8}) {
        const StableKernel k = StableKernel::make(alpha, 2);
        CHECK(k.mass == Catch::Approx(1.0).margin(1e-6));
        CHECK(k.decay_constant > 0.0);
        for (std::size_t i = 0; i < k.radii.size(); ++i) {
            CHECK(k.profile[i] > 0.0);
            CHECK(k.profile[i] <=
                  k.decay_constant * std::pow(1.0 + k.radii[i], -(alpha + 2.0)) * (1.0 + 1e-12));
        }
        // fitted tail exponent over [5, 50] matches -(alpha+d) within 5%
        std::vector<double> radii, values;
        for (int i = 0; i < 12; ++i) {
            radii.push_back(5.0 * std::pow(10.0, i / 11.0));
            values.push_back(stable_kernel_value(radii.back(), 1.0, alpha, 2));
        }
        const double slope = tail_exponent_fit(radii, values, alpha);
        CHECK(slope == Catch::Approx(-(alpha + 2.0)).epsilon(0.05));
    }
}

TEST_CASE("smoothing estimate: p = q is a contraction with exponent zero") {
    const Grid g = Grid::make(2, 128, 4.0);
    const SmoothingReport rep = smoothing_estimate_check(g, 1.5, 2.0, 2.0, 4);
    CHECK(rep.expected_exponent == 0.0);
    // same-norm estimate is a contraction; concentrated data decays faster
    // than the exponent-0 envelope, so only the constant is asserted
    CHECK(rep.best_constant <= 1.0 + 1e-6);
    CHECK(rep.fitted_exponent <= 0.0);
    CHECK_THROWS(smoothing_estimate_check(g, 1.5, 1.0, 2.0, 4));  // q > p rejected
}

TEST_CASE("smoothing estimate: heat kernel L1 -> Linf decay in 1d") {
    const Grid g = Grid::make(1, 1024, 8.0);
    const SmoothingReport rep =
        smoothing_estimate_check(g, 2.0, std::numeric_limits<double>::infinity(), 1.0, 6);
    CHECK(rep.expected_exponent == Catch::Approx(-0.5));
    CHECK(rep.exponent_within_10pct);
    CHECK(rep.gradient_exponent_within_10pct);  // expected -1.0
}

TEST_CASE("smoothing estimate: fractional decay d=2, q=1, p=2") {
    const Grid g = Grid::make(2, 512, 4.0);
    const SmoothingReport rep = smoothing_estimate_check(g, 1.5, 2.0, 1.0, 6);
    CHECK(rep.expected_exponent == Catch::Approx(-2.0 / 3.0));
    CHECK(rep.exponent_within_10pct);
    CHECK(rep.gradient_exponent_within_10pct);
}

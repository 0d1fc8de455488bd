#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracks/grid.hpp"
#include "fracks/levy.hpp"
#include "fracks/rng.hpp"
#include "fracks/spectral.hpp"

using namespace fracks;

namespace {

// Standard normalization of the singular-integral representation, negated to
// match the bracket orientation used here. Independent oracle for the
// Gaussian-matching calibration.
double closed_form_normalization(int d, double alpha) {
    const double num = std::pow(4.0, 0.5 * alpha) * std::tgamma(0.5 * (d + alpha));
    const double gamma_neg =
        pi / (std::sin(pi * 0.5 * alpha) * std::tgamma(1.0 + 0.5 * alpha));  // |Gamma(-a/2)|
    return -num / (std::pow(pi, 0.5 * d) * gamma_neg);
}

double fit_log_slope(const std::vector<double>& r, const std::vector<double>& v) {
    const int m = static_cast<int>(r.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        const double x = std::log(r[i]), y = std::log(std::abs(v[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// C-infinity cutoff: 1 for r <= a, 0 for r >= b.
double smooth_window(double r, double a, double b) {
    if (r <= a) return 1.0;
    if (r >= b) return 0.0;
    const double t = (b - r) / (b - a);
    const double s1 = std::exp(-1.0 / t), s2 = std::exp(-1.0 / (1.0 - t));
    return s1 / (s1 + s2);
}

}  // namespace

TEST_CASE("calibrated normalization matches the closed form") {
    for (int d : {1, 2, 3})
        for (double alpha : {1.2, 1.5, 1.8}) {
            const double cal = levy_normalization(d, alpha);
            const double exact = closed_form_normalization(d, alpha);
            CHECK(cal == Catch::Approx(exact).epsilon(1e-6));
            CHECK(cal < 0.0);
        }
}

TEST_CASE("frac_laplacian_weight: rejects gamma >= alpha") {
    CHECK_THROWS(frac_laplacian_weight({0, 0, 0}, 1.5, 1.5, 2));
    CHECK_THROWS(frac_laplacian_weight({0, 0, 0}, 1.5, 1.7, 2));
    CHECK_THROWS(frac_laplacian_weight({0, 0, 0}, 2.0, 1.5, 2));
}

TEST_CASE("frac_laplacian_weight: even in x") {
    const Point x{0.7, -0.3, 0.0};
    Point mx{-0.7, 0.3, 0.0};
    const double vp = frac_laplacian_weight(x, 1.7, 1.4, 2);
    const double vm = frac_laplacian_weight(mx, 1.7, 1.4, 2);
    CHECK(vp == Catch::Approx(vm).epsilon(1e-8));
}

TEST_CASE("bounded profile and far-field exponent gamma - alpha") {
    // (alpha, gamma) pairs of the acceptance wedge
    const std::pair<double, double> pairs[] = {{1.5, 1.2}, {1.8, 1.5}};
    for (auto [alpha, gamma] : pairs) {
        std::vector<double> radii, values;
        double sup = 0.0;
        for (double r : {0.0, 0.3, 1.0, 3.0, 10.0, 50.0, 200.0, 1000.0}) {
            const double v = frac_laplacian_weight_radial(r, alpha, gamma, 2);
            CHECK(std::isfinite(v));
            CHECK(v < 0.0);  // diffusion spreads the moment: the operator acts negatively here
            sup = std::max(sup, std::abs(v));
        }
        CHECK(sup < 1e3);
        // fit over [20, 1000], where the first correction O(r^-2) is dead
        for (int i = 0; i < 12; ++i) {
            const double r = 20.0 * std::pow(50.0, i / 11.0);
            radii.push_back(r);
            values.push_back(frac_laplacian_weight_radial(r, alpha, gamma, 2));
        }
        const double slope = fit_log_slope(radii, values);
        CHECK(slope == Catch::Approx(gamma - alpha).epsilon(0.10));
    }
}

TEST_CASE("weight_sup_norm: finite, gamma-monotone, stable under refinement") {
    const double alpha = 1.8;
    double prev = 0.0;
    for (double gamma : {1.1, 1.3, 1.5}) {
        const SupNormResult r = weight_sup_norm(alpha, gamma, 2);
        CHECK(std::isfinite(r.value));
        CHECK(r.value > 0.0);
        CHECK(r.value > prev);  // C2 grows as gamma approaches alpha
        prev = r.value;
    }
    const SupNormResult coarse = weight_sup_norm(alpha, 1.3, 2, 1);
    const SupNormResult fine = weight_sup_norm(alpha, 1.3, 2, 2);
    CHECK(std::abs(fine.value - coarse.value) < 0.01 * coarse.value);
}

TEST_CASE("radial table reproduces direct evaluation") {
    const WeightFlapTable table(2, 1.6, 1.3);
    Rng rng(13);
    for (int t = 0; t < 25; ++t) {
        const double r = std::exp(rng.uniform(std::log(1e-3), std::log(200.0)));
        const double direct = frac_laplacian_weight_radial(r, 1.6, 1.3, 2);
        CHECK(table(r) == Catch::Approx(direct).epsilon(1e-5));
    }
    CHECK(table(0.0) == Catch::Approx(frac_laplacian_weight_radial(0.0, 1.6, 1.3, 2)).epsilon(1e-10));
}

TEST_CASE("two discretizations agree on a Gaussian") {
    // Spectral multiplier on the periodic grid vs the singular-integral
    // quadrature, both applied to a contained Gaussian. The grid result
    // carries periodic images of the operator's algebraic tails, which decay
    // like (2L)^{-(d+alpha)}; L = 14 pushes them below the tolerance.
    const double alpha = 1.5, sigma = 1.0;
    const Grid g = Grid::make(2, 256, 14.0);
    const Field f = Field::from_function(g, [&](const Point& x) {
        return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]) / (sigma * sigma));
    });
    const Field spec = fractional_laplacian(f, alpha);
    const double scale = linf_norm(spec);

    LevyOptions opt;
    opt.far_radius = 40.0;
    const double c = levy_normalization(2, alpha);
    for (const Point x : {Point{0, 0, 0}, Point{0.875, 0, 0}, Point{-1.3125, 0.875, 0},
                          Point{2.1875, -0.65625, 0}}) {
        auto gauss = [&](const Point& p) {
            return std::exp(-0.5 * (p[0] * p[0] + p[1] * p[1]) / (sigma * sigma));
        };
        const double fx = gauss(x);
        const Point grad{-x[0] / (sigma * sigma) * fx, -x[1] / (sigma * sigma) * fx, 0};
        const double r2 = x[0] * x[0] + x[1] * x[1];
        const double tr = fx * (r2 / std::pow(sigma, 4) - 2.0 / (sigma * sigma));
        const double lk = c * levy_bracket(gauss, x, grad, tr, 2, alpha, opt);

        // x lands on grid nodes by construction
        const int i0 = static_cast<int>(std::lround((x[0] + g.half_width) / g.spacing));
        const int i1 = static_cast<int>(std::lround((x[1] + g.half_width) / g.spacing));
        const double on_grid = spec.values[static_cast<std::size_t>(i0) * g.n + i1];
        CHECK(std::abs(lk - on_grid) < 1e-4 * scale);
    }
}

TEST_CASE("two discretizations agree on the windowed weight") {
    // The raw weight grows like r^gamma, which the periodic spectral operator
    // cannot represent, so the consistency check runs on phi * window with a
    // C-infinity cutoff that dies well inside the box.
    const double alpha = 1.6, gamma = 1.3;
    const Grid g = Grid::make(2, 512, 16.0);
    const double a = 0.3 * g.half_width, b = 0.45 * g.half_width;
    const WeightFunction w(gamma);
    const Field f = Field::from_function(g, [&](const Point& x) {
        return w.value(x, 2) * smooth_window(norm(x, 2), a, b);
    });
    const Field spec = fractional_laplacian(f, alpha);

    // The operator output has algebraic tails ~ C * integral(f) * |x|^{-d-a},
    // so the periodic grid values see their lattice images. Subtract the
    // leading image field before comparing.
    const double c = levy_normalization(2, alpha);
    const double tail_coef = c * integrate(f);
    auto image_field = [&](const Point& x) {
        double s = 0.0;
        for (int m0 = -3; m0 <= 3; ++m0)
            for (int m1 = -3; m1 <= 3; ++m1) {
                if (m0 == 0 && m1 == 0) continue;
                const double dx = x[0] - 2.0 * g.half_width * m0;
                const double dy = x[1] - 2.0 * g.half_width * m1;
                s += std::pow(dx * dx + dy * dy, -0.5 * (2.0 + alpha));
            }
        return tail_coef * s;
    };

    for (const Point x : {Point{0, 0, 0}, Point{1.0, 0.5, 0}, Point{-2.0, 1.0, 0}}) {
        auto fw = [&](const Point& p) { return w.value(p, 2) * smooth_window(norm(p, 2), a, b); };
        LevyOptions opt;
        opt.far_radius = (b + norm(x, 2) + 1.0) / (1.0 + norm(x, 2));
        const Point grad = w.gradient(x, 2);  // window is identically 1 near x
        double tr = 0.0;
        const auto h = w.hessian(x, 2);
        for (int j = 0; j < 2; ++j) tr += h[j][j];
        const double lk = c * levy_bracket(fw, x, grad, tr, 2, alpha, opt);

        const int i0 = static_cast<int>(std::lround((x[0] + g.half_width) / g.spacing));
        const int i1 = static_cast<int>(std::lround((x[1] + g.half_width) / g.spacing));
        const double on_grid =
            spec.values[static_cast<std::size_t>(i0) * g.n + i1] - image_field(x);
        CHECK(lk == Catch::Approx(on_grid).epsilon(1e-3));
    }
}

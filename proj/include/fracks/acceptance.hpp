#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "fracks/criteria.hpp"
#include "fracks/levy.hpp"
#include "fracks/picard.hpp"
#include "fracks/rng.hpp"
#include "fracks/smoothing.hpp"
#include "fracks/solver.hpp"
#include "fracks/stable_kernel.hpp"
#include "fracks/virial.hpp"
#include "fracks/weight.hpp"

namespace fracks {

struct AcceptanceCase {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace acceptance_detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

struct A1Data {
    RunResult run;
    std::vector<double> snap_t;
    std::vector<Field> snap_fields;  // downsampled for the O(N^2) diagnostics
};

inline SimParams classical_params() {
    SimParams p;
    p.d = 2;
    p.alpha = 2.0;
    p.beta = 2.0;
    p.gamma = 1.5;
    p.n = 256;
    p.half_width = 8.0;
    p.dt = 0.01;
    p.t_end = 5.0;
    p.cfl_safety = 0.5;
    p.blowup_linf_factor = 1e4;
    p.blowup_dt_floor = 1e-3;
    p.record_dt = 0.01;
    return p;
}

inline A1Data run_supercritical() {
    A1Data data;
    const SimParams p = classical_params();
    const Field u0 = gaussian_bump(p.grid(), 12.0 * pi, 0.5);
    Solver solver(p);
    data.run = solver.run(u0, [&](double t, const Field& u) {
        data.snap_t.push_back(t);
        data.snap_fields.push_back(downsample(u, 2));
    });
    return data;
}

// A1: supercritical mass blows up with the required growth, and the
// regularized moment decreases strictly over the final half of the run.
inline AcceptanceCase a1(const A1Data& data) {
    AcceptanceCase c{"A1 supercritical blow-up (M = 12 pi)", false, ""};
    const RunResult& r = data.run;
    const MomentSeries& s = r.series;
    bool monotone = true;
    std::size_t checked = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s.t[i] < 0.5 * r.state.t) continue;
        if (s.moment_reg[i] >= s.moment_reg[i - 1]) monotone = false;
        ++checked;
    }
    c.pass = r.state.status == RunStatus::blowup_detected && r.state.t < 5.0 &&
             r.linf_growth_factor >= 1e4 && monotone && checked >= 3;
    c.detail = "status=" + std::string(to_string(r.state.status)) +
               " t=" + num(r.state.t) + " growth=" + num(r.linf_growth_factor) +
               " w-samples-final-half=" + std::to_string(checked) +
               (monotone ? " w strictly decreasing" : " w NOT strictly decreasing");
    return c;
}

// A2: subcritical mass runs to the horizon with decaying sup norm and
// conserved mass.
inline AcceptanceCase a2() {
    AcceptanceCase c{"A2 subcritical global run (M = 4 pi)", false, ""};
    SimParams p = classical_params();
    p.record_dt = 0.05;
    const Field u0 = gaussian_bump(p.grid(), 4.0 * pi, 0.5);
    const RunResult r = run_simulation(p, u0);
    double drift = 0.0;
    for (double m : r.series.mass)
        drift = std::max(drift, std::abs(m - r.series.mass.front()) / r.series.mass.front());
    c.pass = r.state.status == RunStatus::completed &&
             r.series.linf.back() < r.series.linf.front() && drift < 1e-8;
    c.detail = "status=" + std::string(to_string(r.state.status)) +
               " linf " + num(r.series.linf.front()) + " -> " + num(r.series.linf.back()) +
               " mass drift=" + num(drift);
    return c;
}

// A3: quadratic-weight identity dw/dt = 2dM - s M^2 on random densities.
inline AcceptanceCase a3() {
    AcceptanceCase c{"A3 virial identity oracle (alpha=2, beta=d, gamma=2)", false, ""};
    const Grid g = Grid::make(2, 64, 4.0);
    const double s = riesz_constant(2, 2.0);
    Rng rng(1234);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Field u = random_bumps(g, rng, rng.uniform_int(1, 3), 0.4, 1.5, 0.85, 1.3);
        const double mass = integrate(u);
        const double expect = 4.0 * mass - s * mass * mass;
        const double got = moment_rhs(u, {2, 2.0, 2.0, 2.0});
        worst = std::max(worst, std::abs(got - expect) / std::abs(expect));
    }
    c.pass = worst < 1e-3;
    c.detail = "worst relative deviation over 20 densities = " + num(worst);
    return c;
}

// A4: centered differences of the recorded moment match moment_rhs along the
// resolved part of the supercritical trajectory.
inline AcceptanceCase a4(const A1Data& data) {
    AcceptanceCase c{"A4 virial consistency along the blow-up trajectory", false, ""};
    const MomentSeries& s = data.run.series;
    const double t_resolved = 0.6 * data.run.state.t;
    const WeightFunction w(1.5);
    double worst = 0.0;
    int used = 0;
    for (std::size_t k = 1; k + 1 < data.snap_fields.size(); ++k) {
        if (data.snap_t[k + 1] > t_resolved) break;
        const double dw = (s.moment_reg[k + 1] - s.moment_reg[k - 1]) /
                          (s.t[k + 1] - s.t[k - 1]);
        // the regularized moment on the coarse snapshot grid
        const double rhs = moment_rhs(data.snap_fields[k], {2, 2.0, 2.0, 1.5});
        worst = std::max(worst, std::abs(dw - rhs) / std::abs(rhs));
        ++used;
    }
    c.pass = used >= 3 && worst < 0.05;
    c.detail = "triples=" + std::to_string(used) + " worst relative mismatch=" + num(worst);
    return c;
}

// A5: boundedness and the far-field exponent gamma - alpha of the weight's
// fractional Laplacian.
inline AcceptanceCase a5() {
    AcceptanceCase c{"A5 weight fractional Laplacian: bounded, tail gamma-alpha", false, ""};
    bool ok = true;
    std::string detail;
    for (auto [alpha, gamma] : {std::pair{1.5, 1.2}, std::pair{1.8, 1.5}}) {
        double sup = 0.0;
        for (double r : {0.0, 0.5, 2.0, 10.0, 100.0, 1000.0}) {
            const double v = frac_laplacian_weight_radial(r, alpha, gamma, 2);
            if (!std::isfinite(v)) ok = false;
            sup = std::max(sup, std::abs(v));
        }
        std::vector<double> rad, val;
        for (int i = 0; i < 12; ++i) {
            rad.push_back(20.0 * std::pow(50.0, i / 11.0));
            val.push_back(frac_laplacian_weight_radial(rad.back(), alpha, gamma, 2));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (int i = 0; i < 12; ++i) {
            sx += std::log(rad[i]);
            sy += std::log(std::abs(val[i]));
            sxx += std::log(rad[i]) * std::log(rad[i]);
            sxy += std::log(rad[i]) * std::log(std::abs(val[i]));
        }
        const double slope = (12 * sxy - sx * sy) / (12 * sxx - sx * sx);
        const bool fit_ok = std::abs(slope - (gamma - alpha)) <= 0.10 * std::abs(gamma - alpha);
        if (!fit_ok || sup > 1e3) ok = false;
        detail += "(a=" + num(alpha) + ",g=" + num(gamma) + "): sup=" + num(sup) +
                  " slope=" + num(slope) + " ";
    }
    c.pass = ok;
    c.detail = detail;
    return c;
}

// A6: randomized infimum of the convexity-gap ratio; exact constant 6 at
// gamma = 2.
inline AcceptanceCase a6() {
    AcceptanceCase c{"A6 convexity gap: positive randomized infimum", false, ""};
    Rng rng(77);
    bool ok = true;
    std::string detail;
    for (double gamma : {1.2, 1.5, 1.8, 2.0}) {
        const WeightFunction w(gamma);
        double khat = std::numeric_limits<double>::infinity();
        double ratio_min = std::numeric_limits<double>::infinity();
        double ratio_max = 0.0;
        for (int t = 0; t < 1000000; ++t) {
            Point x{rng.uniform(-8, 8), rng.uniform(-8, 8), 0};
            Point y{rng.uniform(-8, 8), rng.uniform(-8, 8), 0};
            if (x == y) continue;
            const auto gap = convexity_gap(w, x, y, 2);
            if (gap.lhs < 0.0) ok = false;
            if (gap.rhs_over_k > 0.0) {
                const double ratio = gap.lhs / gap.rhs_over_k;
                khat = std::min(khat, ratio);
                ratio_min = std::min(ratio_min, ratio);
                ratio_max = std::max(ratio_max, ratio);
            }
        }
        if (!(khat > 0.0)) ok = false;
        if (gamma == 2.0 && (std::abs(ratio_min - 6.0) > 1e-10 || std::abs(ratio_max - 6.0) > 1e-10))
            ok = false;
        detail += "K(" + num(gamma) + ")=" + num(khat) + " ";
    }
    c.pass = ok;
    c.detail = detail;
    return c;
}

// A7: the mass/moment lower bound never exceeds the actual norm, in both the
// Lebesgue and Morrey forms.
inline AcceptanceCase a7() {
    AcceptanceCase c{"A7 moment/norm tension bounds on 1000 random fields", false, ""};
    Rng rng(909);
    const Grid g = Grid::make(2, 64, 4.0);
    int lp_viol = 0, morrey_viol = 0;
    for (int t = 0; t < 1000; ++t) {
        const Field u = random_bumps(g, rng, rng.uniform_int(1, 3), 0.2, 3.0, 0.3, 0.9);
        const double p = rng.uniform(1.2, 4.0);
        const double gamma = rng.uniform(1.05, 2.0);
        const TensionResult lp = moment_lp_tension(u, p, gamma);
        if (lp.lower_bound > lp.actual_norm * (1.0 + 1e-12)) ++lp_viol;
        const TensionResult mo = moment_morrey_tension(u, std::min(p, 3.5), gamma);
        if (mo.lower_bound > mo.actual_norm * (1.0 + 1e-12)) ++morrey_viol;
    }
    c.pass = lp_viol == 0 && morrey_viol == 0;
    c.detail = "violations: lp=" + std::to_string(lp_viol) +
               " morrey=" + std::to_string(morrey_viol);
    return c;
}

// A8: scaling covariance of paired runs and exact invariance of the critical
// norm under the rescaling map.
inline AcceptanceCase a8() {
    AcceptanceCase c{"A8 scaling covariance at lambda = 2", false, ""};
    SimParams p;
    p.d = 2;
    p.alpha = 1.5;
    p.beta = 2.0;
    p.gamma = 1.3;
    p.n = 128;
    p.half_width = 4.0;
    p.dt = 0.004;
    p.t_end = 0.2;
    p.cfl_safety = 0.4;
    p.record_dt = 0.05;
    p.blowup_dt_floor = 1e-7;
    const double lambda = 2.0;
    const Field u0 = gaussian_bump(p.grid(), 3.0, 0.45);
    const RunResult base = run_simulation(p, u0);

    SimParams ps = p;
    ps.half_width /= lambda;
    ps.t_end /= std::pow(lambda, p.alpha);
    ps.dt /= std::pow(lambda, p.alpha);
    ps.record_dt /= std::pow(lambda, p.alpha);
    const Field u0s = rescale_initial(u0, lambda, p.alpha, p.beta);
    const RunResult scaled = run_simulation(ps, u0s);

    double num2 = 0.0, den2 = 0.0;
    const double amp = std::pow(lambda, p.alpha + p.beta - 2.0);
    for (std::size_t i = 0; i < u0.values.size(); ++i) {
        const double diff = scaled.state.u.values[i] - amp * base.state.u.values[i];
        num2 += diff * diff;
        den2 += scaled.state.u.values[i] * scaled.state.u.values[i];
    }
    const double rel_l2 = std::sqrt(num2 / den2);

    const double p_crit = p.d / (p.alpha + p.beta - 2.0);
    double inv_residual = 0.0;
    for (double lam : {0.5, 2.0}) {
        const Field r = rescale_initial(u0, lam, p.alpha, p.beta);
        inv_residual = std::max(inv_residual, std::abs(lp_norm(r, p_crit) - lp_norm(u0, p_crit)) /
                                                  lp_norm(u0, p_crit));
    }
    c.pass = base.state.status == RunStatus::completed &&
             scaled.state.status == RunStatus::completed && rel_l2 < 1e-3 &&
             inv_residual < 1e-8;
    c.detail = "paired-run rel L2 = " + num(rel_l2) +
               ", critical-norm residual = " + num(inv_residual);
    return c;
}

// A9: kernel self-similarity, Gaussian closed form, and the semigroup decay
// exponent fits.
inline AcceptanceCase a9() {
    AcceptanceCase c{"A9 stable kernel and smoothing estimates", false, ""};
    double ss_worst = 0.0;
    for (double alpha : {1.3, 1.7})
        for (double r : {0.2, 1.0, 3.0, 8.0}) {
            const double lhs = stable_kernel_value(r, 4.0 * 0.7, alpha, 2);
            const double rhs = std::pow(4.0, -2.0 / alpha) *
                               stable_kernel_value(r * std::pow(4.0, -1.0 / alpha), 0.7, alpha, 2);
            ss_worst = std::max(ss_worst, std::abs(lhs - rhs) / std::abs(rhs));
        }
    double gauss_worst = 0.0;
    for (double r : {0.0, 0.5, 1.5, 3.0})
        for (double t : {0.25, 1.0}) {
            const double got = stable_kernel_value(r, t, 2.0, 2);
            gauss_worst = std::max(gauss_worst,
                                   std::abs(got - heat_kernel(r, t, 2)) /
                                       heat_kernel(r, t, 2));
        }
    const Grid g1 = Grid::make(1, 1024, 8.0);
    const SmoothingReport rep1 =
        smoothing_estimate_check(g1, 2.0, std::numeric_limits<double>::infinity(), 1.0, 6);
    const Grid g2 = Grid::make(2, 512, 4.0);
    const SmoothingReport rep2 = smoothing_estimate_check(g2, 1.5, 2.0, 1.0, 6);
    c.pass = ss_worst < 1e-6 && gauss_worst < 1e-8 && rep1.exponent_within_10pct &&
             rep1.gradient_exponent_within_10pct && rep2.exponent_within_10pct &&
             rep2.gradient_exponent_within_10pct;
    c.detail = "self-similarity=" + num(ss_worst) + " gauss=" + num(gauss_worst) +
               " exps: " + num(rep1.fitted_exponent) + "/" + num(rep1.expected_exponent) +
               ", " + num(rep2.fitted_exponent) + "/" + num(rep2.expected_exponent) +
               ", grad " + num(rep2.fitted_gradient_exponent) + "/" +
               num(rep2.expected_gradient_exponent);
    return c;
}

// A10: Picard contraction, the T-scaling of its ratio, and agreement with the
// time stepper.
inline AcceptanceCase a10() {
    AcceptanceCase c{"A10 Picard contraction and T-scaling", false, ""};
    SimParams p;
    p.d = 2;
    p.alpha = 1.5;
    p.beta = 2.0;
    p.gamma = 1.3;
    p.n = 128;
    p.half_width = 6.0;
    p.dt = 0.002;
    p.t_end = 0.1;
    p.blowup_dt_floor = 1e-8;
    const Field u0 = gaussian_bump(p.grid(), 0.5, 1.0);
    PicardOptions opt;
    opt.p = 2.0;
    opt.time_nodes = 200;
    const PicardResult r1 = picard_iterate(p, u0, 0.8, 4, opt);
    opt.time_nodes = 100;
    const PicardResult r2 = picard_iterate(p, u0, 0.4, 4, opt);
    const double theta = picard_time_exponent(p.d, p.alpha, p.beta, opt.p);
    const double slope = std::log2(r1.ratios[0] / r2.ratios[0]);
    const bool slope_ok = std::abs(slope - theta) <= 0.20 * theta;

    // stepper cross-validation on a smaller horizon
    SimParams pc = p;
    pc.n = 64;
    pc.half_width = 4.0;
    const Field v0 = gaussian_bump(pc.grid(), 0.8, 0.5);
    PicardOptions optc;
    optc.time_nodes = 96;
    const PicardResult pic = picard_iterate(pc, v0, 0.08, 12, optc);
    SimParams pr = pc;
    pr.t_end = 0.08;
    pr.dt = 5e-4;
    const RunResult run = run_simulation(pr, v0);
    double num2 = 0.0, den2 = 0.0;
    for (std::size_t i = 0; i < v0.values.size(); ++i) {
        const double diff = pic.final_state.values[i] - run.state.u.values[i];
        num2 += diff * diff;
        den2 += run.state.u.values[i] * run.state.u.values[i];
    }
    const double rel = std::sqrt(num2 / den2);

    c.pass = r1.contracted && r2.contracted && slope_ok && rel < 1e-4;
    c.detail = "ratio(T=0.8)=" + num(r1.ratios[0]) + " slope=" + num(slope) + " theta=" +
               num(theta) + " stepper rel L2=" + num(rel);
    return c;
}

// A11: fractional-regime dichotomy: a profile satisfying the concentration
// condition blows up; the equal-mass spread profile violating it completes.
inline AcceptanceCase a11() {
    AcceptanceCase c{"A11 fractional blow-up dichotomy (alpha=1.5, beta=2)", false, ""};
    SimParams p;
    p.d = 2;
    p.alpha = 1.5;
    p.beta = 2.0;
    p.gamma = 1.3;
    p.n = 256;
    p.half_width = 8.0;
    p.dt = 0.01;
    p.t_end = 3.0;
    p.cfl_safety = 0.5;
    p.blowup_linf_factor = 1e4;
    p.blowup_dt_floor = 1e-3;
    p.record_dt = 0.1;
    const CriteriaConstants constants;
    const double mass = 6.0 * pi;
    const Grid g = p.grid();

    const Field tight = gaussian_bump(g, mass, 0.25);
    const CriterionVerdict v_tight =
        check_concentration(tight, p.d, p.alpha, p.beta, p.gamma, constants.conc_c);
    const RunResult r_tight = run_simulation(p, tight, constants);

    const Field spread = gaussian_bump(g, mass, 1.0);
    const CriterionVerdict v_spread =
        check_concentration(spread, p.d, p.alpha, p.beta, p.gamma, constants.conc_c);
    const RunResult r_spread = run_simulation(p, spread, constants);

    c.pass = v_tight.satisfied && r_tight.state.status == RunStatus::blowup_detected &&
             !v_spread.satisfied && r_spread.state.status == RunStatus::completed &&
             r_tight.report.consistent && r_spread.report.consistent;
    c.detail = "tight: condition " + std::string(v_tight.satisfied ? "holds" : "fails") + ", " +
               to_string(r_tight.state.status) + " at t=" + num(r_tight.state.t) +
               "; spread: condition " + std::string(v_spread.satisfied ? "holds" : "fails") +
               ", " + to_string(r_spread.state.status);
    return c;
}

}  // namespace acceptance_detail

// Runs every acceptance criterion, printing one pass/fail line per criterion.
inline std::vector<AcceptanceCase> run_acceptance(std::ostream& out) {
    namespace ad = acceptance_detail;
    std::vector<AcceptanceCase> cases;
    auto emit = [&](const AcceptanceCase& c) {
        out << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " -- " << c.detail << "\n";
        out.flush();
        cases.push_back(c);
    };
    const ad::A1Data a1_data = ad::run_supercritical();
    emit(ad::a1(a1_data));
    emit(ad::a2());
    emit(ad::a3());
    emit(ad::a4(a1_data));
    emit(ad::a5());
    emit(ad::a6());
    emit(ad::a7());
    emit(ad::a8());
    emit(ad::a9());
    emit(ad::a10());
    emit(ad::a11());
    int failed = 0;
    for (const auto& c : cases)
        if (!c.pass) ++failed;
    out << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria FAILED")
        << " (" << cases.size() - failed << "/" << cases.size() << ")\n";
    return cases;
}

}  // namespace fracks

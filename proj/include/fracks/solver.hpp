#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fracks/criteria.hpp"
#include "fracks/fft.hpp"
#include "fracks/grid.hpp"
#include "fracks/morrey.hpp"
#include "fracks/spectral.hpp"
#include "fracks/weight.hpp"

namespace fracks {

struct SimParams {
    int d = 2;
    double alpha = 2.0;  // (1, 2]
    double beta = 2.0;   // (1, d]
    double gamma = 1.5;  // (1, alpha); gamma = 2 admissible only when alpha = 2
    int n = 256;
    double half_width = 8.0;
    double dt = 0.01;  // initial step, also the adaptive cap
    double t_end = 5.0;
    double cfl_safety = 0.5;            // (0, 1]
    double blowup_linf_factor = 1e4;    // > 1
    double blowup_dt_floor = 1e-4;
    bool dealias = true;
    bool disable_interaction = false;  // linear-limit mode: pure semigroup evolution

    double record_dt = 0.02;
    std::vector<double> lp_list = {2.0};
    int morrey_every = 0;  // Morrey norm every k-th record; 0 disables
    double morrey_p = 2.0;

    void check() const {
        require(d >= 2 && d <= 3, "SimParams: d must be 2 or 3");
        require(alpha > 1.0 && alpha <= 2.0, "SimParams: alpha must lie in (1, 2]");
        require(beta > 1.0 && beta <= d, "SimParams: beta must lie in (1, d]");
        require(gamma > 1.0, "SimParams: gamma must exceed 1");
        if (alpha == 2.0)
            require(gamma <= 2.0, "SimParams: gamma must lie in (1, 2] for classical diffusion");
        else
            require(gamma < alpha,
                    "SimParams: gamma must lie below alpha; moments of order gamma >= alpha "
                    "are infinite under alpha-stable diffusion (heavy kernel tails)");
        require(dt > 0.0 && t_end > 0.0, "SimParams: dt and t_end must be positive");
        require(cfl_safety > 0.0 && cfl_safety <= 1.0, "SimParams: cfl_safety must lie in (0, 1]");
        require(blowup_linf_factor > 1.0, "SimParams: blowup_linf_factor must exceed 1");
        require(blowup_dt_floor > 0.0, "SimParams: blowup_dt_floor must be positive");
        require(record_dt > 0.0, "SimParams: record_dt must be positive");
    }

    Grid grid() const { return Grid::make(d, n, half_width); }
};

enum class RunStatus { running, completed, blowup_detected, diverged };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::running: return "running";
        case RunStatus::completed: return "completed";
        case RunStatus::blowup_detected: return "blowup_detected";
        default: return "diverged";
    }
}

struct MomentSeries {
    std::vector<double> t;
    std::vector<double> mass;
    std::vector<double> moment_raw;  // w_gamma, plain |x|^gamma moment
    std::vector<double> moment_reg;  // w, the regularized integral of phi_gamma u
    std::vector<double> linf;
    std::vector<double> min_value;
    std::vector<double> dt_used;
    std::vector<std::vector<double>> lp;  // one entry per lp_list
    std::vector<double> morrey;           // NaN where not sampled
    std::vector<double> lp_list;
    std::size_t size() const { return t.size(); }
};

struct SimState {
    double t = 0.0;
    Field u;
    RunStatus status = RunStatus::running;
};

struct PositivityReport {
    double worst_min = 0.0;
    double worst_ratio = 0.0;  // min / ||u||_inf at the worst sample
    double t_at = 0.0;
    bool flagged = false;  // below -1e-6 * ||u||_inf: beyond truncation noise
};

inline PositivityReport positivity_monitor(const MomentSeries& series) {
    PositivityReport rep;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double scale = std::max(series.linf[i], 1e-300);
        const double ratio = series.min_value[i] / scale;
        if (ratio < rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_min = series.min_value[i];
            rep.t_at = series.t[i];
        }
    }
    rep.flagged = rep.worst_ratio < -1e-6;
    return rep;
}

struct RunResult {
    SimState state;
    MomentSeries series;  // cadence samples of numerically valid states only
    BlowupReport report;
    double linf_growth_factor = 1.0;  // ||u||_inf at the end over ||u0||_inf
};

// Every a-priori criterion whose hypotheses the parameter set satisfies.
inline std::vector<CriterionVerdict> evaluate_criteria(const Field& u0, const SimParams& p,
                                                       const CriteriaConstants& constants) {
    std::vector<CriterionVerdict> out;
    const double ex = p.alpha + p.beta - 2.0;
    if (ex > 0.0 && ex <= p.d)
        out.push_back(check_smallness(u0, p.d, p.alpha, p.beta, constants.epsilon));
    if (p.alpha == 2.0 && std::abs(p.beta - p.d) < 1e-12)
        out.push_back(check_mass_threshold(u0, p.d, p.beta));
    if (p.alpha + p.beta < p.d + 2.0 && p.gamma < p.alpha)
        out.push_back(check_concentration(u0, p.d, p.alpha, p.beta, p.gamma, constants.conc_c));
    if (p.d == 2 && p.alpha == 2.0 && p.beta == 2.0 && p.gamma < 2.0)
        out.push_back(check_moment_mass_threshold(u0, p.gamma, constants));
    return out;
}

// Exponential two-stage integrator for the mild form of the evolution:
// the stiff diffusion multiplier is applied exactly, the nonlinear flux
// divergence enters through the phi-function weights (predictor at the left
// endpoint, corrector at the right).
class Solver {
  public:
    explicit Solver(const SimParams& params, const CriteriaConstants& constants = {})
        : p_(params), constants_(constants), grid_(params.grid()),
          symbols_(SymbolTable::make(grid_, params.alpha, params.beta)) {
        p_.check();
        const std::size_t nn = grid_.size();
        weight_values_.resize(nn);
        const WeightFunction w(p_.gamma);
        for (std::size_t i = 0; i < nn; ++i) weight_values_[i] = w.value(grid_.node(i), grid_.d);
    }

    const SimParams& params() const { return p_; }
    const Grid& grid() const { return grid_; }

    // Drift field B(u) through the cached symbols.
    std::vector<Field> drift(const Field& u) const {
        const Spectrum u_hat = fft_forward(u);
        return drift_from_spectrum(u_hat);
    }

    double drift_sup(const Field& u) const {
        if (p_.disable_interaction) return 0.0;
        const auto b = drift(u);
        double m = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            double mag2 = 0.0;
            for (int j = 0; j < grid_.d; ++j) mag2 += b[j].values[i] * b[j].values[i];
            m = std::max(m, mag2);
        }
        return std::sqrt(m);
    }

    struct AdaptedDt {
        double dt = 0.0;
        bool at_floor = false;
    };

    // dt = min(cfl * h / ||B||_inf, dt_cap), clamped to the floor with a flag.
    AdaptedDt adapt_dt_from_sup(double b_sup) const {
        AdaptedDt a;
        a.dt = p_.dt;
        if (b_sup > 0.0) a.dt = std::min(p_.cfl_safety * grid_.spacing / b_sup, p_.dt);
        if (a.dt <= p_.blowup_dt_floor) {
            a.dt = p_.blowup_dt_floor;
            a.at_floor = true;
        }
        return a;
    }

    AdaptedDt adapt_dt(const SimState& s) const { return adapt_dt_from_sup(drift_sup(s.u)); }

    // One step of size dt. Marks the state diverged if non-finite values
    // appear; the zero mode is untouched by construction, so the discrete
    // mass is conserved exactly.
    void step(SimState& s, double dt) {
        require(s.status == RunStatus::running, "step: state is not running");
        require(dt > 0.0, "step: dt must be positive");
        Spectrum u_hat = fft_forward(s.u);
        step_spectrum(u_hat, s.u, dt);
        s.u = fft_inverse(grid_, std::move(u_hat));
        s.t += dt;
        if (!all_finite_quiet(s.u)) s.status = RunStatus::diverged;
    }

    // Integrate from u0 until t_end, a detected blow-up, or divergence.
    // `on_record` receives every recorded state (diagnostic snapshots).
    RunResult run(const Field& u0,
                  const std::function<void(double, const Field&)>& on_record = {}) {
        validate(u0);
        require(u0.grid == grid_, "run: initial condition grid mismatch");
        require(min_value(u0) >= -1e-12 * std::max(1.0, linf_norm(u0)),
                "run: initial condition must be nonnegative");

        RunResult res;
        res.state.u = u0;
        res.state.t = 0.0;
        res.series.lp_list = p_.lp_list;
        res.report.verdicts = evaluate_criteria(u0, p_, constants_);

        const double linf0 = linf_norm(u0);
        double next_record = 0.0;
        int record_index = 0;

        record(res, p_.dt, next_record, record_index, on_record);

        const double t_eps = 1e-12 * p_.t_end;
        while (res.state.status == RunStatus::running && res.state.t < p_.t_end - t_eps) {
            Spectrum u_hat = fft_forward(res.state.u);
            const double b_sup = p_.disable_interaction ? 0.0 : drift_sup_spectral(u_hat);
            const AdaptedDt adapted = adapt_dt_from_sup(b_sup);
            const double dt = std::min(adapted.dt, p_.t_end - res.state.t);

            step_spectrum(u_hat, res.state.u, dt);
            res.state.u = fft_inverse(grid_, std::move(u_hat));
            res.state.t += dt;

            if (!all_finite_quiet(res.state.u)) {
                res.state.status = RunStatus::diverged;
                break;
            }
            // Detection state: growth past the factor with the step at its
            // floor. Such a state is already past the resolvable regime, so
            // it is reported but not appended to the diagnostic series.
            if (linf0 > 0.0 && adapted.at_floor &&
                linf_norm(res.state.u) >= p_.blowup_linf_factor * linf0) {
                res.state.status = RunStatus::blowup_detected;
                break;
            }
            if (res.state.t >= next_record - t_eps)
                record(res, dt, next_record, record_index, on_record);
        }

        if (res.state.status == RunStatus::running) {
            res.state.status = RunStatus::completed;
            record(res, res.series.dt_used.empty() ? p_.dt : res.series.dt_used.back(),
                   next_record, record_index, on_record, true);
        }
        if (linf0 > 0.0 && all_finite_quiet(res.state.u))
            res.linf_growth_factor = linf_norm(res.state.u) / linf0;
        res.report.observed = to_string(res.state.status);
        finalize_report(res.report);
        return res;
    }

  private:
    static bool all_finite_quiet(const Field& f) {
        for (double v : f.values)
            if (!std::isfinite(v)) return false;
        return true;
    }

    std::vector<Field> drift_from_spectrum(const Spectrum& u_hat) const {
        std::vector<Field> out;
        out.reserve(static_cast<std::size_t>(grid_.d));
        const std::complex<double> iu(0.0, 1.0);
        for (int axis = 0; axis < grid_.d; ++axis) {
            Spectrum comp(u_hat.size());
            for (std::size_t i = 0; i < u_hat.size(); ++i)
                comp[i] = u_hat[i] * (iu * symbols_.beta_symbol[i][axis]);
            out.push_back(fft_inverse(grid_, std::move(comp)));
        }
        return out;
    }

    double drift_sup_spectral(const Spectrum& u_hat) const {
        const auto b = drift_from_spectrum(u_hat);
        double m = 0.0;
        for (std::size_t i = 0; i < b[0].values.size(); ++i) {
            double mag2 = 0.0;
            for (int j = 0; j < grid_.d; ++j) mag2 += b[j].values[i] * b[j].values[i];
            m = std::max(m, mag2);
        }
        return std::sqrt(m);
    }

    // N(u) = -div(u B(u)), dealiased, in spectral space.
    Spectrum nonlinear_divergence(const Spectrum& u_hat, const Field& u_real) const {
        const auto b = drift_from_spectrum(u_hat);
        Spectrum n_hat(u_hat.size(), {0.0, 0.0});
        const std::complex<double> iu(0.0, 1.0);
        int idx[3];
        for (int axis = 0; axis < grid_.d; ++axis) {
            Field flux(grid_);
            for (std::size_t i = 0; i < flux.values.size(); ++i)
                flux.values[i] = u_real.values[i] * b[axis].values[i];
            Spectrum flux_hat = fft_forward(flux);
            for (std::size_t i = 0; i < flux_hat.size(); ++i) {
                if (p_.dealias && !symbols_.dealias_mask[i]) continue;
                grid_.decode(i, idx);
                n_hat[i] -= iu * symbols_.grad_symbol_axis[idx[axis]] * flux_hat[i];
            }
        }
        return n_hat;
    }

    void refresh_dt_tables(double dt) {
        if (dt == cached_dt_) return;
        const std::size_t nn = grid_.size();
        exp_.resize(nn);
        phi1_.resize(nn);
        phi2_.resize(nn);
        for (std::size_t i = 0; i < nn; ++i) {
            const double z = -dt * symbols_.alpha_symbol[i];
            exp_[i] = std::exp(z);
            if (std::abs(z) < 1e-5) {
                phi1_[i] = 1.0 + z * (0.5 + z / 6.0);
                phi2_[i] = 0.5 + z * (1.0 / 6.0 + z / 24.0);
            } else {
                const double em = std::expm1(z);
                phi1_[i] = em / z;
                phi2_[i] = (em - z) / (z * z);
            }
        }
        cached_dt_ = dt;
    }

    void step_spectrum(Spectrum& u_hat, const Field& u_real, double dt) {
        refresh_dt_tables(dt);
        if (p_.disable_interaction) {
            for (std::size_t i = 0; i < u_hat.size(); ++i) u_hat[i] *= exp_[i];
            return;
        }
        const Spectrum n0 = nonlinear_divergence(u_hat, u_real);
        Spectrum stage(u_hat.size());
        for (std::size_t i = 0; i < u_hat.size(); ++i)
            stage[i] = u_hat[i] * exp_[i] + dt * phi1_[i] * n0[i];
        const Field stage_real = fft_inverse(grid_, Spectrum(stage));
        const Spectrum n1 = nonlinear_divergence(stage, stage_real);
        for (std::size_t i = 0; i < u_hat.size(); ++i)
            u_hat[i] = stage[i] + dt * phi2_[i] * (n1[i] - n0[i]);
    }

    void record(RunResult& res, double dt_now, double& next_record, int& record_index,
                const std::function<void(double, const Field&)>& on_record, bool force = false) {
        const double t_eps = 1e-12 * p_.t_end;
        if (!force && res.state.t < next_record - t_eps) return;
        MomentSeries& s = res.series;
        if (!s.t.empty() && res.state.t <= s.t.back() + t_eps) {
            if (force) return;  // already recorded at this time
        }
        const Field& u = res.state.u;
        s.t.push_back(res.state.t);
        s.mass.push_back(integrate(u));
        s.moment_raw.push_back(weighted_moment(u, p_.gamma));
        double reg = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i) reg += weight_values_[i] * u.values[i];
        s.moment_reg.push_back(reg * grid_.cell_volume());
        s.linf.push_back(linf_norm(u));
        s.min_value.push_back(min_value(u));
        s.dt_used.push_back(dt_now);
        std::vector<double> lps;
        for (double p : p_.lp_list) lps.push_back(lp_norm(u, p));
        s.lp.push_back(std::move(lps));
        const bool sample_morrey =
            p_.morrey_every > 0 && (record_index % p_.morrey_every == 0);
        s.morrey.push_back(sample_morrey ? morrey_norm(u, p_.morrey_p, 4)
                                         : std::numeric_limits<double>::quiet_NaN());
        if (on_record) on_record(res.state.t, u);
        ++record_index;
        while (next_record <= res.state.t + t_eps) next_record += p_.record_dt;
    }

    SimParams p_;
    CriteriaConstants constants_;
    Grid grid_;
    SymbolTable symbols_;
    std::vector<double> weight_values_;
    double cached_dt_ = -1.0;
    std::vector<double> exp_, phi1_, phi2_;
};

inline RunResult run_simulation(const SimParams& params, const Field& u0,
                                const CriteriaConstants& constants = {},
                                const std::function<void(double, const Field&)>& on_record = {}) {
    Solver solver(params, constants);
    return solver.run(u0, on_record);
}

// Empirical blow-up mass threshold for a Gaussian profile: bisection on the
// mass between a completing and a blow-up-detected run.
struct BisectionResult {
    double lower = 0.0;   // largest mass observed to complete
    double upper = 0.0;   // smallest mass observed to blow up
    double midpoint() const { return 0.5 * (lower + upper); }
};

inline BisectionResult bisect_blowup_mass(SimParams params, double ic_width, double mass_lo,
                                          double mass_hi, int iterations) {
    params.check();
    const Grid g = params.grid();
    auto blows = [&](double mass) {
        const RunResult r = run_simulation(params, gaussian_bump(g, mass, ic_width));
        return r.state.status == RunStatus::blowup_detected ||
               r.state.status == RunStatus::diverged;
    };
    require(!blows(mass_lo), "bisect_blowup_mass: lower mass already blows up");
    require(blows(mass_hi), "bisect_blowup_mass: upper mass does not blow up");
    BisectionResult res{mass_lo, mass_hi};
    for (int i = 0; i < iterations; ++i) {
        const double mid = res.midpoint();
        if (blows(mid))
            res.upper = mid;
        else
            res.lower = mid;
    }
    return res;
}

}  // namespace fracks

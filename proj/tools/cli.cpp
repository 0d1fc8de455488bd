#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "fracks/acceptance.hpp"
#include "fracks/config.hpp"
#include "fracks/io.hpp"
#include "fracks/levy.hpp"
#include "fracks/picard.hpp"
#include "fracks/rng.hpp"
#include "fracks/solver.hpp"
#include "fracks/stable_kernel.hpp"
#include "fracks/svg.hpp"
#include "fracks/weight.hpp"

namespace fracks::cli {

namespace {

namespace fs = std::filesystem;

const char* usage_text() {
    return "usage: fracks <subcommand> [options]\n"
           "\n"
           "subcommands:\n"
           "  simulate     --config FILE [--out DIR]   integrate and dump series/report/plots\n"
           "  check        --config FILE [--out DIR]   a-priori verdicts for the initial datum\n"
           "  virial       [--out DIR] [--seed N]      weight-operator profiles and constants\n"
           "  kernel-table --alpha A --d D --t T [--out FILE] [--rmin R --rmax R --points N]\n"
           "  picard       --config FILE [--out DIR] [--p P] [--nodes M] [--iters K]\n"
           "  acceptance   [--out DIR]                 run the acceptance suite\n"
           "\n"
           "configs are JSON or key=value text; all numbers are written with 17\n"
           "significant digits; FRACKS_THREADS caps worker threads.\n";
}

std::map<std::string, std::string> parse_flags(const std::vector<std::string>& args,
                                               std::size_t start) {
    std::map<std::string, std::string> flags;
    for (std::size_t i = start; i < args.size(); ++i) {
        if (args[i].rfind("--", 0) != 0)
            throw std::invalid_argument("unexpected argument: " + args[i]);
        const std::string key = args[i].substr(2);
        if (i + 1 >= args.size())
            throw std::invalid_argument("flag --" + key + " needs a value");
        flags[key] = args[++i];
    }
    return flags;
}

std::string flag_or(const std::map<std::string, std::string>& flags, const std::string& key,
                    const std::string& fallback) {
    auto it = flags.find(key);
    return it == flags.end() ? fallback : it->second;
}

void print_verdict_table(std::ostream& out, const std::vector<CriterionVerdict>& verdicts) {
    out << "criterion                        satisfied  margin\n";
    for (const auto& v : verdicts) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-32s %-10s %s\n", v.name.c_str(),
                      v.satisfied ? "yes" : "no", format_g17(v.margin).c_str());
        out << line;
    }
}

int cmd_simulate(const std::map<std::string, std::string>& flags) {
    ExperimentConfig cfg = ExperimentConfig::load(flags.at("config"));
    if (flags.count("out")) cfg.out_dir = flags.at("out");
    const std::string digest = cfg.digest();
    fs::create_directories(cfg.out_dir);
    io_detail::write_text(cfg.out_dir + "/config.json", cfg.canonical());

    const Field u0 = cfg.build_initial_condition();
    std::cout << "initial datum: mass=" << format_g17(integrate(u0))
              << " support_ratio=" << format_g17(support_ratio(u0)) << "\n";

    Solver solver(cfg.sim, cfg.constants);
    int record_count = 0;
    const RunResult result = solver.run(u0, [&](double t, const Field& u) {
        if (cfg.snapshot_every > 0 && record_count % cfg.snapshot_every == 0) {
            char name[64];
            std::snprintf(name, sizeof(name), "/field_%06d", record_count);
            write_field(cfg.out_dir + name, u, t, digest);
        }
        ++record_count;
    });

    write_series_csv(cfg.out_dir + "/series.csv", result.series, digest);
    write_report_json(cfg.out_dir + "/report.json", result, digest);
    if (result.state.status != RunStatus::diverged)
        write_field(cfg.out_dir + "/field_final", result.state.u, result.state.t, digest);
    if (cfg.plots && result.series.size() >= 2) emit_plots(result.series, cfg.out_dir, digest);

    std::cout << "status=" << to_string(result.state.status)
              << " t=" << format_g17(result.state.t)
              << " linf_growth=" << format_g17(result.linf_growth_factor)
              << " consistent=" << (result.report.consistent ? "yes" : "NO") << "\n";
    print_verdict_table(std::cout, result.report.verdicts);
    return 0;
}

int cmd_check(const std::map<std::string, std::string>& flags) {
    ExperimentConfig cfg = ExperimentConfig::load(flags.at("config"));
    if (flags.count("out")) cfg.out_dir = flags.at("out");
    const std::string digest = cfg.digest();
    fs::create_directories(cfg.out_dir);

    const Field u0 = cfg.build_initial_condition();
    const auto verdicts = evaluate_criteria(u0, cfg.sim, cfg.constants);

    nlohmann::json j;
    j["config_digest"] = digest;
    j["mass"] = integrate(u0);
    j["support_ratio"] = support_ratio(u0);
    j["constants_provenance"] = CriteriaConstants::provenance();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : verdicts) arr.push_back(verdict_to_json(v));
    j["verdicts"] = arr;
    io_detail::write_text(cfg.out_dir + "/verdicts.json", j.dump(2) + "\n");

    print_verdict_table(std::cout, verdicts);
    std::cout << "verdicts written to " << cfg.out_dir << "/verdicts.json\n";
    return 0;
}

int cmd_virial(const std::map<std::string, std::string>& flags) {
    const std::string out_dir = flag_or(flags, "out", "out");
    const std::uint64_t seed = std::stoull(flag_or(flags, "seed", "7"));
    fs::create_directories(out_dir);

    // radial profiles of the weight's fractional Laplacian
    {
        std::string text = "alpha,gamma,r,value\n";
        for (auto [alpha, gamma] : {std::pair{1.5, 1.2}, std::pair{1.8, 1.5}})
            for (int i = 0; i <= 48; ++i) {
                const double r = i == 0 ? 0.0 : 1e-2 * std::pow(1e5, (i - 1) / 47.0);
                text += format_g17(alpha) + "," + format_g17(gamma) + "," + format_g17(r) + "," +
                        format_g17(frac_laplacian_weight_radial(r, alpha, gamma, 2)) + "\n";
            }
        io_detail::write_text(out_dir + "/flap_profiles.csv", text);
    }
    // sup-norm constants over the admissible wedge
    {
        std::string text = "alpha,gamma,c2,argmax_radius\n";
        for (double alpha : {1.5, 1.8})
            for (double gamma : {1.1, 1.3, 1.5}) {
                if (gamma >= alpha) continue;
                const SupNormResult r = weight_sup_norm(alpha, gamma, 2);
                text += format_g17(alpha) + "," + format_g17(gamma) + "," + format_g17(r.value) +
                        "," + format_g17(r.argmax_radius) + "\n";
            }
        io_detail::write_text(out_dir + "/c2_table.csv", text);
    }
    // randomized convexity-gap infima
    {
        Rng rng(seed);
        std::string text = "gamma,k_hat,pairs\n";
        for (double gamma : {1.2, 1.5, 1.8, 2.0}) {
            const WeightFunction w(gamma);
            double khat = std::numeric_limits<double>::infinity();
            const int pairs = 100000;
            for (int t = 0; t < pairs; ++t) {
                const Point x{rng.uniform(-8, 8), rng.uniform(-8, 8), 0};
                const Point y{rng.uniform(-8, 8), rng.uniform(-8, 8), 0};
                if (x == y) continue;
                const auto gap = convexity_gap(w, x, y, 2);
                if (gap.rhs_over_k > 0.0) khat = std::min(khat, gap.lhs / gap.rhs_over_k);
            }
            text += format_g17(gamma) + "," + format_g17(khat) + "," + std::to_string(pairs) + "\n";
        }
        io_detail::write_text(out_dir + "/khat.csv", text);
    }
    std::cout << "virial tables written to " << out_dir << "\n";
    return 0;
}

int cmd_kernel_table(const std::map<std::string, std::string>& flags) {
    const double alpha = std::stod(flags.at("alpha"));
    const int d = std::stoi(flags.at("d"));
    const double t = std::stod(flags.at("t"));
    const double rmin = std::stod(flag_or(flags, "rmin", "0.01"));
    const double rmax = std::stod(flag_or(flags, "rmax", "50"));
    const int points = std::stoi(flag_or(flags, "points", "96"));
    require(points >= 2 && rmax > rmin && rmin > 0.0, "kernel-table: bad radius ladder");

    std::string text = "radius,p_alpha\n";
    for (int i = 0; i < points; ++i) {
        const double r = rmin * std::pow(rmax / rmin, static_cast<double>(i) / (points - 1));
        text += format_g17(r) + "," + format_g17(stable_kernel_value(r, t, alpha, d)) + "\n";
    }
    if (flags.count("out")) {
        io_detail::write_text(flags.at("out"), text);
        std::cout << "kernel table written to " << flags.at("out") << "\n";
    } else {
        std::cout << text;
    }
    return 0;
}

int cmd_picard(const std::map<std::string, std::string>& flags) {
    ExperimentConfig cfg = ExperimentConfig::load(flags.at("config"));
    if (flags.count("out")) cfg.out_dir = flags.at("out");
    fs::create_directories(cfg.out_dir);

    PicardOptions opt;
    opt.p = std::stod(flag_or(flags, "p", "2"));
    opt.time_nodes = std::stoi(flag_or(flags, "nodes", "64"));
    const int iters = std::stoi(flag_or(flags, "iters", "8"));

    const Field u0 = cfg.build_initial_condition();
    const PicardResult r = picard_iterate(cfg.sim, u0, cfg.sim.t_end, iters, opt);

    nlohmann::json j;
    j["config_digest"] = cfg.digest();
    j["p"] = opt.p;
    j["time_nodes"] = opt.time_nodes;
    j["iterations"] = r.iterations;
    j["contracted"] = r.contracted;
    j["distances"] = r.distances;
    j["ratios"] = r.ratios;
    j["time_exponent"] = picard_time_exponent(cfg.sim.d, cfg.sim.alpha, cfg.sim.beta, opt.p);
    io_detail::write_text(cfg.out_dir + "/picard.json", j.dump(2) + "\n");

    std::cout << "iterations=" << r.iterations << " contracted=" << (r.contracted ? "yes" : "NO");
    if (!r.ratios.empty()) std::cout << " first_ratio=" << format_g17(r.ratios.front());
    std::cout << "\nreport written to " << cfg.out_dir << "/picard.json\n";
    return 0;
}

int cmd_acceptance(const std::map<std::string, std::string>& flags) {
    const auto cases = run_acceptance(std::cout);
    if (flags.count("out")) {
        fs::create_directories(flags.at("out"));
        std::string text;
        for (const auto& c : cases)
            text += std::string(c.pass ? "[PASS] " : "[FAIL] ") + c.name + " -- " + c.detail + "\n";
        io_detail::write_text(flags.at("out") + "/acceptance.txt", text);
    }
    for (const auto& c : cases)
        if (!c.pass) return 1;
    return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
    if (args.empty()) {
        std::cerr << usage_text();
        return 64;
    }
    const std::string& cmd = args[0];
    try {
        const auto flags = parse_flags(args, 1);
        if (cmd == "simulate") return cmd_simulate(flags);
        if (cmd == "check") return cmd_check(flags);
        if (cmd == "virial") return cmd_virial(flags);
        if (cmd == "kernel-table") return cmd_kernel_table(flags);
        if (cmd == "picard") return cmd_picard(flags);
        if (cmd == "acceptance") return cmd_acceptance(flags);
        std::cerr << "unknown subcommand: " << cmd << "\n\n" << usage_text();
        return 64;
    } catch (const std::out_of_range&) {
        std::cerr << "missing required flag for '" << cmd << "'\n\n" << usage_text();
        return 64;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace fracks::cli

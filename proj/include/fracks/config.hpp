#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fracks/criteria.hpp"
#include "fracks/io.hpp"
#include "fracks/solver.hpp"

namespace fracks {

// Full experiment description: solver parameters, initial-condition recipe,
// output controls, and criteria-constant overrides. Serializes canonically
// (sorted keys, 17-digit numbers) so a config round-trips bit-exactly and its
// digest is stable.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    SimParams sim;

    std::string ic = "gaussian";  // gaussian | ring | two_bump | file
    double ic_mass = 4.0 * pi;
    double ic_width = 0.5;
    std::vector<double> ic_center = {0.0, 0.0, 0.0};
    double ic_radius = 1.0;                          // ring
    std::vector<double> ic_center2 = {1.0, 0.0, 0.0};  // two_bump
    std::string ic_file;                             // file (base path, no extension)

    std::string out_dir = "out";
    bool plots = true;
    int snapshot_every = 0;  // dump a field every k-th record; 0 = final only

    CriteriaConstants constants;

    Field build_initial_condition() const {
        const Grid g = sim.grid();
        Point c{0, 0, 0}, c2{0, 0, 0};
        for (int j = 0; j < g.d; ++j) {
            if (j < static_cast<int>(ic_center.size())) c[j] = ic_center[j];
            if (j < static_cast<int>(ic_center2.size())) c2[j] = ic_center2[j];
        }
        if (ic == "gaussian") return gaussian_bump(g, ic_mass, ic_width, c);
        if (ic == "ring") return ring_bump(g, ic_mass, ic_radius, ic_width, c);
        if (ic == "two_bump") return two_bump(g, ic_mass, ic_width, c, c2);
        if (ic == "file") {
            Field f = read_field(ic_file);
            require(f.grid == g, "config: field file grid does not match the sim grid");
            return f;
        }
        throw std::invalid_argument("config: unknown initial-condition recipe: " + ic);
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["seed"] = seed;
        j["d"] = sim.d;
        j["alpha"] = sim.alpha;
        j["beta"] = sim.beta;
        j["gamma"] = sim.gamma;
        j["n"] = sim.n;
        j["L"] = sim.half_width;
        j["dt"] = sim.dt;
        j["T"] = sim.t_end;
        j["cfl_safety"] = sim.cfl_safety;
        j["blowup_linf_factor"] = sim.blowup_linf_factor;
        j["blowup_dt_floor"] = sim.blowup_dt_floor;
        j["dealias"] = sim.dealias;
        j["disable_interaction"] = sim.disable_interaction;
        j["record_dt"] = sim.record_dt;
        j["lp_norms"] = sim.lp_list;
        j["morrey_every"] = sim.morrey_every;
        j["morrey_p"] = sim.morrey_p;
        j["ic"] = ic;
        j["ic_mass"] = ic_mass;
        j["ic_width"] = ic_width;
        j["ic_center"] = ic_center;
        j["ic_radius"] = ic_radius;
        j["ic_center2"] = ic_center2;
        j["ic_file"] = ic_file;
        j["out_dir"] = out_dir;
        j["plots"] = plots;
        j["snapshot_every"] = snapshot_every;
        j["epsilon"] = constants.epsilon;
        j["conc_c"] = constants.conc_c;
        j["mass_gamma"] = constants.mass_gamma;
        j["moment_trigger"] = constants.moment_trigger;
        return j;
    }

    static ExperimentConfig from_json(const nlohmann::json& j) {
        ExperimentConfig c;
        c.seed = j.value("seed", std::uint64_t{1});
        c.sim.d = j.value("d", 2);
        c.sim.alpha = j.value("alpha", 2.0);
        c.sim.beta = j.value("beta", 2.0);
        c.sim.gamma = j.value("gamma", 1.5);
        c.sim.n = j.value("n", 256);
        c.sim.half_width = j.value("L", 8.0);
        c.sim.dt = j.value("dt", 0.01);
        c.sim.t_end = j.value("T", 5.0);
        c.sim.cfl_safety = j.value("cfl_safety", 0.5);
        c.sim.blowup_linf_factor = j.value("blowup_linf_factor", 1e4);
        c.sim.blowup_dt_floor = j.value("blowup_dt_floor", 1e-4);
        c.sim.dealias = j.value("dealias", true);
        c.sim.disable_interaction = j.value("disable_interaction", false);
        c.sim.record_dt = j.value("record_dt", 0.02);
        c.sim.lp_list = j.value("lp_norms", std::vector<double>{2.0});
        c.sim.morrey_every = j.value("morrey_every", 0);
        c.sim.morrey_p = j.value("morrey_p", 2.0);
        c.ic = j.value("ic", std::string("gaussian"));
        c.ic_mass = j.value("ic_mass", 4.0 * pi);
        c.ic_width = j.value("ic_width", 0.5);
        c.ic_center = j.value("ic_center", std::vector<double>{0, 0, 0});
        c.ic_radius = j.value("ic_radius", 1.0);
        c.ic_center2 = j.value("ic_center2", std::vector<double>{1, 0, 0});
        c.ic_file = j.value("ic_file", std::string());
        c.out_dir = j.value("out_dir", std::string("out"));
        c.plots = j.value("plots", true);
        c.snapshot_every = j.value("snapshot_every", 0);
        c.constants.epsilon = j.value("epsilon", CriteriaConstants{}.epsilon);
        c.constants.conc_c = j.value("conc_c", CriteriaConstants{}.conc_c);
        c.constants.mass_gamma = j.value("mass_gamma", CriteriaConstants{}.mass_gamma);
        c.constants.moment_trigger = j.value("moment_trigger", CriteriaConstants{}.moment_trigger);
        return c;
    }

    // Canonical serialization: nlohmann objects iterate in key order, numbers
    // printed below with 17 significant digits via the round-trip dump.
    std::string canonical() const { return to_json().dump(2) + "\n"; }

    // The digest identifies the experiment, not its destination: the output
    // directory is excluded, so rerouted reruns stay byte-identical.
    std::string digest() const {
        nlohmann::json j = to_json();
        j.erase("out_dir");
        return digest_hex(j.dump(2));
    }

    // key = value lines; '#' comments; vectors comma-separated; "inf" allowed.
    static ExperimentConfig parse_kv(const std::string& text) {
        nlohmann::json j;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r\"");
                const auto b = s.find_last_not_of(" \t\r\"");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty()) continue;
            if (key == "ic" || key == "ic_file" || key == "out_dir") {
                j[key] = val;
            } else if (key == "dealias" || key == "disable_interaction" || key == "plots") {
                j[key] = (val == "true" || val == "1" || val == "yes");
            } else if (key == "d" || key == "n" || key == "morrey_every" ||
                       key == "snapshot_every") {
                j[key] = std::stoi(val);
            } else if (key == "seed") {
                j[key] = static_cast<std::uint64_t>(std::stoull(val));
            } else if (key == "lp_norms" || key == "ic_center" || key == "ic_center2") {
                std::vector<double> vec;
                std::istringstream items(val);
                std::string item;
                while (std::getline(items, item, ','))
                    vec.push_back(item.find("inf") != std::string::npos
                                      ? std::numeric_limits<double>::infinity()
                                      : std::stod(item));
                j[key] = vec;
            } else {
                j[key] = std::stod(val);
            }
        }
        return from_json(j);
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config: " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        // sniff JSON vs key=value
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{')
            return from_json(nlohmann::json::parse(text));
        return parse_kv(text);
    }
};

}  // namespace fracks

#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fracks/grid.hpp"
#include "fracks/solver.hpp"

namespace fracks {

// 17 significant digits: lossless round-trip for 64-bit floats.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string digest_hex(const std::string& data) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

namespace io_detail {

inline void ensure_little_endian() {
    const std::uint16_t probe = 0x0102;
    unsigned char first;
    std::memcpy(&first, &probe, 1);
    if (first != 0x02)
        throw std::runtime_error("field I/O: raw format is little-endian; unsupported host order");
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace io_detail

// Raw little-endian float64 array at <base>.f64, JSON sidecar {d, n, L, time}
// at <base>.json.
inline void write_field(const std::string& base, const Field& f, double time,
                        const std::string& config_digest = "") {
    io_detail::ensure_little_endian();
    std::ofstream raw(base + ".f64", std::ios::binary);
    if (!raw) throw std::runtime_error("cannot open for writing: " + base + ".f64");
    raw.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!raw) throw std::runtime_error("write failed: " + base + ".f64");

    nlohmann::json side;
    side["d"] = f.grid.d;
    side["n"] = f.grid.n;
    side["L"] = f.grid.half_width;
    side["time"] = time;
    if (!config_digest.empty()) side["config_digest"] = config_digest;
    io_detail::write_text(base + ".json", side.dump(2) + "\n");
}

inline Field read_field(const std::string& base, double* time_out = nullptr) {
    io_detail::ensure_little_endian();
    std::ifstream side_in(base + ".json");
    if (!side_in) throw std::runtime_error("cannot open: " + base + ".json");
    nlohmann::json side = nlohmann::json::parse(side_in);
    const Grid g = Grid::make(side.at("d").get<int>(), side.at("n").get<int>(),
                              side.at("L").get<double>());
    if (time_out) *time_out = side.value("time", 0.0);

    std::ifstream raw(base + ".f64", std::ios::binary);
    if (!raw) throw std::runtime_error("cannot open: " + base + ".f64");
    Field f(g);
    raw.read(reinterpret_cast<char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (raw.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(double)))
        throw std::runtime_error("truncated field file: " + base + ".f64");
    return f;
}

// CSV of a 1D slice along `axis` through the given per-axis indices.
inline void write_slice_csv(const std::string& path, const Field& f, int axis,
                            const int fixed_idx[3], const std::string& config_digest = "") {
    const Grid& g = f.grid;
    require(axis >= 0 && axis < g.d, "write_slice_csv: bad axis");
    std::string text = "# config_digest=" + config_digest + "\nx,u\n";
    int idx[3] = {fixed_idx[0], fixed_idx[1], fixed_idx[2]};
    for (int i = 0; i < g.n; ++i) {
        idx[axis] = i;
        std::size_t flat = 0;
        for (int j = 0; j < g.d; ++j)
            flat = flat * static_cast<std::size_t>(g.n) + static_cast<std::size_t>(idx[j]);
        text += format_g17(g.coord(i)) + "," + format_g17(f.values[flat]) + "\n";
    }
    io_detail::write_text(path, text);
}

inline void write_series_csv(const std::string& path, const MomentSeries& s,
                             const std::string& config_digest = "") {
    std::string text = "# config_digest=" + config_digest + "\n";
    text += "t,mass,moment_raw,moment_reg,linf,min,dt";
    for (double p : s.lp_list)
        text += ",lp_" + (std::isinf(p) ? std::string("inf") : format_g17(p));
    text += ",morrey\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        text += format_g17(s.t[i]) + "," + format_g17(s.mass[i]) + "," +
                format_g17(s.moment_raw[i]) + "," + format_g17(s.moment_reg[i]) + "," +
                format_g17(s.linf[i]) + "," + format_g17(s.min_value[i]) + "," +
                format_g17(s.dt_used[i]);
        for (double v : s.lp[i]) text += "," + format_g17(v);
        text += "," + (std::isnan(s.morrey[i]) ? std::string("") : format_g17(s.morrey[i]));
        text += "\n";
    }
    io_detail::write_text(path, text);
}

inline nlohmann::json verdict_to_json(const CriterionVerdict& v) {
    nlohmann::json j;
    j["name"] = v.name;
    j["satisfied"] = v.satisfied;
    j["margin"] = v.margin;
    j["inputs"] = v.inputs;
    j["note"] = v.note;
    return j;
}

inline void write_report_json(const std::string& path, const RunResult& r,
                              const std::string& config_digest = "") {
    nlohmann::json j;
    j["observed"] = r.report.observed;
    j["consistent"] = r.report.consistent;
    j["final_time"] = r.state.t;
    j["linf_growth_factor"] = r.linf_growth_factor;
    j["constants_provenance"] = CriteriaConstants::provenance();
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : r.report.verdicts) verdicts.push_back(verdict_to_json(v));
    j["verdicts"] = verdicts;
    const PositivityReport pos = positivity_monitor(r.series);
    j["positivity"] = {{"worst_min", pos.worst_min},
                       {"worst_ratio", pos.worst_ratio},
                       {"t_at", pos.t_at},
                       {"flagged", pos.flagged}};
    if (!config_digest.empty()) j["config_digest"] = config_digest;
    io_detail::write_text(path, j.dump(2) + "\n");
}

}  // namespace fracks

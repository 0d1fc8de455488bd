#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "../tools/cli.hpp"
#include "fracks/common.hpp"

namespace fs = std::filesystem;
using fracks::cli::dispatch;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fracks_cli" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("unknown subcommand and missing flags exit with 64") {
    CHECK(dispatch({}) == 64);
    CHECK(dispatch({"frobnicate"}) == 64);
    CHECK(dispatch({"simulate"}) == 64);  // --config missing
}

TEST_CASE("domain errors exit with 1, I/O errors with 2") {
    TempDir tmp;
    write_text(tmp.path / "bad.cfg", "alpha = 0.5\nn = 32\nT = 0.05\n");  // alpha out of range
    CHECK(dispatch({"simulate", "--config", (tmp.path / "bad.cfg").string(), "--out",
                    (tmp.path / "o").string()}) == 1);
    CHECK(dispatch({"simulate", "--config", (tmp.path / "missing.cfg").string()}) == 2);
    CHECK(dispatch({"kernel-table", "--alpha", "1.5", "--d", "2", "--t", "0"}) == 1);
}

TEST_CASE("check emits verdicts with the expected mass-threshold margin") {
    TempDir tmp;
    write_text(tmp.path / "super.cfg",
               "d = 2\nalpha = 2.0\nbeta = 2.0\ngamma = 1.5\nn = 64\nL = 8.0\n"
               "ic = gaussian\nic_mass = 37.699111843077517\nic_width = 0.5\n");
    const std::string out = (tmp.path / "out").string();
    REQUIRE(dispatch({"check", "--config", (tmp.path / "super.cfg").string(), "--out", out}) == 0);

    std::ifstream in(out + "/verdicts.json");
    REQUIRE(in.good());
    const nlohmann::json j = nlohmann::json::parse(in);
    bool found = false;
    for (const auto& v : j.at("verdicts")) {
        if (v.at("name") == "mass_threshold") {
            found = true;
            CHECK(v.at("satisfied").get<bool>());
            // margin = 12 pi - threshold, threshold calibrated within 1% of 8 pi
            CHECK(v.at("margin").get<double>() == Catch::Approx(4.0 * fracks::pi).margin(0.3));
        }
    }
    CHECK(found);
    CHECK(j.at("config_digest").get<std::string>().size() == 16);
}

TEST_CASE("simulate produces series, report, field dumps, and plots") {
    TempDir tmp;
    write_text(tmp.path / "run.cfg",
               "d = 2\nalpha = 2.0\nbeta = 2.0\ngamma = 1.5\nn = 32\nL = 4.0\n"
               "dt = 0.01\nT = 0.08\nrecord_dt = 0.02\nic = gaussian\nic_mass = 2.0\n"
               "ic_width = 0.5\nplots = true\n");
    const std::string out = (tmp.path / "out").string();
    REQUIRE(dispatch({"simulate", "--config", (tmp.path / "run.cfg").string(), "--out", out}) == 0);
    for (const char* name : {"/config.json", "/series.csv", "/report.json", "/field_final.f64",
                             "/field_final.json", "/mass.svg", "/linf.svg", "/dt.svg",
                             "/moment.svg"})
        CHECK(fs::exists(out + std::string(name)));

    std::ifstream in(out + "/report.json");
    const nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.at("observed") == "completed");
    CHECK(j.at("consistent").get<bool>());

    // the series CSV must carry a constant mass column
    std::ifstream csv(out + "/series.csv");
    std::string line;
    std::getline(csv, line);  // digest
    std::getline(csv, line);  // header
    double mass0 = -1;
    while (std::getline(csv, line)) {
        const auto c1 = line.find(','), c2 = line.find(',', line.find(',') + 1);
        const double mass = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        if (mass0 < 0) mass0 = mass;
        CHECK(mass == Catch::Approx(mass0).epsilon(1e-10));
    }
}

TEST_CASE("check accepts a dumped field file as the initial condition") {
    TempDir tmp;
    write_text(tmp.path / "run.cfg",
               "d = 2\nalpha = 2.0\nbeta = 2.0\ngamma = 1.5\nn = 32\nL = 4.0\n"
               "dt = 0.01\nT = 0.04\nrecord_dt = 0.02\nic = gaussian\nic_mass = 2.0\n"
               "ic_width = 0.5\nplots = false\n");
    const std::string out = (tmp.path / "out").string();
    REQUIRE(dispatch({"simulate", "--config", (tmp.path / "run.cfg").string(), "--out", out}) == 0);

    write_text(tmp.path / "fromfile.cfg",
               "d = 2\nalpha = 2.0\nbeta = 2.0\ngamma = 1.5\nn = 32\nL = 4.0\n"
               "ic = file\nic_file = " + out + "/field_final\n");
    const std::string out2 = (tmp.path / "out2").string();
    REQUIRE(dispatch({"check", "--config", (tmp.path / "fromfile.cfg").string(), "--out",
                      out2}) == 0);
    std::ifstream in(out2 + "/verdicts.json");
    REQUIRE(in.good());
    const nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.at("mass").get<double>() == Catch::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("kernel-table writes the CSV ladder") {
    TempDir tmp;
    const std::string out = (tmp.path / "kernel.csv").string();
    REQUIRE(dispatch({"kernel-table", "--alpha", "2", "--d", "2", "--t", "1", "--points", "8",
                      "--out", out}) == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "radius,p_alpha");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 8);
}

TEST_CASE("picard subcommand reports contraction") {
    TempDir tmp;
    write_text(tmp.path / "pic.cfg",
               "d = 2\nalpha = 1.5\nbeta = 2.0\ngamma = 1.3\nn = 32\nL = 4.0\n"
               "T = 0.05\nic = gaussian\nic_mass = 0.5\nic_width = 0.5\n");
    const std::string out = (tmp.path / "out").string();
    REQUIRE(dispatch({"picard", "--config", (tmp.path / "pic.cfg").string(), "--out", out,
                      "--nodes", "32", "--iters", "6"}) == 0);
    std::ifstream in(out + "/picard.json");
    REQUIRE(in.good());
    const nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.at("contracted").get<bool>());
    CHECK(j.at("time_exponent").get<double>() == Catch::Approx(1.0 - 1.0 / 1.5));
}

TEST_CASE("virial subcommand writes the three tables") {
    TempDir tmp;
    const std::string out = (tmp.path / "vt").string();
    REQUIRE(dispatch({"virial", "--out", out}) == 0);
    for (const char* name : {"/flap_profiles.csv", "/c2_table.csv", "/khat.csv"})
        CHECK(fs::exists(out + std::string(name)));
    // K-hat estimates are positive and the quadratic case sits at 6
    std::ifstream in(out + "/khat.csv");
    std::string line;
    std::getline(in, line);
    double khat_quadratic = 0.0;
    while (std::getline(in, line)) {
        const auto c1 = line.find(','), c2 = line.find(',', line.find(',') + 1);
        const double gamma = std::stod(line.substr(0, c1));
        const double khat = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(khat > 0.0);
        if (gamma == 2.0) khat_quadratic = khat;
    }
    CHECK(khat_quadratic == Catch::Approx(6.0).epsilon(1e-10));
}

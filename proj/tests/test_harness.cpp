#include <doctest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hypball/harness.hpp"
#include "hypball/superlevel.hpp"

using namespace hypball;
using namespace hypball::harness;

namespace {

std::vector<std::vector<double>> read_csv(const std::string& path, std::string& header) {
    std::ifstream is(path);
    std::getline(is, header);
    std::vector<std::vector<double>> rows;
    for (std::string line; std::getline(is, line);) {
        std::vector<double> row;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("hypball_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("FNV-1a digests") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("config parsing and validation") {
    SuiteConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    const auto c = config_from_json(R"({"seed": 7, "n": [1, 3], "suites": ["geometry", "norms"]})");
    CHECK(c.seed == 7);
    CHECK(c.n_list == std::vector<int>{1, 3});
    CHECK(c.suites == std::set<Suite>{Suite::geometry, Suite::norms});
    CHECK(c.samples == SuiteConfig{}.samples);
    CHECK(config_from_json(config_to_json(c)).seed == 7);
    CHECK_THROWS_AS(config_from_json(R"({"sed": 7})"), ConfigError);
    CHECK_THROWS_AS(config_from_json("[1]"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"suites": ["geometri"]})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"seed": "x"})"), ConfigError);
    cfg.suites.clear();
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.samples = 10;
    CHECK_THROWS_AS(plan(cfg), ConfigError);
}

TEST_CASE("records and exit codes") {
    std::vector<Check> checks{
        {"b.pass", "t", "x", [] { return Outcome{-1e-12, 1e-10, ""}; }},
        {"a.fail", "t", "y", [] { return Outcome{-1.0, 0.5, ""}; }},
        {"c.throw", "t", "z", []() -> Outcome { throw std::runtime_error("boom"); }},
    };
    const auto r = run_checks(checks, 2);
    REQUIRE(r.records.size() == 3);
    CHECK(r.records[0].id == "a.fail");
    CHECK_FALSE(r.records[0].pass);
    CHECK(r.records[1].pass);
    CHECK_FALSE(r.records[2].pass);
    CHECK(r.records[2].detail.find("boom") != std::string::npos);
    CHECK(r.exit_code == 1);
    CHECK(run_checks({checks[0]}, 1).exit_code == 0);
}

TEST_CASE("geometry suite: passes, fast, deterministic") {
    SuiteConfig cfg;
    cfg.suites = {Suite::geometry};
    cfg.n_list = {1, 2, 3};
    const auto start = std::chrono::steady_clock::now();
    const auto a = run_suite(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(a.exit_code == 0);
    CHECK(seconds < 10.0);
    for (const auto& r : a.records) CHECK_MESSAGE(r.pass, r.id << " " << r.detail);

    cfg.threads = 1;
    const auto b = run_suite(cfg);
    CHECK(report_json(cfg, a.records) == report_json(cfg, b.records));
    const std::string text = report_json(cfg, a.records);
    CHECK(text.find("runtime") == std::string::npos);
    CHECK(text.find(std::string(kReportSchema)) != std::string::npos);
    CHECK(timings_json(a.records).find("runtime_s") != std::string::npos);
}

TEST_CASE("curve dumps") {
    const McConfig rays{42, 1024, 48};
    const auto dir = scratch("curves");
    std::string header;

    const LevelFunction flat(Polynomial::constant(1, 1.0), 1.0, 1.0);
    const auto grid = superlevel::default_t_grid(1.0, 32);
    const auto ff = dump_curves(flat, grid, rays, dir.string(), "flat");
    auto rows = read_csv(ff.distribution, header);
    CHECK(header == "t,mu,mu_stderr,g,g_stderr,weak_type_bound");
    REQUIRE(rows.size() == grid.size());
    for (const auto& row : rows) {
        CHECK(std::abs(row[3] - 1.0) <= 3.0 * row[4] + 1e-10);
        // f = 1 attains the weak-type bound: (1 - t)/t = (1/t - 1)^1.
        CHECK(row[1] == doctest::Approx(row[5]).epsilon(1e-8));
    }
    CHECK(read_csv(ff.rearrangement, header).size() > 2);
    CHECK(header == "s,ustar");

    // u = |z|^2 (1 - |z|^2): {u > t} is the annulus x_- < |z|^2 < x_+ with x_pm = (1 pm sqrt(1 - 4t))/2,
    // of hyperbolic volume x_+/(1 - x_+) - x_-/(1 - x_-).
    const LevelFunction z(Polynomial::coordinate(1, 0), 2.0, 1.0);
    const auto zgrid = superlevel::default_t_grid(0.25, 32);
    rows = read_csv(dump_curves(z, zgrid, rays, dir.string(), "z").distribution, header);
    for (const auto& row : rows) {
        const double t = row[0], d = std::sqrt(std::max(0.0, 1.0 - 4.0 * t));
        const double xp = 0.5 * (1.0 + d), xm = 0.5 * (1.0 - d);
        const double annulus = xp / (1.0 - xp) - xm / (1.0 - xm);
        CHECK(row[1] == doctest::Approx(annulus).epsilon(1e-8));
    }

    CHECK_THROWS_AS(dump_curves(flat, std::vector<double>{}, rays, dir.string(), "empty"), std::invalid_argument);
    std::filesystem::remove_all(dir);
}

TEST_CASE("write_outputs lays out report, timings and curves") {
    SuiteConfig cfg;
    cfg.suites = {Suite::geometry};
    cfg.n_list = {1};
    cfg.output_dir = scratch("outputs").string();
    const auto result = run_suite(cfg);
    write_outputs(cfg, result);
    const std::filesystem::path root(cfg.output_dir);
    CHECK(std::filesystem::exists(root / "report.json"));
    CHECK(std::filesystem::exists(root / "timings.json"));
    CHECK(std::filesystem::exists(root / "curves" / "flat_n1_distribution.csv"));
    CHECK(std::filesystem::exists(root / "curves" / "z1_n1_rearrangement.csv"));
    std::filesystem::remove_all(root);
}

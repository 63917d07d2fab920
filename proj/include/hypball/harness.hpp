#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hypball/holo.hpp"
#include "hypball/integrate.hpp"

namespace hypball::harness {

/// Version tag written into every report; bump when the record field set changes.
inline constexpr std::string_view kReportSchema = "hypball.report/1";

enum class Suite { geometry, norms, superlevel, rearrange, inequalities };
std::string_view to_string(Suite s) noexcept;
Suite parse_suite(std::string_view s);
std::set<Suite> all_suites();

/// Invalid configuration; maps to exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SuiteConfig {
    std::uint64_t seed = 42;
    std::vector<int> n_list{1, 2};
    std::uint64_t samples = 200000;  // points for direct Monte Carlo estimators
    int directions = 1024;           // sphere directions for the ray engines
    int radial_nodes = 48;
    int battery = 6;                 // random polynomials per dimension
    int level_battery = 9;           // the same for the cheaper superlevel checks
    std::set<Suite> suites = all_suites();
    std::string output_dir = "report";
    int threads = 0;  // 0: hardware concurrency

    /// Throws ConfigError.
    void validate() const;
    /// Ray-engine configuration derived from the budget.
    [[nodiscard]] McConfig ray_config() const;
};

/// Overlays the fields present in a JSON object onto `base`. Throws ConfigError.
SuiteConfig config_from_json(std::string_view text, SuiteConfig base = {});
std::string config_to_json(const SuiteConfig& cfg);

struct VerificationRecord {
    std::string id;
    std::string theorem;  // short tag naming the property under test
    std::string digest;   // FNV-1a of the canonical inputs
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;  // margin >= -tolerance
    double runtime_s = 0.0;
    std::string detail;
};

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

/// One unit of work: a single (check, dimension, input) combination.
struct Outcome {
    double margin = 0.0;
    double tolerance = 0.0;
    std::string detail;
};
struct Check {
    std::string id;
    std::string theorem;
    std::string inputs;  // canonical description, hashed into the digest
    std::function<Outcome()> run;
};

/// The checks selected by `cfg`, in no particular order.
std::vector<Check> plan(const SuiteConfig& cfg);

struct SuiteResult {
    std::vector<VerificationRecord> records;  // sorted by id
    int exit_code = 0;                        // 0 all pass, 1 any failure
};

/// Runs the checks on a worker pool. A check that throws yields a failing record.
SuiteResult run_checks(std::vector<Check> checks, int threads);
SuiteResult run_suite(const SuiteConfig& cfg);

/// Report body: config, summary and records, without runtimes, so equal seeds give equal bytes.
std::string report_json(const SuiteConfig& cfg, std::span<const VerificationRecord> records);
/// Per-record runtimes, kept apart from the report.
std::string timings_json(std::span<const VerificationRecord> records);

/// Writes report.json, timings.json and the curve CSVs under cfg.output_dir. Throws std::runtime_error on I/O failure.
void write_outputs(const SuiteConfig& cfg, const SuiteResult& result);

struct CurveFiles {
    std::string distribution;   // t, mu, mu_stderr, g, g_stderr, weak_type_bound
    std::string rearrangement;  // s, ustar
};

/// Distribution and rearrangement curves of u = |f|^a (1 - |z|^2)^b on `t_grid`.
/// Throws std::invalid_argument for an empty grid.
CurveFiles dump_curves(const LevelFunction& u, std::span<const double> t_grid, const McConfig& cfg,
                       const std::string& dir, const std::string& stem);

}  // namespace hypball::harness

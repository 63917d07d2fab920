// Acceptance run: executes the default verification battery twice and prints one
// PASS/FAIL line per acceptance criterion. Exit status is nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "hypball/harness.hpp"
#include "hypball/inequalities.hpp"

using namespace hypball;
using Records = std::vector<harness::VerificationRecord>;

namespace {

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

struct Selection {
    std::size_t count = 0;
    std::size_t failed = 0;
    std::string first_failure;
};

Selection select(const Records& records, const std::vector<std::string>& prefixes) {
    Selection s;
    for (const auto& r : records) {
        bool hit = false;
        for (const auto& p : prefixes) hit = hit || starts_with(r.id, p);
        if (!hit) continue;
        ++s.count;
        if (!r.pass) {
            ++s.failed;
            if (s.first_failure.empty()) s.first_failure = r.id + " (" + r.detail + ")";
        }
    }
    return s;
}

/// Distinct values of one dot-separated id component among the selected records.
std::size_t distinct(const Records& records, const std::string& prefix, std::size_t from, std::size_t to) {
    std::set<std::string> keys;
    for (const auto& r : records) {
        if (!starts_with(r.id, prefix)) continue;
        std::vector<std::string> parts;
        std::size_t pos = 0;
        for (std::size_t next; (next = r.id.find('.', pos)) != std::string::npos; pos = next + 1) parts.push_back(r.id.substr(pos, next - pos));
        parts.push_back(r.id.substr(pos));
        std::string key;
        for (std::size_t i = from; i < std::min(to, parts.size()); ++i) key += parts[i] + ".";
        keys.insert(key);
    }
    return keys.size();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s  criterion %2d  %-38s %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void report_selection(int id, const std::string& name, const Selection& s, std::size_t min_count, const std::string& extra = {},
                      bool extra_ok = true) {
    const bool ok = s.count >= min_count && s.failed == 0 && extra_ok;
    std::string detail = std::to_string(s.count - s.failed) + "/" + std::to_string(s.count) + " records";
    if (s.count < min_count) detail += ", expected at least " + std::to_string(min_count);
    if (!s.first_failure.empty()) detail += "; first failure: " + s.first_failure;
    if (!extra.empty()) detail += "; " + extra;
    report(id, name, ok, detail);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

int main(int argc, char** argv) {
    harness::SuiteConfig cfg;  // seed 42, n in {1, 2}, default budgets, all suites
    const auto scratch = std::filesystem::temp_directory_path() / "hypball_acceptance";
    cfg.output_dir = (argc > 1 ? std::filesystem::path(argv[1]) : scratch).string();

    // 1: refined isoperimetric equality on geodesic balls.
    {
        const auto start = std::chrono::steady_clock::now();
        std::vector<double> rho;
        for (int i = 1; i <= 50; ++i) rho.push_back(0.05 * i);
        double worst = 0.0;
        for (int n = 1; n <= 3; ++n) worst = std::max(worst, inequalities::isoperimetric_refined_check(rho, n).worst);
        const double elapsed = seconds_since(start);
        char buf[128];
        std::snprintf(buf, sizeof buf, "max relative error %.2e over 150 cases in %.3f s", worst, elapsed);
        report(1, "geodesic-ball equality", worst < 1e-12 && elapsed < 1.0, buf);
    }

    const auto start = std::chrono::steady_clock::now();
    const auto first = harness::run_suite(cfg);
    const double elapsed = seconds_since(start);
    harness::write_outputs(cfg, first);
    const Records& rec = first.records;

    report_selection(2, "geodesic-ball volume", select(rec, {"geometry.volume"}), 20);
    report_selection(3, "log-Laplacian identity", select(rec, {"geometry.log_laplacian.n1", "geometry.log_laplacian.n2"}), 2,
                     "1000 points per dimension");
    {
        const std::size_t polys = distinct(rec, "superlevel.weak_type.n", 2, 4);
        const auto s = select(rec, {"superlevel.weak_type."});
        report_selection(4, "weak-type bound", s, 4, std::to_string(polys) + " unit-norm polynomials (20 required) plus f = 1", polys >= 20);
    }
    report_selection(5, "monotonicity of g(t)", select(rec, {"superlevel.monotonicity."}), 20);
    report_selection(6, "contraction chain, f = z", select(rec, {"norms.chain.z."}), 4);
    report_selection(7, "Hardy space as a limit", select(rec, {"norms.hardy_limit."}), 3);
    report_selection(8, "layer-cake cross-validation", select(rec, {"superlevel.layer_cake.", "norms.normalization_identity."}), 10);
    {
        const auto s = select(rec, {"rearrange.equimeasurability.", "rearrange.preservation.", "rearrange.fixed_point.",
                                    "rearrange.polya_szego."});
        const std::size_t ps_functions = distinct(rec, "rearrange.polya_szego.", 2, 4);
        report_selection(9, "rearrangement properties", s, 60, std::to_string(ps_functions) + " Polya-Szego functions (15 required)",
                         ps_functions >= 15);
    }
    report_selection(10, "one-dimensional gradient identities", select(rec, {"rearrange.radial_identities."}), 3);
    report_selection(11, "Sobolev inequalities",
                     select(rec, {"inequalities.sobolev.", "inequalities.sobolev_limit.", "inequalities.ell_integral."}), 20);
    report_selection(12, "rearrangement lemma, weighted Hardy", select(rec, {"inequalities.kalaj.", "inequalities.hardy."}), 8);

    // 13: byte-identical rerun and wall-clock budget.
    {
        const std::string a = harness::report_json(cfg, first.records);
        harness::SuiteConfig again = cfg;
        again.threads = 1;
        const std::string b = harness::report_json(again, harness::run_suite(again).records);
        char buf[160];
        std::snprintf(buf, sizeof buf, "first run %.1f s, %zu records, reports %s", elapsed, rec.size(),
                      a == b ? "byte-identical" : "DIFFER");
        report(13, "determinism and runtime", a == b && elapsed < 900.0, buf);
    }

    std::printf("%s: %d criterion line(s) failed; report in %s\n", failures ? "FAILED" : "ALL PASSED", failures, cfg.output_dir.c_str());
    return failures ? 1 : 0;
}

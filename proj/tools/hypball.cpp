// Command-line front end: suite runner, single norm and inequality evaluations, curve dumps.
#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hypball/harness.hpp"
#include "hypball/inequalities.hpp"
#include "hypball/norms.hpp"
#include "hypball/superlevel.hpp"

using namespace hypball;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfigError = 2;

std::string read_text(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw harness::ConfigError("cannot read " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::vector<int> parse_n_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        const auto dash = item.find('-');
        try {
            if (dash != std::string::npos) {
                const int lo = std::stoi(item.substr(0, dash)), hi = std::stoi(item.substr(dash + 1));
                for (int n = lo; n <= hi; ++n) out.push_back(n);
            } else {
                out.push_back(std::stoi(item));
            }
        } catch (const std::logic_error&) {
            throw harness::ConfigError("bad dimension list: " + s);
        }
    }
    return out;
}

struct VerifyOptions {
    std::string config;
    std::string suites;
    std::string n_list;
    std::optional<std::uint64_t> seed, samples;
    std::optional<int> directions, radial_nodes, battery, threads;
    std::string out;
    bool quiet = false;
};

int run_verify(const VerifyOptions& o) {
    harness::SuiteConfig cfg;
    if (!o.config.empty()) cfg = harness::config_from_json(read_text(o.config), cfg);
    if (!o.suites.empty()) {
        cfg.suites.clear();
        std::stringstream ss(o.suites);
        for (std::string s; std::getline(ss, s, ',');) {
            if (s == "all") {
                cfg.suites = harness::all_suites();
            } else {
                cfg.suites.insert(harness::parse_suite(s));
            }
        }
    }
    if (!o.n_list.empty()) cfg.n_list = parse_n_list(o.n_list);
    if (o.seed) cfg.seed = *o.seed;
    if (o.samples) cfg.samples = *o.samples;
    if (o.directions) cfg.directions = *o.directions;
    if (o.radial_nodes) cfg.radial_nodes = *o.radial_nodes;
    if (o.battery) cfg.battery = *o.battery;
    if (o.threads) cfg.threads = *o.threads;
    if (!o.out.empty()) cfg.output_dir = o.out;
    cfg.validate();

    const auto result = harness::run_suite(cfg);
    harness::write_outputs(cfg, result);
    std::size_t failed = 0;
    for (const auto& r : result.records) {
        if (!r.pass) ++failed;
        if (!o.quiet || !r.pass) {
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << "  margin=" << r.margin << " tol=" << r.tolerance;
            if (!r.pass) std::cout << "  " << r.detail;
            std::cout << '\n';
        }
    }
    std::cout << result.records.size() - failed << "/" << result.records.size() << " checks passed; report in "
              << cfg.output_dir << "/report.json\n";
    return result.exit_code;
}

int run_norms(const std::string& path, const std::string& space, double p, double alpha, std::uint64_t seed, int samples) {
    const Polynomial f = holo::read_polynomial(path);
    SpaceParams params;
    if (space == "hardy") {
        params = SpaceParams::hardy(f.dim(), p);
    } else if (space == "bergman") {
        params = SpaceParams::bergman(f.dim(), p, alpha);
    } else {
        throw harness::ConfigError("unknown space: " + space);
    }
    params.validate();
    const McConfig cfg{seed, samples, 64};
    const auto e = norms::norm(f, params, cfg);
    std::cout << params.label() << " norm = " << e.value << " +/- " << e.std_error << " (" << to_string(e.method) << ")\n";
    if (!e.warning.empty()) std::cout << "warning: " << e.warning << '\n';
    return kPass;
}

int run_ineq(const std::string& check, int n, double p, double eps, std::uint64_t seed, int directions) {
    using namespace inequalities;
    const McConfig cfg{seed, directions, 48};
    std::vector<double> rho;
    for (int i = 1; i <= 20; ++i) rho.push_back(0.1 * i);
    if (check == "iso-model" || check == "iso-refined") {
        const auto r = check == "iso-model" ? isoperimetric_model_check(rho, n) : isoperimetric_refined_check(rho, n);
        std::cout << "rho,lhs,rhs,margin\n";
        for (std::size_t k = 0; k < rho.size(); ++k) std::cout << r.rho[k] << ',' << r.lhs[k] << ',' << r.rhs[k] << ',' << r.margins[k] << '\n';
        std::cout << (r.pass ? "PASS" : "FAIL") << " worst=" << r.worst << '\n';
        return r.pass ? kPass : kFail;
    }
    if (check.rfind("sobolev-", 0) == 0) {
        const SobolevRegime regime = parse_regime(check.substr(8));
        const LevelFunction w(Polynomial::constant(n, 1.0), 1.0, 1.0);
        const double tau = 0.05 * holo::level_maximum(w).value;
        const auto r = sobolev_check(w, tau, p, regime, cfg);
        std::cout << "regime " << to_string(regime) << " n=" << n << " p=" << p << ": lhs=" << r.lhs.value << " rhs=" << r.rhs.value
                  << " margin=" << r.margin << " tol=" << r.tolerance << '\n';
        std::cout << (r.pass ? "PASS" : "FAIL") << '\n';
        return r.pass ? kPass : kFail;
    }
    if (check == "hardy-weighted") {
        const HardyInput in{[](double x) { return std::exp(-x); }, 0.0, std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity(), 0.0, "exp"};
        const auto mode = eps > p - 1.0 ? HardyMode::tail : HardyMode::head;
        if (mode == HardyMode::head) throw harness::ConfigError("hardy-weighted with f = exp(-x) needs eps > p - 1");
        const auto r = weighted_hardy_check(in, p, eps, mode);
        std::cout << "f=exp(-x) p=" << p << " eps=" << eps << ": constant=" << r.constant << " lhs=" << r.lhs << " rhs=" << r.rhs
                  << " ratio=" << r.ratio << '\n';
        std::cout << (r.pass ? "PASS" : "FAIL") << '\n';
        return r.pass ? kPass : kFail;
    }
    if (check == "kalaj") {
        const KalajInput in{[](double x) { return x > 1.0 ? x - 1.0 : 0.0; }, [](double t) { return t; },
                            [](double t) { return 1.5 - t; }, {1.0}, 2.0};
        const auto r = kalaj_lemma_check(in);
        std::cout << "Phi=(x-1)_+ Psi=t g=1.5-t: scale=" << r.scale << " lhs=" << r.lhs << " rhs=" << r.rhs << '\n';
        std::cout << (r.pass ? "PASS" : "FAIL") << '\n';
        return r.pass ? kPass : kFail;
    }
    throw harness::ConfigError("unknown check: " + check);
}

int run_curves(const std::string& path, int n, double a, double b, int points, std::uint64_t seed, int directions,
               const std::string& out, const std::string& stem) {
    const Polynomial f = path.empty() ? Polynomial::constant(n, 1.0) : holo::read_polynomial(path);
    const LevelFunction u(f, a, b);
    if (points < 1) throw harness::ConfigError("need at least one t-grid point");
    const double t0 = holo::level_maximum(u).value;
    const auto grid = points == 1 ? std::vector<double>{0.5 * t0} : superlevel::default_t_grid(t0, static_cast<std::size_t>(points));
    const auto files = harness::dump_curves(u, grid, McConfig{seed, directions, 48}, out, stem);
    std::cout << files.distribution << '\n' << files.rearrangement << '\n';
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification of inequalities on the complex hyperbolic ball"};
    app.require_subcommand(1);

    VerifyOptions v;
    auto* verify = app.add_subcommand("verify", "Run verification suites and write a JSON report");
    verify->add_option("--config", v.config, "JSON config file (flags override it)");
    verify->add_option("--suite", v.suites, "Comma-separated suites or 'all'");
    verify->add_option("--n", v.n_list, "Dimensions, e.g. 1,2 or 1-3");
    verify->add_option("--seed", v.seed);
    verify->add_option("--samples", v.samples, "Points for direct Monte Carlo estimators");
    verify->add_option("--directions", v.directions, "Sphere directions for the ray engines");
    verify->add_option("--radial-nodes", v.radial_nodes);
    verify->add_option("--battery", v.battery, "Random polynomials per dimension");
    verify->add_option("--threads", v.threads, "Worker threads (0: all cores)");
    verify->add_option("--out", v.out, "Output directory");
    verify->add_flag("--quiet", v.quiet, "Print failing checks only");

    std::string f_path, space = "bergman";
    double p = 2.0, alpha = 2.5;
    std::uint64_t seed = 42;
    int samples = 200000;
    auto* norms_cmd = app.add_subcommand("norms", "Hardy or weighted Bergman norm of a polynomial");
    norms_cmd->add_option("--f", f_path, "Polynomial JSON file")->required();
    norms_cmd->add_option("--space", space)->check(CLI::IsMember({"hardy", "bergman"}));
    norms_cmd->add_option("--p", p);
    norms_cmd->add_option("--alpha", alpha);
    norms_cmd->add_option("--seed", seed);
    norms_cmd->add_option("--samples", samples);

    std::string check;
    int n = 1, directions = 1024;
    double eps = 2.0;
    auto* ineq = app.add_subcommand("ineq", "Evaluate one inequality");
    ineq->add_option("--check", check)
        ->required()
        ->check(CLI::IsMember({"iso-model", "iso-refined", "sobolev-I", "sobolev-II", "sobolev-III", "sobolev-IV", "hardy-weighted", "kalaj"}));
    ineq->add_option("--n", n);
    ineq->add_option("--p", p);
    ineq->add_option("--eps", eps, "Weight exponent for hardy-weighted");
    ineq->add_option("--seed", seed);
    ineq->add_option("--directions", directions);

    double a = 1.0, b = 1.0;
    int points = 64;
    std::string out = "curves", stem = "curve";
    auto* curves = app.add_subcommand("curves", "Write distribution and rearrangement CSVs for u = |f|^a (1-|z|^2)^b");
    curves->add_option("--f", f_path, "Polynomial JSON file (default: f = 1)");
    curves->add_option("--n", n, "Dimension when --f is absent");
    curves->add_option("--a", a);
    curves->add_option("--b", b);
    curves->add_option("--points", points, "Number of t-grid points");
    curves->add_option("--seed", seed);
    curves->add_option("--directions", directions);
    curves->add_option("--out", out);
    curves->add_option("--stem", stem);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kConfigError;
    }

    try {
        if (*verify) return run_verify(v);
        if (*norms_cmd) return run_norms(f_path, space, p, alpha, seed, samples);
        if (*ineq) return run_ineq(check, n, p, eps, seed, directions);
        if (*curves) return run_curves(f_path, n, a, b, points, seed, directions, out, stem);
    } catch (const harness::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFail;
    }
    return kConfigError;
}

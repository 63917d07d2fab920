#include "hypball/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hypball/geometry.hpp"
#include "hypball/inequalities.hpp"
#include "hypball/norms.hpp"
#include "hypball/rearrange.hpp"
#include "hypball/rng.hpp"
#include "hypball/special.hpp"
#include "hypball/superlevel.hpp"

namespace hypball::harness {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
}

std::string join_doubles(std::span<const double> xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt(xs[i]);
    return out;
}

/// Computed on first use by whichever worker gets there; later callers reuse it.
template <class T>
class Shared {
public:
    explicit Shared(std::function<T()> make) : make_(std::move(make)) {}
    const T& get() {
        std::call_once(flag_, [this] { value_ = make_(); });
        return *value_;
    }

private:
    std::function<T()> make_;
    std::once_flag flag_;
    std::optional<T> value_;
};

/// A level function with the label and exponents used for ids and digests.
struct Member {
    std::string label;
    Polynomial f;
    double a = 1.0;
    double b = 1.0;
};

Polynomial z1_plus_half(int n) {
    Polynomial f = Polynomial::constant(n, 0.5);
    std::vector<int> e(n, 0);
    e[0] = 1;
    f.add_term(MultiIndex(e), 1.0);
    return f;
}

/// Compactly supportable battery: the constant, a shifted coordinate and random polynomials.
std::vector<Member> battery(int n, const SuiteConfig& cfg) {
    std::vector<Member> out;
    out.push_back({"flat", Polynomial::constant(n, 1.0), 1.0, 1.0});
    out.push_back({"shift", z1_plus_half(n), 2.0, 1.0});
    const auto family = holo::test_family({"random_poly", n, 3, cfg.battery, 0.5, cfg.seed});
    for (std::size_t k = 0; k < family.size(); ++k) out.push_back({"rand" + std::to_string(k), family[k], 1.5, 1.0});
    return out;
}

std::vector<Polynomial> random_family(int n, const SuiteConfig& cfg, int count) {
    return holo::test_family({"random_poly", n, 3, count, 0.5, cfg.seed});
}

std::string tag(int n) { return ".n" + std::to_string(n); }

std::string inputs(const SuiteConfig& cfg, int n, const std::string& extra) {
    std::ostringstream os;
    os << "seed=" << cfg.seed << ";n=" << n << ";samples=" << cfg.samples << ";directions=" << cfg.directions
       << ";radial=" << cfg.radial_nodes << ";" << extra;
    return os.str();
}

std::string member_inputs(const Member& m) {
    return "f=" + holo::polynomial_to_json(m.f) + ";a=" + fmt(m.a) + ";b=" + fmt(m.b);
}

/// Equality-type outcome: margin = -|difference|.
Outcome equality(double value, double expected, double tolerance, const std::string& detail = {}) {
    return {-std::abs(value - expected), tolerance, detail.empty() ? "value=" + fmt(value) + " expected=" + fmt(expected) : detail};
}

Outcome from_curve(const superlevel::CurveReport& c) {
    return {-c.worst, 0.0, "worst_raw=" + fmt(c.worst_raw) + " at t=" + fmt(c.worst_t)};
}

// ---------------------------------------------------------------- geometry

void plan_geometry(const SuiteConfig& cfg, std::vector<Check>& out) {
    for (int n : cfg.n_list) {
        out.push_back({"geometry.perimeter_identity" + tag(n), "perimeter_identity", inputs(cfg, n, "radii=50"), [n] {
                           std::vector<double> rho;
                           for (int i = 1; i <= 50; ++i) rho.push_back(0.05 * i);
                           const auto r = inequalities::isoperimetric_refined_check(rho, n);
                           return Outcome{-r.worst, 1e-12, "max_rel_error=" + fmt(r.worst)};
                       }});
        for (double rho : {0.25, 0.5, 1.0, 1.5, 2.0}) {
            const std::string id = "geometry.volume" + tag(n) + ".rho" + fmt(rho);
            const auto estimate = [cfg, n, rho] {
                const ScalarField ind{[rho](const BallPoint& z) { return std::atanh(z.norm()) < rho ? 1.0 : 0.0; }, {},
                                      std::tanh(1.01 * rho)};
                const McConfig mc{cfg.seed, static_cast<int>(cfg.samples), cfg.radial_nodes};
                return integrate::integrate_ball_hyperbolic(ind, n, mc);
            };
            out.push_back({id, "geodesic_ball_volume", inputs(cfg, n, "rho=" + fmt(rho)), [estimate, n, rho] {
                               const auto e = estimate();
                               const double exact = geometry::geodesic_ball_volume({rho}, n);
                               return equality(e.value, exact, stats::tolerance(e.std_error, exact));
                           }});
            out.push_back({id + ".precision", "geodesic_ball_volume", inputs(cfg, n, "rho=" + fmt(rho)), [estimate] {
                               const auto e = estimate();
                               const double rel = e.std_error / e.value;
                               return Outcome{-rel, 1e-3, "relative_stderr=" + fmt(rel)};
                           }});
        }
        out.push_back({"geometry.log_laplacian" + tag(n), "log_laplacian", inputs(cfg, n, "polys=20;points=50"), [cfg, n] {
                           const auto family = holo::test_family({"random_poly", n, 3, 20, 0.5, cfg.seed});
                           const auto gen = rng::make(cfg.seed, rng::Stream::test_points, 100 + n);
                           double worst = 0.0;
                           std::size_t used = 0;
                           for (std::size_t m = 0; m < family.size(); ++m) {
                               const double b = 1.0 + 0.5 * static_cast<double>(m % 3);
                               const LevelFunction u(family[m], 1.7, b);
                               const ScalarField logu{[&u](const BallPoint& z) { return std::log(u(z)); }, {}, 1.0};
                               for (std::uint64_t j = 0; j < 50; ++j) {
                                   CVector dir(static_cast<std::size_t>(n));
                                   const std::uint64_t idx = m * 1000 + j;
                                   rng::sphere_point(gen, idx, dir);
                                   const BallPoint z = BallPoint::radial(dir, 0.95 * gen.uniform2(idx * 64 + 63)[0]);
                                   if (std::abs(u.poly()(z)) < 1e-2) continue;
                                   worst = std::max(worst, std::abs(geometry::invariant_laplacian(logu, z) + 4.0 * n * b));
                                   ++used;
                               }
                           }
                           return Outcome{-worst, 1e-4, "max_abs_error=" + fmt(worst) + " points=" + std::to_string(used)};
                       }});
    }
}

// ---------------------------------------------------------------- norms

/// ||z||^{2 alpha} in A^{2 alpha}_alpha on the disc: (alpha - 1) B(alpha + 1, alpha - 1).
double z_chain_power(double alpha) { return (alpha - 1.0) * special::beta(alpha + 1.0, alpha - 1.0); }

void plan_norms(const SuiteConfig& cfg, std::vector<Check>& out) {
    const McConfig mc{cfg.seed, static_cast<int>(std::min<std::uint64_t>(cfg.samples, 1u << 20) / 10), cfg.radial_nodes};
    const std::vector<double> chain{1.5, 2.0, 3.0};
    if (std::find(cfg.n_list.begin(), cfg.n_list.end(), 1) != cfg.n_list.end()) {
        out.push_back({"norms.chain.z.exact", "contraction_chain", inputs(cfg, 1, "f=z;r=2;alphas=1.5,2,3"), [] {
                           double prev = 1.0;  // Hardy norm of z
                           double gap = kInf;
                           for (double a : {1.5, 2.0, 3.0}) {
                               const double v = std::pow(z_chain_power(a), 1.0 / (2.0 * a));
                               gap = std::min(gap, prev - v);
                               prev = v;
                           }
                           return Outcome{gap - 1e-12, 0.0, "min_strict_gap=" + fmt(gap)};
                       }});
        for (double a : chain) {
            out.push_back({"norms.chain.z.oracle.alpha" + fmt(a), "contraction_chain", inputs(cfg, 1, "f=z;r=2;alpha=" + fmt(a)),
                           [mc, a] {
                               const auto space = SpaceParams::bergman(1, 2.0 * a, a);
                               const auto f = Polynomial::coordinate(1, 0);
                               const auto e = norms::norm_power(f, space, mc, NormMethod::monte_carlo);
                               // Radial rules are not exact for fractional powers; doubling the nodes bounds that error.
                               McConfig fine = mc;
                               fine.radial_nodes *= 2;
                               const double rule = std::abs(e.value - norms::norm_power(f, space, fine, NormMethod::monte_carlo).value);
                               const double exact = z_chain_power(a);
                               return equality(e.value, exact, stats::tolerance(e.std_error, exact) + rule);
                           }});
        }
        out.push_back({"norms.hardy_limit.n1.z", "hardy_limit", inputs(cfg, 1, "f=z;r=2;alphas=1.5,1.1,1.01"), [mc] {
                           const std::vector<double> seq{1.5, 1.1, 1.01};
                           const auto l = norms::hardy_limit_check(Polynomial::coordinate(1, 0), 2.0, seq, mc);
                           double margin = kInf;
                           for (std::size_t i = 0; i + 1 < l.gaps.size(); ++i) margin = std::min(margin, l.gaps[i] - l.gaps[i + 1]);
                           return Outcome{margin, 0.0, "gaps=" + join_doubles(l.gaps)};
                       }});
    }
    for (int n : cfg.n_list) {
        const std::vector<double> alphas{n + 0.5, n + 1.0, n + 2.0};
        for (double alpha : alphas) {
            out.push_back({"norms.normalization_identity" + tag(n) + ".alpha" + fmt(alpha), "layer_cake_identity",
                           inputs(cfg, n, "alpha=" + fmt(alpha)), [n, alpha] {
                               return equality(norms::normalization_identity(alpha, n), 1.0, 1e-10);
                           }});
        }
        const auto family = random_family(n, cfg, cfg.battery);
        for (std::size_t k = 0; k < family.size(); ++k) {
            const Polynomial f = family[k];
            const double r = k % 2 ? 2.0 : 1.0;
            const std::string in = inputs(cfg, n, "f=" + holo::polynomial_to_json(f) + ";r=" + fmt(r));
            out.push_back({"norms.chain" + tag(n) + ".rand" + std::to_string(k), "contraction_chain", in, [f, r, alphas, mc] {
                               const auto c = norms::contraction_chain_check(f, r, alphas, mc);
                               return Outcome{c.worst_margin, 0.0, "entries=" + std::to_string(c.entries.size())};
                           }});
            out.push_back({"norms.hardy_limit" + tag(n) + ".rand" + std::to_string(k), "hardy_limit", in, [f, r, n, mc] {
                               const std::vector<double> seq{n + 0.5, n + 0.1, n + 0.01};
                               const auto l = norms::hardy_limit_check(f, r, seq, mc);
                               double margin = kInf, tol = 0.0;
                               for (std::size_t i = 0; i + 1 < l.gaps.size(); ++i) {
                                   const double step = l.gaps[i] - l.gaps[i + 1];
                                   const double t = stats::tolerance(std::hypot(l.gap_errors[i], l.gap_errors[i + 1]), l.gaps[i]);
                                   if (step + t < margin + tol) {
                                       margin = step;
                                       tol = t;
                                   }
                               }
                               return Outcome{margin, tol, "gaps=" + join_doubles(l.gaps)};
                           }});
        }
    }
}

// ---------------------------------------------------------------- superlevel

void plan_superlevel(const SuiteConfig& cfg, std::vector<Check>& out) {
    const McConfig rays = cfg.ray_config();
    for (int n : cfg.n_list) {
        out.push_back({"superlevel.weak_type.flat" + tag(n), "weak_type_equality", inputs(cfg, n, "f=1;r=1"), [n, rays] {
                           const auto w = superlevel::weak_type_check(Polynomial::constant(n, 1.0), 1.0, rays);
                           double margin = kInf;
                           for (std::size_t k = 0; k < w.margins.margins.size(); ++k)
                               margin = std::min(margin, w.margins.tolerances[k] - std::abs(w.margins.margins[k]));
                           return Outcome{margin, 0.0, "points=" + std::to_string(w.margins.margins.size())};
                       }});
        out.push_back({"superlevel.monotonicity.flat" + tag(n), "monotonicity_equality", inputs(cfg, n, "f=1;a=1;b=1"),
                       [n, rays] {
                           const LevelFunction u(Polynomial::constant(n, 1.0), 1.0, 1.0);
                           const auto g = superlevel::monotone_functional(superlevel::distribution_function(u, rays), 1.0);
                           double margin = kInf;
                           for (std::size_t k = 0; k < g.g.size(); ++k)
                               margin = std::min(margin, stats::tolerance(g.g_stderr[k], 1.0) - std::abs(g.g[k] - 1.0));
                           return Outcome{margin, 0.0, "points=" + std::to_string(g.g.size())};
                       }});
        std::vector<Polynomial> family = random_family(n, cfg, cfg.level_battery);
        family.push_back(Polynomial::coordinate(n, 0));
        for (std::size_t k = 0; k < family.size(); ++k) {
            const Polynomial f = family[k];
            const std::string fid = k + 1 == family.size() ? "z1" : "rand" + std::to_string(k);
            const std::string fin = "f=" + holo::polynomial_to_json(f);
            for (double r : {1.0, 2.0}) {
                out.push_back({"superlevel.weak_type" + tag(n) + "." + fid + ".r" + fmt(r), "weak_type_bound",
                               inputs(cfg, n, fin + ";r=" + fmt(r)),
                               [f, r, rays] { return from_curve(superlevel::weak_type_check(f, r, rays).margins); }});
            }
            for (auto [a, b] : {std::pair{2.0, 1.0}, std::pair{2.0, 2.5}}) {
                const std::string ab = ".a" + fmt(a) + ".b" + fmt(b);
                const std::string in = inputs(cfg, n, fin + ";a=" + fmt(a) + ";b=" + fmt(b));
                out.push_back({"superlevel.monotonicity" + tag(n) + "." + fid + ab, "monotonicity", in, [f, a, b, rays] {
                                   const auto mu = superlevel::distribution_function(LevelFunction(f, a, b), rays);
                                   return from_curve(superlevel::monotonicity_check(mu, b));
                               }});
                out.push_back({"superlevel.differential" + tag(n) + "." + fid + ab, "differential_inequality", in, [f, a, b, rays] {
                                   const auto mu = superlevel::distribution_function(LevelFunction(f, a, b), rays);
                                   return from_curve(superlevel::differential_inequality_check(mu, b));
                               }});
            }
            const double alpha = n + 1.0;
            out.push_back({"superlevel.layer_cake" + tag(n) + "." + fid, "layer_cake", inputs(cfg, n, fin + ";r=1;alpha=" + fmt(alpha)),
                           [f, n, alpha, rays, cfg] {
                               const auto lc = superlevel::layer_cake_bergman(f, 1.0, alpha, rays);
                               const McConfig mc{cfg.seed, rays.sphere_samples, cfg.radial_nodes};
                               const auto ref = norms::norm_power(f, SpaceParams::bergman(n, alpha, alpha), mc);
                               const double tol = stats::tolerance(std::hypot(lc.value.std_error, ref.std_error), ref.value) + lc.quadrature_error;
                               return equality(lc.value.value, ref.value, tol);
                           }});
            for (const char* g : {"power:2.5", "hinge:0.4", "piecewise:0.2,0.6:1,3"}) {
                out.push_back({"superlevel.extremal" + tag(n) + "." + fid + "." + g, "extremal_functional",
                               inputs(cfg, n, fin + ";G=" + g), [f, g, rays] {
                                   const auto e = superlevel::extremal_functional_check(superlevel::GFunction::parse(g), f, 1.0, rays);
                                   return Outcome{e.margin, e.tolerance, "value=" + fmt(e.value.value) + " extremal=" + fmt(e.extremal)};
                               }});
            }
        }
    }
}

// ---------------------------------------------------------------- rearrange

void plan_rearrange(const SuiteConfig& cfg, std::vector<Check>& out) {
    const McConfig rays = cfg.ray_config();
    for (int n : cfg.n_list) {
        out.push_back({"rearrange.fixed_point" + tag(n), "radial_fixed_point", inputs(cfg, n, "f=1;a=1;b=1"), [n, rays] {
                           const LevelFunction u(Polynomial::constant(n, 1.0), 1.0, 1.0);
                           const auto mu = superlevel::distribution_function(u, rays);
                           const auto ustar = rearrange::decreasing_rearrangement(mu, 1.0 / n);
                           CVector e(static_cast<std::size_t>(n), Complex(0.0));
                           e[0] = Complex(0.6, 0.8);
                           double worst = 0.0;
                           for (double s : mu.mu) {
                               const double r = std::sqrt(std::pow(s, 1.0 / n) / (1.0 + std::pow(s, 1.0 / n)));
                               const auto z = BallPoint::radial(e, r);
                               worst = std::max(worst, std::abs(rearrange::hyperbolic_symmetrization(ustar, z) - u(z)));
                           }
                           return Outcome{-worst, 1e-10, "max_abs_error=" + fmt(worst)};
                       }});
        for (const auto& m : battery(n, cfg)) {
            const LevelFunction w(m.f, m.a, m.b);
            const std::string base = tag(n) + "." + m.label;
            const std::string min = member_inputs(m) + ";tau=0.05t0";
            const auto tau_of = [w] { return 0.05 * holo::level_maximum(w).value; };
            out.push_back({"rearrange.equimeasurability" + base, "equimeasurability", inputs(cfg, n, min), [w, tau_of, rays] {
                               const auto e = rearrange::equimeasurability_check(w, tau_of(), rays);
                               return Outcome{-e.worst, 0.0, "unresolved_levels=" + std::to_string(e.unresolved)};
                           }});
            static constexpr std::array<double, 4> qs{1.0, 2.0, 4.0, kInf};
            const auto pres = std::make_shared<Shared<std::vector<rearrange::PreservationReport>>>(
                [w, tau_of, rays] { return rearrange::preservation_checks(w, tau_of(), qs, rays); });
            for (std::size_t i = 0; i < qs.size(); ++i) {
                const std::string q = std::isinf(qs[i]) ? "inf" : fmt(qs[i]);
                out.push_back({"rearrange.preservation" + base + ".q" + q, "norm_preservation", inputs(cfg, n, min + ";q=" + q),
                               [pres, i] {
                                   const auto& r = pres->get()[i];
                                   return Outcome{-r.margin, r.tolerance, "direct=" + fmt(r.direct.value) + " symmetrized=" + fmt(r.symmetrized)};
                               }});
            }
            static constexpr std::array<double, 3> ps{1.5, 2.0, 3.0};
            const auto ps_reports = std::make_shared<Shared<std::vector<rearrange::PolyaSzegoReport>>>(
                [w, tau_of, rays] { return rearrange::polya_szego_checks(w, tau_of(), ps, rays); });
            for (std::size_t i = 0; i < ps.size(); ++i) {
                out.push_back({"rearrange.polya_szego" + base + ".p" + fmt(ps[i]), "polya_szego", inputs(cfg, n, min + ";p=" + fmt(ps[i])),
                               [ps_reports, i] {
                                   const auto& r = ps_reports->get()[i];
                                   return Outcome{r.margin, r.tolerance, "gradient=" + fmt(r.gradient.value) + " symmetrized=" + fmt(r.symmetrized.value)};
                               }});
            }
        }
    }
    struct Profile {
        std::string id;
        rearrange::RadialProfile profile;
        int n;
        double s_max;
    };
    const std::vector<Profile> profiles{{"rational1.n1", rearrange::RadialProfile::rational(1), 1, 0.0},
                                        {"rational2.n2", rearrange::RadialProfile::rational(2), 2, 1e4},
                                        {"plateau.n1", rearrange::RadialProfile::plateau(1.0, 3.0), 1, 0.0},
                                        {"plateau.n2", rearrange::RadialProfile::plateau(1.0, 3.0), 2, 0.0}};
    for (const auto& pr : profiles) {
        out.push_back({"rearrange.radial_identities." + pr.id, "radial_gradient_identities",
                       inputs(cfg, pr.n, pr.profile.name + ";p=2;s_max=" + fmt(pr.s_max)), [pr] {
                           const auto r = rearrange::radial_gradient_identities_check(pr.profile, pr.n, 2.0, pr.s_max);
                           const double err = std::max(r.e1_rel_error, r.e2_rel_error);
                           return Outcome{-err, 1e-4, "e1_rel=" + fmt(r.e1_rel_error) + " e2_rel=" + fmt(r.e2_rel_error)};
                       }});
    }
}

// ---------------------------------------------------------------- inequalities

void plan_inequalities(const SuiteConfig& cfg, std::vector<Check>& out) {
    using namespace inequalities;
    const McConfig rays = cfg.ray_config();
    for (int n : cfg.n_list) {
        out.push_back({"inequalities.iso_model" + tag(n), "isoperimetric", inputs(cfg, n, "rho=0.1..2"), [n] {
                           std::vector<double> rho;
                           for (int i = 1; i <= 20; ++i) rho.push_back(0.1 * i);
                           const auto r = isoperimetric_model_check(rho, n);
                           return Outcome{r.worst, 1e-12, "min_relative_margin=" + fmt(r.worst)};
                       }});
        out.push_back({"inequalities.iso_refined" + tag(n), "isoperimetric_refined", inputs(cfg, n, "rho=0.1..2"), [n] {
                           std::vector<double> rho;
                           for (int i = 1; i <= 20; ++i) rho.push_back(0.1 * i);
                           const auto r = isoperimetric_refined_check(rho, n);
                           return Outcome{-r.worst, 1e-12, "max_rel_error=" + fmt(r.worst)};
                       }});
        out.push_back({"inequalities.sobolev_limit" + tag(n), "sobolev_constant", inputs(cfg, n, "p=1+1e-12"), [n] {
                           return equality(sobolev_constant(2 * n, 1.0 + 1e-12), 2.0 * n, 1e-8);
                       }});
        {
            const double p = n == 1 ? 1.5 : 0.5 * (2.0 * n + 1.0);
            out.push_back({"inequalities.sobolev_extremal" + tag(n), "sobolev_constant", inputs(cfg, n, "p=" + fmt(p)), [n, p] {
                               const double S = sobolev_constant(2 * n, p);
                               return equality(sobolev_extremal_ratio(2 * n, p) / S, 1.0, 1e-2);
                           }});
        }
        for (double p : {2.0 * n + 1.0, 2.0 * n + 2.0}) {
            out.push_back({"inequalities.ell_integral" + tag(n) + ".p" + fmt(p), "ell_integral", inputs(cfg, n, "p=" + fmt(p)), [n, p] {
                               const double exact = ell_integral(n, p);
                               return Outcome{-std::abs(ell_integral_quadrature(n, p) / exact - 1.0), 1e-8, "closed=" + fmt(exact)};
                           }});
        }
        std::vector<std::pair<SobolevRegime, double>> regimes{{SobolevRegime::I, 1.0}, {SobolevRegime::II, 1.5}};
        if (n >= 2) {
            regimes.emplace_back(SobolevRegime::III, 2.0);
            regimes.emplace_back(SobolevRegime::III, 3.0);
        }
        regimes.emplace_back(SobolevRegime::IV, 2.0 * n + 2.0);
        for (const auto& m : battery(n, cfg)) {
            const LevelFunction w(m.f, m.a, m.b);
            for (auto [regime, p] : regimes) {
                const std::string id = "inequalities.sobolev." + std::string(to_string(regime)) + tag(n) + "." + m.label + ".p" + fmt(p);
                out.push_back({id, "sobolev_" + std::string(to_string(regime)), inputs(cfg, n, member_inputs(m) + ";tau=0.05t0;p=" + fmt(p)),
                               [w, regime, p, rays] {
                                   const double tau = 0.05 * holo::level_maximum(w).value;
                                   const auto r = sobolev_check(w, tau, p, regime, rays);
                                   return Outcome{r.margin, r.tolerance, "lhs=" + fmt(r.lhs.value) + " rhs=" + fmt(r.rhs.value)};
                               }});
            }
        }
    }
    out.push_back({"inequalities.sup_representation", "sup_representation", "seed=" + std::to_string(cfg.seed) + ";draws=50", [cfg] {
                       const auto gen = rng::make(cfg.seed, rng::Stream::test_points, 7);
                       double worst = 0.0;
                       for (std::uint64_t j = 0; j < 50; ++j) {
                           const auto u = gen.uniform2(j);
                           const auto v = gen.uniform2(j + 1000);
                           const double a = 0.01 + 5.0 * u[0], b = 0.01 + 5.0 * u[1], alpha = 0.05 + 0.9 * v[0];
                           const double exact = std::pow(a + b, alpha);
                           worst = std::max(worst, std::abs(sup_representation(a, b, alpha) - exact) / exact);
                       }
                       return Outcome{-worst, 1e-10, "max_rel_error=" + fmt(worst)};
                   }});

    const auto hardy = [](const std::string& name, HardyInput in, double p, double eps, HardyMode mode) {
        return Check{"inequalities.hardy." + name, "weighted_hardy", name + ";p=" + fmt(p) + ";eps=" + fmt(eps), [in, p, eps, mode] {
                         const auto r = weighted_hardy_check(in, p, eps, mode);
                         return Outcome{r.margin, r.tolerance, "lhs=" + fmt(r.lhs) + " rhs=" + fmt(r.rhs)};
                     }};
    };
    const HardyInput box{[](double x) { return x < 1.0 ? 1.0 : 0.0; }, 0.0, 1.0, kInf, 0.0, "indicator"};
    const HardyInput ex{[](double x) { return std::exp(-x); }, 0.0, kInf, kInf, 0.0, "exp"};
    const double beta = 1.5 + 1e-3;
    const HardyInput probe{[beta](double x) { return std::pow(x, -beta); }, 1.0, kInf, 1.0, beta, "probe"};
    out.push_back(hardy("indicator", box, 2.0, 2.0, HardyMode::tail));
    out.push_back(hardy("exp", ex, 2.0, 1.5, HardyMode::tail));
    out.push_back(hardy("probe", probe, 2.0, 2.0, HardyMode::tail));
    out.push_back(hardy("indicator_head", box, 2.0, 0.5, HardyMode::head));
    out.push_back({"inequalities.hardy.probe_sharpness", "weighted_hardy", "probe;p=2;eps=2;delta=1e-3", [probe] {
                       const auto r = weighted_hardy_check(probe, 2.0, 2.0);
                       return Outcome{-std::abs(1.0 - r.ratio), 0.05, "ratio=" + fmt(r.ratio)};
                   }});

    const auto id = [](double t) { return t; };
    const auto shifted = [](double x) { return x > 1.0 ? x - 1.0 : 0.0; };
    const auto kalaj = [](const std::string& name, KalajInput in) {
        return Check{"inequalities.kalaj." + name, "kalaj_lemma", name + ";alpha=" + fmt(in.alpha), [in] {
                         const auto r = kalaj_lemma_check(in);
                         return Outcome{r.margin, r.tolerance, "scale=" + fmt(r.scale) + " lhs=" + fmt(r.lhs) + " rhs=" + fmt(r.rhs)};
                     }};
    };
    out.push_back(kalaj("flat", {shifted, id, [](double) { return 1.0; }, {1.0}, 2.0}));
    out.push_back(kalaj("shifted_linear", {shifted, id, [](double t) { return 1.5 - t; }, {1.0}, 2.0}));
    out.push_back(kalaj("square", {[](double x) { return x * x; }, [](double t) { return t * t; },
                                   [](double t) { return 1.2 - 0.4 * t; }, {}, 4.0}));
}

}  // namespace

std::string_view to_string(Suite s) noexcept {
    switch (s) {
        case Suite::geometry: return "geometry";
        case Suite::norms: return "norms";
        case Suite::superlevel: return "superlevel";
        case Suite::rearrange: return "rearrange";
        case Suite::inequalities: return "inequalities";
    }
    return "?";
}

Suite parse_suite(std::string_view s) {
    for (Suite x : all_suites())
        if (to_string(x) == s) return x;
    throw ConfigError("unknown suite: " + std::string(s));
}

std::set<Suite> all_suites() {
    return {Suite::geometry, Suite::norms, Suite::superlevel, Suite::rearrange, Suite::inequalities};
}

void SuiteConfig::validate() const {
    if (suites.empty()) throw ConfigError("no suites selected");
    if (n_list.empty()) throw ConfigError("no dimensions selected");
    for (int n : n_list)
        if (n < 1 || n > 4) throw ConfigError("dimension must be in 1..4");
    if (samples < 10000) throw ConfigError("samples must be at least 10000");
    if (samples > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) throw ConfigError("samples too large");
    if (directions < 256) throw ConfigError("directions must be at least 256");
    if (radial_nodes < 16) throw ConfigError("radial nodes must be at least 16");
    if (battery < 0 || level_battery < 0) throw ConfigError("battery sizes must be nonnegative");
    if (threads < 0) throw ConfigError("threads must be nonnegative");
    if (output_dir.empty()) throw ConfigError("output directory must be set");
}

McConfig SuiteConfig::ray_config() const { return {seed, directions, radial_nodes}; }

SuiteConfig config_from_json(std::string_view text, SuiteConfig cfg) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    static const std::set<std::string> known{"seed",    "n",      "samples",    "directions", "radial_nodes",
                                             "battery", "level_battery", "suites", "output_dir", "threads"};
    try {
        for (const auto& [key, value] : j.items()) {
            if (!known.count(key)) throw ConfigError("config: unknown key '" + key + "'");
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("n")) cfg.n_list = j.at("n").get<std::vector<int>>();
        if (j.contains("samples")) cfg.samples = j.at("samples").get<std::uint64_t>();
        if (j.contains("directions")) cfg.directions = j.at("directions").get<int>();
        if (j.contains("radial_nodes")) cfg.radial_nodes = j.at("radial_nodes").get<int>();
        if (j.contains("battery")) cfg.battery = j.at("battery").get<int>();
        if (j.contains("level_battery")) cfg.level_battery = j.at("level_battery").get<int>();
        if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
        if (j.contains("suites")) {
            cfg.suites.clear();
            for (const auto& s : j.at("suites").get<std::vector<std::string>>()) {
                if (s == "all") {
                    cfg.suites = all_suites();
                } else {
                    cfg.suites.insert(parse_suite(s));
                }
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

namespace {

json config_object(const SuiteConfig& cfg) {
    json suites = json::array();
    for (Suite s : cfg.suites) suites.push_back(std::string(to_string(s)));
    // output_dir and threads do not affect results and stay out of the report.
    return {{"seed", cfg.seed},       {"n", cfg.n_list},           {"samples", cfg.samples},
            {"directions", cfg.directions}, {"radial_nodes", cfg.radial_nodes}, {"battery", cfg.battery},
            {"level_battery", cfg.level_battery},
            {"suites", suites}};
}

}  // namespace

std::string config_to_json(const SuiteConfig& cfg) {
    json j = config_object(cfg);
    j["output_dir"] = cfg.output_dir;
    j["threads"] = cfg.threads;
    return j.dump(2);
}

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::vector<Check> plan(const SuiteConfig& cfg) {
    cfg.validate();
    std::vector<Check> out;
    if (cfg.suites.count(Suite::geometry)) plan_geometry(cfg, out);
    if (cfg.suites.count(Suite::norms)) plan_norms(cfg, out);
    if (cfg.suites.count(Suite::superlevel)) plan_superlevel(cfg, out);
    if (cfg.suites.count(Suite::rearrange)) plan_rearrange(cfg, out);
    if (cfg.suites.count(Suite::inequalities)) plan_inequalities(cfg, out);
    return out;
}

SuiteResult run_checks(std::vector<Check> checks, int threads) {
    std::vector<VerificationRecord> records(checks.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < checks.size(); i = next++) {
            const auto& c = checks[i];
            auto& r = records[i];
            r.id = c.id;
            r.theorem = c.theorem;
            r.digest = fnv1a_hex(c.inputs);
            const auto start = std::chrono::steady_clock::now();
            try {
                const Outcome o = c.run();
                r.margin = o.margin;
                r.tolerance = o.tolerance;
                r.detail = o.detail;
                r.pass = std::isfinite(o.margin) && o.margin >= -o.tolerance;
            } catch (const std::exception& e) {
                r.margin = -kInf;
                r.tolerance = 0.0;
                r.pass = false;
                r.detail = std::string("error: ") + e.what();
            }
            r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t count = std::min<std::size_t>(threads > 0 ? static_cast<std::size_t>(threads) : hw, std::max<std::size_t>(checks.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
        worker();
    }
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    SuiteResult result;
    result.exit_code = std::all_of(records.begin(), records.end(), [](const auto& r) { return r.pass; }) ? 0 : 1;
    result.records = std::move(records);
    return result;
}

SuiteResult run_suite(const SuiteConfig& cfg) { return run_checks(plan(cfg), cfg.threads); }

namespace {

/// JSON cannot carry infinities; failing records from exceptions report null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

std::string report_json(const SuiteConfig& cfg, std::span<const VerificationRecord> records) {
    json recs = json::array();
    std::size_t passed = 0;
    for (const auto& r : records) {
        passed += r.pass ? 1 : 0;
        recs.push_back({{"id", r.id},
                        {"theorem", r.theorem},
                        {"inputs_digest", r.digest},
                        {"margin", number(r.margin)},
                        {"tolerance", number(r.tolerance)},
                        {"pass", r.pass},
                        {"detail", r.detail}});
    }
    json j{{"schema", kReportSchema},
           {"config", config_object(cfg)},
           {"summary", {{"records", records.size()}, {"passed", passed}, {"failed", records.size() - passed}}},
           {"records", recs}};
    return j.dump(2) + "\n";
}

std::string timings_json(std::span<const VerificationRecord> records) {
    json t = json::object();
    double total = 0.0;
    for (const auto& r : records) {
        t[r.id] = r.runtime_s;
        total += r.runtime_s;
    }
    return json{{"schema", kReportSchema}, {"total_check_seconds", total}, {"runtime_s", t}}.dump(2) + "\n";
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::string csv_number(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

CurveFiles dump_curves(const LevelFunction& u, std::span<const double> t_grid, const McConfig& cfg, const std::string& dir,
                       const std::string& stem) {
    if (t_grid.empty()) throw std::invalid_argument("dump_curves: empty t-grid");
    std::filesystem::create_directories(dir);
    const std::vector<double> grid(t_grid.begin(), t_grid.end());
    const auto mu = superlevel::distribution_function(u, grid, cfg);
    const auto g = superlevel::monotone_functional(mu, u.b());
    const int n = u.dim();

    CurveFiles files;
    files.distribution = (std::filesystem::path(dir) / (stem + "_distribution.csv")).string();
    std::ostringstream d;
    d << "t,mu,mu_stderr,g,g_stderr,weak_type_bound\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid[k];
        const double bound = t < 1.0 ? std::pow(1.0 / t - 1.0, n) : 0.0;
        d << csv_number(t) << ',' << csv_number(mu.mu[k]) << ',' << csv_number(mu.mu_stderr[k]) << ',' << csv_number(g.g[k]) << ','
          << csv_number(g.g_stderr[k]) << ',' << csv_number(bound) << '\n';
    }
    write_file(files.distribution, d.str());

    const auto ustar = rearrange::decreasing_rearrangement(mu, u.b() / n);
    files.rearrangement = (std::filesystem::path(dir) / (stem + "_rearrangement.csv")).string();
    std::ostringstream r;
    r << "s,ustar\n";
    for (std::size_t k = 0; k < ustar.s_grid.size(); ++k) r << csv_number(ustar.s_grid[k]) << ',' << csv_number(ustar.ustar[k]) << '\n';
    write_file(files.rearrangement, r.str());
    return files;
}

void write_outputs(const SuiteConfig& cfg, const SuiteResult& result) {
    const std::filesystem::path root(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw std::runtime_error("cannot create " + root.string() + ": " + ec.message());
    write_file(root / "report.json", report_json(cfg, result.records));
    write_file(root / "timings.json", timings_json(result.records));

    const auto curves = (root / "curves").string();
    const McConfig rays = cfg.ray_config();
    for (int n : cfg.n_list) {
        const LevelFunction flat(Polynomial::constant(n, 1.0), 1.0, 1.0);
        dump_curves(flat, superlevel::default_t_grid(1.0), rays, curves, "flat_n" + std::to_string(n));
        const LevelFunction z(Polynomial::coordinate(n, 0), 2.0, 1.0);
        const double t0 = holo::level_maximum(z).value;
        dump_curves(z, superlevel::default_t_grid(t0), rays, curves, "z1_n" + std::to_string(n));
    }
}

}  // namespace hypball::harness

#include "hypball/superlevel.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "hypball/quadrature.hpp"
#include "hypball/special.hpp"

namespace hypball::superlevel {

namespace {

constexpr std::size_t kScanCells = 1024;

/// Volume coordinate s = sinh^{2n}(rho) and its rho-derivative.
double volume_coordinate(double rho, int n) { return std::pow(std::sinh(rho), 2 * n); }
double volume_density(double rho, int n) {
    return 2.0 * n * std::pow(std::sinh(rho), 2 * n - 1) * std::cosh(rho);
}

/// Root of ray.value(rho) = t in a bracketing cell.
template <class F>
double crossing(const F& value, double t, double lo, double hi, double flo, double fhi) {
    auto f = [&](double rho) { return value(rho) - t; };
    std::uintmax_t iters = 100;
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo - t, fhi - t,
                                                          boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (a + b);
}

std::vector<double> scan_grid(double rho_max) {
    std::vector<double> rho(kScanCells + 1);
    for (std::size_t i = 0; i <= kScanCells; ++i) rho[i] = rho_max * static_cast<double>(i) / kScanCells;
    return rho;
}

std::size_t batch_begin(std::size_t j, std::size_t total, std::size_t batches) { return j * total / batches; }

template <class At>
std::vector<std::vector<double>> batches_of(std::size_t rows, std::size_t cols, std::size_t batches, At at) {
    if (batches < 2 || batches > rows) throw std::invalid_argument("batch_means: need 2 <= batches <= directions");
    std::vector<std::vector<double>> out(batches, std::vector<double>(cols, 0.0));
    for (std::size_t g = 0; g < batches; ++g) {
        const std::size_t lo = batch_begin(g, rows, batches);
        const std::size_t hi = batch_begin(g + 1, rows, batches);
        for (std::size_t j = lo; j < hi; ++j)
            for (std::size_t c = 0; c < cols; ++c) out[g][c] += at(j, c);
        for (auto& v : out[g]) v /= static_cast<double>(hi - lo);
    }
    return out;
}

std::vector<double> sizes_of(std::size_t rows, std::size_t batches) {
    std::vector<double> w(batches);
    for (std::size_t g = 0; g < batches; ++g)
        w[g] = static_cast<double>(batch_begin(g + 1, rows, batches) - batch_begin(g, rows, batches));
    return w;
}

}  // namespace

double certified_cutoff(const LevelFunction& u, double t) {
    if (!(t > 0.0)) throw std::domain_error("certified_cutoff: level must be positive");
    // u <= C^a cosh^{-2b}(rho) with C = sum |c_a|.
    const double top = std::pow(u.poly().coefficient_l1(), u.a());
    const double c = std::pow(2.0 * top / t, 1.0 / (2.0 * u.b()));
    return std::max(std::acosh(std::max(c, 1.0)), 1e-3);
}

std::vector<double> default_t_grid(double t0, std::size_t count) {
    if (!(t0 > 0.0) || count < 2) throw std::invalid_argument("default_t_grid: need t0 > 0 and count >= 2");
    std::vector<double> t(count);
    const double lo = std::log(1e-3 * t0);
    const double hi = std::log((1.0 - 1e-3) * t0);
    for (std::size_t k = 0; k < count; ++k) t[k] = std::exp(lo + (hi - lo) * static_cast<double>(k) / (count - 1));
    return t;
}

RaySamples::RaySamples(const LevelFunction& u, std::vector<double> t_grid, const McConfig& cfg)
    : RaySamples(u.dim(),
                 [&u](std::span<const Complex> zeta) {
                     const auto ray = std::make_shared<LevelFunction::Ray>(u.ray(zeta));
                     return RayProfile{[ray](double r) { return ray->value(r); },
                                       [ray](double r) { return ray->derivative(r); }};
                 },
                 t_grid.empty() ? 0.0 : certified_cutoff(u, *std::min_element(t_grid.begin(), t_grid.end())),
                 t_grid, cfg) {}

RaySamples::RaySamples(int n, const RayFamily& family, double rho_max, std::vector<double> t_grid, const McConfig& cfg)
    : t_(std::move(t_grid)) {
    cfg.validate();
    if (t_.empty()) throw std::invalid_argument("RaySamples: empty level grid");
    const double t_min = *std::min_element(t_.begin(), t_.end());
    if (!(t_min > 0.0)) throw std::domain_error("RaySamples: levels must be positive");
    if (!(rho_max > 0.0)) throw std::domain_error("RaySamples: cutoff radius must be positive");

    const DirectionSet dirs(n, cfg.sphere_samples, cfg.seed);
    directions_ = dirs.size();
    cutoff_rho_ = rho_max;
    const auto rho = scan_grid(cutoff_rho_);
    std::vector<double> s(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) s[i] = volume_coordinate(rho[i], n);

    const std::size_t T = t_.size();
    length_.assign(directions_ * T, 0.0);
    slope_.assign(directions_ * T, 0.0);
    std::vector<double> v(rho.size());

    for (std::size_t j = 0; j < directions_; ++j) {
        const RayProfile ray = family(dirs[j]);
        for (std::size_t i = 0; i < rho.size(); ++i) {
            v[i] = ray.value(rho[i]);
            grid_max_ = std::max(grid_max_, v[i]);
            if (v[i] >= 0.5 * t_min) scan_rho_ = std::max(scan_rho_, rho[i]);
        }
        for (std::size_t k = 0; k < T; ++k) {
            const double t = t_[k];
            double len = 0.0;
            double der = 0.0;
            bool inside = v[0] > t;
            double start = 0.0;
            for (std::size_t i = 0; i < kScanCells; ++i) {
                const bool next = v[i + 1] > t;
                if (next == inside) continue;
                const double rc = crossing(ray.value, t, rho[i], rho[i + 1], v[i], v[i + 1]);
                if (next) start = volume_coordinate(rc, n);
                else len += volume_coordinate(rc, n) - start;
                const double du = std::abs(ray.derivative(rc));
                if (du > 0.0) der -= volume_density(rc, n) / du;
                inside = next;
            }
            if (inside) {
                len += s.back() - start;
                open_ = true;
            }
            length_[j * T + k] = len;
            slope_[j * T + k] = der;
        }
    }
}

stats::MeanAndError RaySamples::linear(std::span<const double> w, std::span<const double> d) const {
    const std::size_t T = t_.size();
    if (w.size() != T || (!d.empty() && d.size() != T)) throw std::invalid_argument("RaySamples::linear: weight size");
    stats::Running acc;
    for (std::size_t j = 0; j < directions_; ++j) {
        double x = 0.0;
        for (std::size_t k = 0; k < T; ++k) x += w[k] * length_[j * T + k];
        for (std::size_t k = 0; k < d.size(); ++k) x += d[k] * slope_[j * T + k];
        acc.add(x);
    }
    return {acc.mean(), acc.std_error()};
}

std::vector<std::vector<double>> RaySamples::batch_means(std::size_t batches) const {
    const std::size_t T = t_.size();
    return batches_of(directions_, 2 * T, batches, [&](std::size_t j, std::size_t c) {
        return c < T ? length_[j * T + c] : slope_[j * T + c - T];
    });
}

std::vector<double> RaySamples::batch_sizes(std::size_t batches) const { return sizes_of(directions_, batches); }

void LevelQuadrature::panel(double lo, double hi, double t0, const std::function<double(double)>& h) {
    if (!(hi > lo)) return;
    // The onset of mu below t0 behaves like (t0 - t)^{k/2}; the cubic grading smooths it.
    const double split = 0.5 * t0;
    if (hi >= t0 && lo < split) {
        panel(lo, split, t0, h);
        panel(split, hi, t0, h);
        return;
    }
    for (int order : {48, 24}) {
        auto push = [&](double at, double w) {
            t.push_back(at);
            fine.push_back(order == 48 ? w : 0.0);
            coarse.push_back(order == 48 ? 0.0 : w);
        };
        if (hi >= t0) {
            const auto rule = quad::gauss_legendre(order, 0.0, 1.0);
            for (std::size_t i = 0; i < rule.size(); ++i) {
                const double x = rule.nodes[i];
                const double at = hi - (hi - lo) * x * x * x;
                push(at, rule.weights[i] * 3.0 * (hi - lo) * x * x * h(at));
            }
        } else {
            const auto rule = quad::gauss_legendre(order, std::log(lo), std::log(hi));
            for (std::size_t i = 0; i < rule.size(); ++i) {
                const double at = std::exp(rule.nodes[i]);
                push(at, rule.weights[i] * at * h(at));
            }
        }
    }
}

void LevelQuadrature::power_tail(double t_min, double s, double decay) {
    const double w = s * std::pow(t_min, s) / (s - decay);
    t.push_back(t_min);
    fine.push_back(w);
    coarse.push_back(w);
}

DistributionFunction summarize(const RaySamples& rays, int n, double t0) {
    DistributionFunction out;
    out.n = n;
    out.t0 = std::max(t0, rays.grid_max());
    out.t_grid = rays.t_grid();
    out.directions = rays.directions();
    out.cutoff_rho = rays.cutoff_rho();
    out.scan_rho = rays.scan_rho();
    for (std::size_t k = 0; k < out.t_grid.size(); ++k) {
        stats::Running len;
        stats::Running der;
        for (std::size_t j = 0; j < rays.directions(); ++j) {
            len.add(rays.length(j, k));
            der.add(rays.slope(j, k));
        }
        out.mu.push_back(len.mean());
        out.mu_stderr.push_back(len.std_error());
        out.mu_prime.push_back(der.mean());
        out.mu_prime_stderr.push_back(der.std_error());
    }
    if (rays.reaches_cutoff()) out.warning = "superlevel sets reach the radial cutoff";
    return out;
}

DistributionFunction distribution_function(const LevelFunction& u, std::span<const double> t_grid, const McConfig& cfg) {
    if (t_grid.empty()) throw std::invalid_argument("distribution_function: empty level grid");
    if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw std::invalid_argument("distribution_function: levels must ascend");
    const RaySamples rays(u, std::vector<double>(t_grid.begin(), t_grid.end()), cfg);
    return summarize(rays, u.dim(), holo::level_maximum(u).value);
}

DistributionFunction distribution_function(const LevelFunction& u, const McConfig& cfg) {
    const auto grid = default_t_grid(holo::level_maximum(u).value);
    return distribution_function(u, grid, cfg);
}

MonotoneFunctional monotone_functional(const DistributionFunction& mu, double b) {
    if (!(b > 0.0)) throw std::domain_error("monotone_functional: b must be positive");
    MonotoneFunctional g;
    g.t_grid = mu.t_grid;
    const double inv_n = 1.0 / mu.n;
    for (std::size_t k = 0; k < mu.t_grid.size(); ++k) {
        const double tb = std::pow(mu.t_grid[k], 1.0 / b);
        const double m = std::max(mu.mu[k], 0.0);
        g.g.push_back(tb * (std::pow(m, inv_n) + 1.0));
        // Delta method; at mu = 0 fall back to se^{1/n}, the size of a one-sigma excursion.
        const double se = m > 0.0 ? inv_n * std::pow(m, inv_n - 1.0) * mu.mu_stderr[k] : std::pow(mu.mu_stderr[k], inv_n);
        g.g_stderr.push_back(tb * se);
    }
    return g;
}

namespace {

CurveReport finish(CurveReport r) {
    r.worst = -std::numeric_limits<double>::infinity();
    r.worst_raw = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.margins.size(); ++k) {
        const double violation = -r.margins[k];
        if (violation - r.tolerances[k] > r.worst) r.worst = violation - r.tolerances[k];
        r.worst_raw = std::max(r.worst_raw, violation);
    }
    if (r.margins.empty()) r.worst = r.worst_raw = 0.0;
    r.pass = r.worst <= 0.0;
    return r;
}

}  // namespace

CurveReport monotonicity_check(const DistributionFunction& mu, double b) {
    const auto g = monotone_functional(mu, b);
    CurveReport r;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < g.t_grid.size(); ++k) {
        if (!(g.t_grid[k + 1] < mu.t0)) break;
        const double m = g.g[k] - g.g[k + 1];
        const double tol = stats::tolerance(std::hypot(g.g_stderr[k], g.g_stderr[k + 1]), g.g[k]);
        r.margins.push_back(m);
        r.tolerances.push_back(tol);
        if (tol - m > worst) {
            worst = tol - m;
            r.worst_t = g.t_grid[k + 1];
        }
    }
    return finish(std::move(r));
}

CurveReport differential_inequality_check(const DistributionFunction& mu, double b) {
    std::vector<double> t;
    std::vector<double> m;
    for (std::size_t k = 0; k < mu.t_grid.size(); ++k) {
        if (mu.t_grid[k] < mu.t0 && mu.mu[k] > 0.0) {
            t.push_back(mu.t_grid[k]);
            m.push_back(mu.mu[k]);
        }
    }
    CurveReport r;
    if (t.size() < 3) return finish(std::move(r));
    const quad::Pchip spline(t, m);
    const double inv_n = 1.0 / mu.n;
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t idx = 0;
    for (std::size_t k = 0; k < mu.t_grid.size(); ++k) {
        if (!(mu.t_grid[k] < mu.t0 && mu.mu[k] > 0.0)) continue;
        ++idx;
        if (idx == 1 || idx == t.size()) continue;  // interior points only
        const double tk = mu.t_grid[k];
        const double mk = mu.mu[k];
        const double lead = b * tk * inv_n * std::pow(mk, inv_n - 1.0);
        const double dp = spline.derivative(tk);
        const double value = lead * dp + std::pow(mk, inv_n) + 1.0;
        // Interpolation error is estimated against the crossing-slope derivative.
        const double interp = lead * std::abs(dp - mu.mu_prime[k]);
        const double d_mu = (inv_n * std::pow(mk, inv_n - 1.0) +
                             std::abs(lead * (inv_n - 1.0) / mk * mu.mu_prime[k])) * mu.mu_stderr[k];
        const double se = std::hypot(lead * mu.mu_prime_stderr[k], d_mu);
        const double tol = stats::tolerance(se, 1.0) + interp;
        r.margins.push_back(-value);
        r.tolerances.push_back(tol);
        if (value - tol > worst) {
            worst = value - tol;
            r.worst_t = tk;
        }
    }
    return finish(std::move(r));
}

WeakTypeReport weak_type_check(const Polynomial& f, double r, std::span<const double> t_grid, const McConfig& cfg) {
    const int n = f.dim();
    const auto normed = norms::normalize(f, SpaceParams::hardy(n, n * r), cfg);
    const LevelFunction u(normed.f, r, 1.0);
    WeakTypeReport report;
    report.scale = normed.scale;
    report.mu = distribution_function(u, t_grid, cfg);
    CurveReport c;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        const double t = t_grid[k];
        const double bound = std::pow(std::max(1.0 / t - 1.0, 0.0), n);
        const double m = bound - report.mu.mu[k];
        const double tol = stats::tolerance(report.mu.mu_stderr[k], bound);
        c.margins.push_back(m);
        c.tolerances.push_back(tol);
        if (-m - tol > worst) {
            worst = -m - tol;
            c.worst_t = t;
        }
    }
    report.margins = finish(std::move(c));
    return report;
}

WeakTypeReport weak_type_check(const Polynomial& f, double r, const McConfig& cfg) {
    const int n = f.dim();
    const auto normed = norms::normalize(f, SpaceParams::hardy(n, n * r), cfg);
    const LevelFunction u(normed.f, r, 1.0);
    const auto grid = default_t_grid(holo::level_maximum(u).value);
    return weak_type_check(f, r, grid, cfg);
}

namespace {

struct RuleResult {
    stats::MeanAndError value;
    double quadrature_error = 0.0;
};

RuleResult apply_rule(const LevelFunction& u, const LevelQuadrature& rule, const McConfig& cfg) {
    const RaySamples rays(u, rule.t, cfg);
    const auto fine = rays.linear(rule.fine);
    const auto coarse = rays.linear(rule.coarse);
    return {fine, std::abs(fine.value - coarse.value)};
}

constexpr double kLayerFloor = 1e-6;

}  // namespace

LayerCake layer_cake_bergman(const Polynomial& f, double r, double alpha, const McConfig& cfg) {
    const int n = f.dim();
    if (!(alpha > n)) throw std::domain_error("layer_cake_bergman: alpha must exceed n");
    const LevelFunction u(f, r, 1.0);
    const double t0 = holo::level_maximum(u).value;
    LayerCake out;
    if (!(t0 > 0.0)) {
        out.value = {0.0, 0.0, 0, Method::radial_product, {}};
        return out;
    }
    // int u^alpha dv_g = alpha int_0^{t0} mu(t) t^{alpha - 1} dt
    LevelQuadrature rule;
    const double t_min = kLayerFloor * t0;
    rule.panel(t_min, t0, t0, [alpha](double t) { return alpha * std::pow(t, alpha - 1.0); });
    rule.power_tail(t_min, alpha, n);
    const auto res = apply_rule(u, rule, cfg);
    const double c = special::c_alpha(alpha, n);
    out.value = {c * res.value.value, c * res.value.std_error, static_cast<std::uint64_t>(cfg.sphere_samples), Method::radial_product, {}};
    out.quadrature_error = c * res.quadrature_error;
    if (out.quadrature_error > 0.1 * stats::tolerance(out.value.std_error, out.value.value)) {
        out.warning = "level quadrature contributes more than 10% of the error budget";
        out.value.warning = out.warning;
    }
    return out;
}

GFunction GFunction::power(double s) {
    if (!(s > 0.0)) throw std::domain_error("GFunction::power: exponent must be positive");
    GFunction g;
    g.kind = Kind::power;
    g.s = s;
    return g;
}

GFunction GFunction::hinge(double c) {
    if (!(c > 0.0)) throw std::domain_error("GFunction::hinge: threshold must be positive");
    GFunction g;
    g.kind = Kind::hinge;
    g.c = c;
    return g;
}

GFunction GFunction::piecewise(std::vector<double> knots, std::vector<double> slopes) {
    if (knots.empty() || knots.size() != slopes.size()) throw std::invalid_argument("GFunction::piecewise: need one slope per knot");
    if (!(knots.front() > 0.0)) throw std::domain_error("GFunction::piecewise: G must vanish near 0 (first knot > 0)");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (i > 0 && !(knots[i] > knots[i - 1])) throw std::invalid_argument("GFunction::piecewise: knots must ascend");
        if (slopes[i] < 0.0) throw std::domain_error("GFunction::piecewise: slopes must be nonnegative");
    }
    GFunction g;
    g.kind = Kind::piecewise;
    g.knots = std::move(knots);
    g.slopes = std::move(slopes);
    return g;
}

namespace {

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    return out;
}

}  // namespace

GFunction GFunction::parse(const std::string& tag) {
    const auto colon = tag.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("GFunction::parse: expected kind:params in '" + tag + "'");
    const std::string kind = tag.substr(0, colon);
    const std::string rest = tag.substr(colon + 1);
    if (kind == "power") return power(std::stod(rest));
    if (kind == "hinge") return hinge(std::stod(rest));
    if (kind == "piecewise") {
        const auto second = rest.find(':');
        if (second == std::string::npos) throw std::invalid_argument("GFunction::parse: piecewise needs knots:slopes");
        return piecewise(parse_list(rest.substr(0, second)), parse_list(rest.substr(second + 1)));
    }
    throw std::invalid_argument("GFunction::parse: unknown kind '" + kind + "'");
}

double GFunction::operator()(double t) const {
    switch (kind) {
        case Kind::power: return std::pow(std::max(t, 0.0), s);
        case Kind::hinge: return std::max(t - c, 0.0);
        case Kind::piecewise: {
            double acc = 0.0;
            for (std::size_t i = 0; i < knots.size(); ++i) {
                if (t <= knots[i]) break;
                const double hi = i + 1 < knots.size() ? std::min(t, knots[i + 1]) : t;
                acc += slopes[i] * (hi - knots[i]);
            }
            return acc;
        }
    }
    return 0.0;
}

double GFunction::derivative(double t) const {
    switch (kind) {
        case Kind::power: return t > 0.0 ? s * std::pow(t, s - 1.0) : 0.0;
        case Kind::hinge: return t > c ? 1.0 : 0.0;
        case Kind::piecewise: {
            double d = 0.0;
            for (std::size_t i = 0; i < knots.size() && t > knots[i]; ++i) d = slopes[i];
            return d;
        }
    }
    return 0.0;
}

std::string GFunction::name() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::power: out << "power:" << s; break;
        case Kind::hinge: out << "hinge:" << c; break;
        case Kind::piecewise:
            out << "piecewise:";
            for (std::size_t i = 0; i < knots.size(); ++i) out << (i ? "," : "") << knots[i];
            out << ":";
            for (std::size_t i = 0; i < slopes.size(); ++i) out << (i ? "," : "") << slopes[i];
            break;
    }
    return out.str();
}

double extremal_value(const GFunction& G, int n) {
    auto mu1 = [n](double t) { return std::pow(std::max(1.0 / t - 1.0, 0.0), n); };
    switch (G.kind) {
        case GFunction::Kind::power:
            if (!(G.s > n)) throw std::domain_error("extremal_value: power G needs s > n for a finite value");
            // s int_0^1 (1 - t)^n t^{s - n - 1} dt
            return G.s * special::beta(G.s - n, n + 1.0);
        case GFunction::Kind::hinge:
            if (G.c >= 1.0) return 0.0;
            return quad::integrate(mu1, G.c, 1.0, 1e-13).value;
        case GFunction::Kind::piecewise: {
            double acc = 0.0;
            for (std::size_t i = 0; i < G.knots.size(); ++i) {
                const double lo = G.knots[i];
                const double hi = i + 1 < G.knots.size() ? std::min(G.knots[i + 1], 1.0) : 1.0;
                if (lo >= hi || G.slopes[i] == 0.0) continue;
                acc += G.slopes[i] * quad::integrate(mu1, lo, hi, 1e-13).value;
            }
            return acc;
        }
    }
    return 0.0;
}

ExtremalReport extremal_functional_check(const GFunction& G, const Polynomial& f, double r, const McConfig& cfg) {
    const int n = f.dim();
    const auto normed = norms::normalize(f, SpaceParams::hardy(n, n * r), cfg);
    const LevelFunction u(normed.f, r, 1.0);
    const double t0 = holo::level_maximum(u).value;

    ExtremalReport report;
    report.scale = normed.scale;
    report.extremal = extremal_value(G, n);

    LevelQuadrature rule;
    switch (G.kind) {
        case GFunction::Kind::power: {
            const double t_min = kLayerFloor * t0;
            const double s = G.s;
            rule.panel(t_min, t0, t0, [s](double t) { return s * std::pow(t, s - 1.0); });
            rule.power_tail(t_min, s, n);
            break;
        }
        case GFunction::Kind::hinge: rule.panel(G.c, t0, t0, [](double) { return 1.0; }); break;
        case GFunction::Kind::piecewise:
            for (std::size_t i = 0; i < G.knots.size(); ++i) {
                const double hi = i + 1 < G.knots.size() ? std::min(G.knots[i + 1], t0) : t0;
                const double slope = G.slopes[i];
                if (slope > 0.0) rule.panel(G.knots[i], hi, t0, [slope](double) { return slope; });
            }
            break;
    }
    if (rule.t.empty()) {
        report.value = {0.0, 0.0, 0, Method::exact, {}};
    } else {
        const auto res = apply_rule(u, rule, cfg);
        report.value = {res.value.value, res.value.std_error, static_cast<std::uint64_t>(cfg.sphere_samples), Method::radial_product, {}};
        report.quadrature_error = res.quadrature_error;
    }
    report.margin = report.extremal - report.value.value;
    report.tolerance = stats::tolerance(report.value.std_error, report.extremal) + report.quadrature_error;
    report.pass = report.margin >= -report.tolerance;
    return report;
}

RayIntegrals::RayIntegrals(const LevelFunction& w, double tau, std::size_t functionals, const Integrand& integrand,
                           const McConfig& cfg, bool need_gradient)
    : k_(functionals) {
    cfg.validate();
    if (!(tau > 0.0)) throw std::domain_error("RayIntegrals: the truncation level must be positive");
    if (k_ == 0) throw std::invalid_argument("RayIntegrals: no functionals");
    const int n = w.dim();
    const DirectionSet dirs(n, cfg.sphere_samples, cfg.seed);
    directions_ = dirs.size();
    data_.assign(directions_ * k_, 0.0);
    const auto rho = scan_grid(certified_cutoff(w, tau));
    const auto gl = quad::gauss_legendre(4, 0.0, 1.0);
    std::vector<double> v(rho.size());
    std::vector<double> scratch(k_);

    for (std::size_t j = 0; j < directions_; ++j) {
        const auto zeta = dirs[j];
        const auto ray = w.ray(zeta);
        for (std::size_t i = 0; i < rho.size(); ++i) v[i] = ray.value(rho[i]);
        double* out = data_.data() + j * k_;
        auto panel = [&](double lo, double hi) {
            for (std::size_t q = 0; q < gl.size(); ++q) {
                const double x = lo + (hi - lo) * gl.nodes[q];
                const double weight = (hi - lo) * gl.weights[q] * volume_density(x, n);
                const double val = std::max(ray.value(x) - tau, 0.0);
                const double grad = need_gradient ? w.gradient_norm(BallPoint::radial(zeta, std::tanh(x))) : 0.0;
                std::fill(scratch.begin(), scratch.end(), 0.0);
                integrand(val, grad, scratch);
                for (std::size_t c = 0; c < k_; ++c) out[c] += weight * scratch[c];
            }
        };
        for (std::size_t i = 0; i < kScanCells; ++i) {
            const bool a = v[i] > tau;
            const bool b = v[i + 1] > tau;
            if (!a && !b) continue;
            if (a && b) {
                panel(rho[i], rho[i + 1]);
                continue;
            }
            const double rc = crossing([&ray](double r) { return ray.value(r); }, tau, rho[i], rho[i + 1], v[i], v[i + 1]);
            if (a) panel(rho[i], rc);
            else panel(rc, rho[i + 1]);
        }
    }
}

stats::MeanAndError RayIntegrals::mean(std::size_t k) const {
    stats::Running acc;
    for (std::size_t j = 0; j < directions_; ++j) acc.add(data_[j * k_ + k]);
    return {acc.mean(), acc.std_error()};
}

std::vector<std::vector<double>> RayIntegrals::batch_means(std::size_t batches) const {
    return batches_of(directions_, k_, batches, [&](std::size_t j, std::size_t c) { return data_[j * k_ + c]; });
}

std::vector<double> RayIntegrals::batch_sizes(std::size_t batches) const { return sizes_of(directions_, batches); }

}  // namespace hypball::superlevel

#include "hypball/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <math.h>  // pchip.hpp calls isnan unqualified

#include <boost/math/interpolators/pchip.hpp>

#include "hypball/quadrature.hpp"

namespace hypball {

double DecreasingRearrangement::operator()(double s) const {
    if (s_grid.empty()) return 0.0;
    if (s < 0.0) return ustar.front();
    const auto idx = static_cast<std::size_t>(std::upper_bound(s_grid.begin(), s_grid.end(), s) - s_grid.begin());
    if (idx == s_grid.size()) {
        if (tail_exponent == 0.0) return 0.0;
        return ustar.back() * std::pow(s_grid.back() / s, tail_exponent);
    }
    const double s0 = s_grid[idx - 1];
    const double s1 = s_grid[idx];
    const double w = (s - s0) / (s1 - s0);
    return ustar[idx - 1] + w * (ustar[idx] - ustar[idx - 1]);
}

double DecreasingRearrangement::derivative(double s) const {
    if (s_grid.empty() || s < 0.0) return 0.0;
    const auto idx = static_cast<std::size_t>(std::upper_bound(s_grid.begin(), s_grid.end(), s) - s_grid.begin());
    if (idx == s_grid.size()) {
        if (tail_exponent == 0.0) return 0.0;
        return -tail_exponent * (*this)(s) / s;
    }
    const double ds = s_grid[idx] - s_grid[idx - 1];
    return ds > 0.0 ? (ustar[idx] - ustar[idx - 1]) / ds : 0.0;
}

double DecreasingRearrangement::support_volume() const {
    if (tail_exponent > 0.0) return std::numeric_limits<double>::infinity();
    return s_grid.empty() ? 0.0 : s_grid.back();
}

double DecreasingRearrangement::power_integral(double q) const {
    if (!(q > 0.0)) throw std::domain_error("power_integral: q must be positive");
    double acc = 0.0;
    for (std::size_t i = 1; i < s_grid.size(); ++i) {
        const double ds = s_grid[i] - s_grid[i - 1];
        if (ds <= 0.0) continue;
        const double a = ustar[i - 1];
        const double b = ustar[i];
        // int of a linear function to the power q, in closed form
        if (std::abs(a - b) <= 1e-14 * std::max(a, b)) acc += ds * std::pow(a, q);
        else acc += ds * (std::pow(a, q + 1.0) - std::pow(b, q + 1.0)) / ((q + 1.0) * (a - b));
    }
    if (tail_exponent > 0.0 && !s_grid.empty()) {
        const double decay = q * tail_exponent;
        if (!(decay > 1.0)) return std::numeric_limits<double>::infinity();
        acc += std::pow(ustar.back(), q) * s_grid.back() / (decay - 1.0);
    }
    return acc;
}

namespace rearrange {

namespace {

double volume_coordinate(double rho, int n) { return std::pow(std::sinh(rho), 2 * n); }
double volume_density(double rho, int n) { return 2.0 * n * std::pow(std::sinh(rho), 2 * n - 1) * std::cosh(rho); }

constexpr std::size_t kBatches = 16;

/// Joins per-batch vectors of several estimators that share the same directions.
std::vector<std::vector<double>> join(std::vector<std::vector<double>> a, const std::vector<std::vector<double>>& b) {
    for (std::size_t g = 0; g < a.size(); ++g) a[g].insert(a[g].end(), b[g].begin(), b[g].end());
    return a;
}

DistributionFunction with_mu(const DistributionFunction& base, std::span<const double> mu) {
    DistributionFunction d = base;
    d.mu.assign(mu.begin(), mu.begin() + static_cast<std::ptrdiff_t>(base.t_grid.size()));
    return d;
}

/// Sum over level segments of |int q t^{q-1} (mu_linear - mu_cubic) dt|, with a monotone cubic through
/// the same points. The linear graph is what power_integral integrates, so this bounds its bias.
double interpolation_bias(const DistributionFunction& mu, double q) {
    std::vector<double> t{0.0}, m{mu.mu.front()};
    for (std::size_t k = 0; k < mu.t_grid.size(); ++k) {
        if (mu.t_grid[k] > t.back()) {
            t.push_back(mu.t_grid[k]);
            m.push_back(mu.mu[k]);
        }
    }
    if (t.size() < 4) return 0.0;
    const std::vector<double> tt = t, mm = m;
    const auto cubic = boost::math::interpolators::pchip<std::vector<double>>(std::move(t), std::move(m));
    static const quad::Rule gl = quad::gauss_legendre(6, 0.0, 1.0);
    double bias = 0.0;
    for (std::size_t i = 1; i < tt.size(); ++i) {
        const double h = tt[i] - tt[i - 1];
        double seg = 0.0;
        for (std::size_t j = 0; j < gl.size(); ++j) {
            const double x = tt[i - 1] + h * gl.nodes[j];
            const double lin = mm[i - 1] + gl.nodes[j] * (mm[i] - mm[i - 1]);
            seg += gl.weights[j] * q * std::pow(x, q - 1.0) * (lin - cubic(x));
        }
        bias += std::abs(seg) * h;
    }
    return bias;
}

/// Every other level, keeping the first and last, for a coarse-grid comparison.
DistributionFunction thinned(const DistributionFunction& mu) {
    DistributionFunction d = mu;
    d.t_grid.clear();
    d.mu.clear();
    d.mu_stderr.clear();
    for (std::size_t k = 0; k < mu.t_grid.size(); ++k) {
        if (k % 2 == 0 || k + 1 == mu.t_grid.size()) {
            d.t_grid.push_back(mu.t_grid[k]);
            d.mu.push_back(mu.mu[k]);
            d.mu_stderr.push_back(mu.mu_stderr[k]);
        }
    }
    return d;
}

}  // namespace

DecreasingRearrangement decreasing_rearrangement(const DistributionFunction& mu, double tail_exponent) {
    if (tail_exponent < 0.0) throw std::domain_error("decreasing_rearrangement: tail exponent must be nonnegative");
    if (mu.t_grid.size() != mu.mu.size()) throw std::invalid_argument("decreasing_rearrangement: size mismatch");
    DecreasingRearrangement r;
    r.tail_exponent = tail_exponent;
    r.s_grid.push_back(0.0);
    r.ustar.push_back(std::max(mu.t0, 0.0));
    double s_prev = 0.0;
    for (std::size_t i = mu.t_grid.size(); i-- > 0;) {
        if (!(mu.mu[i] > 0.0) || mu.t_grid[i] >= mu.t0) continue;
        s_prev = std::max(s_prev, mu.mu[i]);  // guards against sampling noise in mu
        r.s_grid.push_back(s_prev);
        r.ustar.push_back(mu.t_grid[i]);
    }
    if (tail_exponent == 0.0) {
        r.s_grid.push_back(s_prev);
        r.ustar.push_back(0.0);
    }
    return r;
}

double hyperbolic_symmetrization(const DecreasingRearrangement& ustar, const BallPoint& z) {
    const int n = z.dim();
    return ustar(std::pow(z.norm2() / z.defect(), n));
}

double euclidean_symmetrization(const DecreasingRearrangement& ustar, std::span<const Complex> z) {
    double r2 = 0.0;
    for (const auto& c : z) r2 += std::norm(c);
    return ustar(std::pow(r2, static_cast<double>(z.size())));
}

ScalarField hyperbolic_field(const DecreasingRearrangement& ustar) {
    return {[ustar](const BallPoint& z) { return hyperbolic_symmetrization(ustar, z); }, {}, 1.0};
}

std::vector<double> truncation_levels(double tau, double t0, std::size_t count) {
    if (!(tau > 0.0) || !(t0 > tau) || count < 8) throw std::invalid_argument("truncation_levels: need 0 < tau < t0 and count >= 8");
    // Geometric in w = t + tau resolves the bottom; (1 - x)^2 spacing resolves the top.
    const double top = t0 - tau;
    std::vector<double> t{1e-12 * top};
    const std::size_t half = count / 2;
    for (std::size_t k = 1; k < half; ++k) t.push_back(tau * std::pow(t0 / tau, static_cast<double>(k) / half) - tau);
    for (std::size_t k = 1; k < count - half + 1; ++k) {
        const double x = 1.0 - static_cast<double>(k) / static_cast<double>(count - half + 1);
        t.push_back(top * (1.0 - x * x));
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

namespace {

struct TruncationSamples {
    Truncation trunc;
    superlevel::RaySamples rays;
};

TruncationSamples sample_truncation(const LevelFunction& w, double tau, const McConfig& cfg, std::size_t levels) {
    const double t0 = holo::level_maximum(w).value;
    if (!(tau > 0.0) || !(tau < t0)) throw std::domain_error("truncate: need 0 < tau < max w");
    const auto u_levels = truncation_levels(tau, t0, levels);
    std::vector<double> w_levels(u_levels);
    for (auto& t : w_levels) t += tau;
    superlevel::RaySamples rays(w, w_levels, cfg);
    Truncation tr;
    tr.tau = tau;
    tr.t0 = std::max(t0, rays.grid_max());
    tr.mu = superlevel::summarize(rays, w.dim(), t0);
    tr.mu.t_grid = u_levels;
    tr.mu.t0 = tr.t0 - tau;
    tr.ustar = decreasing_rearrangement(tr.mu, 0.0);
    return {std::move(tr), std::move(rays)};
}

}  // namespace

Truncation truncate(const LevelFunction& w, double tau, const McConfig& cfg, std::size_t levels) {
    return sample_truncation(w, tau, cfg, levels).trunc;
}

std::vector<PreservationReport> preservation_checks(const LevelFunction& w, double tau, std::span<const double> qs,
                                                    const McConfig& cfg) {
    if (qs.empty()) throw std::invalid_argument("preservation_checks: no exponents");
    for (double q : qs)
        if (!(q > 0.0)) throw std::domain_error("preservation_check: q must be positive");
    const auto [tr, rays] = sample_truncation(w, tau, cfg, 1024);
    const std::vector<double> q_list(qs.begin(), qs.end());
    const std::size_t Q = q_list.size();

    const superlevel::RayIntegrals ints(
        w, tau, Q + 1,
        [&q_list, Q](double v, double, std::span<double> out) {
            for (std::size_t i = 0; i < Q; ++i) out[i] = std::isinf(q_list[i]) ? 0.0 : std::pow(v, q_list[i]);
            out[Q] = 1.0;
        },
        cfg, false);

    const std::size_t T = tr.mu.t_grid.size();
    const auto groups = join(rays.batch_means(kBatches), ints.batch_means(kBatches));
    const auto sizes = rays.batch_sizes(kBatches);
    const auto support_gap = stats::jackknife(groups, sizes, [T, Q](std::span<const double> x) { return x[2 * T + Q] - x[0]; });
    // The lowest level sits just above tau; a linear extrapolation bounds the volume it misses.
    const auto& m = tr.mu;
    const double offset = std::abs(m.mu[0] - m.mu[1]) * m.t_grid[0] / (m.t_grid[1] - m.t_grid[0]);
    const double symmetrized_support = tr.ustar.support_volume();
    const double support_tol = stats::tolerance(support_gap.std_error, symmetrized_support) + offset;
    const auto coarse = decreasing_rearrangement(thinned(tr.mu), 0.0);

    std::vector<PreservationReport> out;
    for (std::size_t i = 0; i < Q; ++i) {
        const double q = q_list[i];
        PreservationReport r;
        r.q = q;
        r.symmetrized_support = symmetrized_support;
        r.direct_support = ints.mean(Q);
        if (std::isinf(q)) {
            // The sup of u is located by ascent; no ray sample may exceed u*(0).
            r.direct = {std::max(rays.grid_max(), tr.t0) - tau, 0.0};
            r.symmetrized = tr.ustar(0.0);
            r.margin = std::abs(r.direct.value - r.symmetrized);
            r.tolerance = stats::tolerance(0.0, r.symmetrized);
        } else {
            r.direct = ints.mean(i);
            r.symmetrized = tr.ustar.power_integral(q);
            r.discretization = std::max(std::abs(r.symmetrized - coarse.power_integral(q)), interpolation_bias(tr.mu, q));
            const auto diff = stats::jackknife(groups, sizes, [&, T, q, i](std::span<const double> x) {
                return x[2 * T + i] - decreasing_rearrangement(with_mu(tr.mu, x), 0.0).power_integral(q);
            });
            r.margin = std::abs(r.direct.value - r.symmetrized);
            r.tolerance = stats::tolerance(diff.std_error, r.symmetrized) + r.discretization;
        }
        r.pass = r.margin <= r.tolerance && std::abs(support_gap.value) <= support_tol;
        out.push_back(std::move(r));
    }
    return out;
}

PreservationReport preservation_check(const LevelFunction& w, double tau, double q, const McConfig& cfg) {
    return preservation_checks(w, tau, std::span<const double>(&q, 1), cfg).front();
}

EquimeasureReport equimeasurability_check(const LevelFunction& w, double tau, const McConfig& cfg) {
    const Truncation tr = truncate(w, tau, cfg);
    const int n = w.dim();
    const DecreasingRearrangement ustar = tr.ustar;
    const superlevel::RayFamily sharp = [ustar, n](std::span<const Complex>) {
        return superlevel::RayProfile{
            [ustar, n](double rho) { return ustar(volume_coordinate(rho, n)); },
            [ustar, n](double rho) { return ustar.derivative(volume_coordinate(rho, n)) * volume_density(rho, n); }};
    };
    const double rho_max = std::asinh(std::pow(ustar.support_volume(), 0.5 / n)) + 1e-3;
    McConfig other = cfg;
    other.seed = cfg.seed + 1;
    const superlevel::RaySamples rays(n, sharp, rho_max, tr.mu.t_grid, other);
    const auto mu_sharp = superlevel::summarize(rays, n, tr.mu.t0);

    EquimeasureReport r;
    r.t_grid = tr.mu.t_grid;
    r.mu = tr.mu.mu;
    r.mu_sharp = mu_sharp.mu;
    r.worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.t_grid.size(); ++k) {
        // No sampled ray reaches these levels, so mu there is not estimated at all.
        if (!(r.mu[k] > 0.0)) {
            ++r.unresolved;
            continue;
        }
        const double tol = stats::tolerance(std::hypot(tr.mu.mu_stderr[k], mu_sharp.mu_stderr[k]), r.mu[k]);
        r.worst = std::max(r.worst, std::abs(r.mu[k] - r.mu_sharp[k]) - tol);
    }
    r.pass = r.worst <= 0.0;
    return r;
}

double k_np(double s, int n, double p) {
    return std::pow(s, (2.0 * n - 1.0) * p / (2.0 * n)) * (std::pow(1.0 + std::pow(s, 1.0 / n), 0.5 * p) - 1.0);
}

std::vector<PolyaSzegoReport> polya_szego_checks(const LevelFunction& w, double tau, std::span<const double> ps,
                                                 const McConfig& cfg) {
    if (ps.empty()) throw std::invalid_argument("polya_szego_checks: no exponents");
    for (double p : ps)
        if (!(p > 1.0)) throw std::domain_error("polya_szego_check: p must exceed 1");
    const int n = w.dim();
    const double t0 = holo::level_maximum(w).value;
    if (!(tau > 0.0) || !(tau < t0)) throw std::domain_error("polya_szego_check: need 0 < tau < max w");
    const std::vector<double> p_list(ps.begin(), ps.end());
    const std::size_t P = p_list.size();

    // Symmetrized side: (2n)^p int |mu'|^{1-p} K(mu) dt over the levels of u = (w - tau)_+.
    superlevel::LevelQuadrature rule;
    rule.panel(tau, t0, t0, [](double) { return 1.0; });
    const superlevel::RaySamples rays(w, rule.t, cfg);
    const superlevel::RayIntegrals ints(
        w, tau, P,
        [&p_list, P](double, double g, std::span<double> out) {
            for (std::size_t i = 0; i < P; ++i) out[i] = std::pow(g, p_list[i]);
        },
        cfg, true);

    const std::size_t T = rule.t.size();
    const auto groups = join(rays.batch_means(kBatches), ints.batch_means(kBatches));
    const auto sizes = rays.batch_sizes(kBatches);
    std::vector<double> pooled(groups.front().size(), 0.0);
    double mass = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t i = 0; i < pooled.size(); ++i) pooled[i] += sizes[g] * groups[g][i];
        mass += sizes[g];
    }
    for (auto& v : pooled) v /= mass;

    std::vector<PolyaSzegoReport> out;
    for (std::size_t i = 0; i < P; ++i) {
        const double p = p_list[i];
        const double scale = std::pow(2.0 * n, p);
        auto radial = [&, T, p, scale](std::span<const double> x, const std::vector<double>& weights) {
            double acc = 0.0;
            for (std::size_t k = 0; k < T; ++k) {
                const double mu = x[k];
                const double slope = std::abs(x[T + k]);
                if (weights[k] == 0.0 || !(mu > 0.0) || !(slope > 0.0)) continue;
                const double K = std::pow(mu, (2.0 * n - 1.0) * p / (2.0 * n)) * std::pow(1.0 + std::pow(mu, 1.0 / n), 0.5 * p);
                acc += weights[k] * std::pow(slope, 1.0 - p) * K;
            }
            return scale * acc;
        };
        const auto sym = stats::jackknife(groups, sizes, [&](std::span<const double> x) { return radial(x, rule.fine); });
        const auto diff = stats::jackknife(groups, sizes, [&, T, i](std::span<const double> x) { return x[2 * T + i] - radial(x, rule.fine); });

        PolyaSzegoReport r;
        r.p = p;
        r.gradient = ints.mean(i);
        r.symmetrized = sym;
        r.quadrature_error = std::abs(sym.value - radial(pooled, rule.coarse));
        r.margin = diff.value;
        r.tolerance = stats::tolerance(diff.std_error, r.gradient.value) + r.quadrature_error;
        r.pass = r.margin >= -r.tolerance;
        out.push_back(std::move(r));
    }
    return out;
}

PolyaSzegoReport polya_szego_check(const LevelFunction& w, double tau, double p, const McConfig& cfg) {
    return polya_szego_checks(w, tau, std::span<const double>(&p, 1), cfg).front();
}

RadialProfile RadialProfile::rational(int n) {
    if (n < 1) throw std::domain_error("RadialProfile::rational: n must be >= 1");
    RadialProfile pr;
    std::ostringstream name;
    name << "rational:" << n;
    pr.name = name.str();
    const double e = 1.0 / n;
    pr.value = [e](double s) { return 1.0 / (1.0 + std::pow(s, e)); };
    pr.derivative = [e](double s) {
        if (s <= 0.0) return e == 1.0 ? -1.0 : -std::numeric_limits<double>::infinity();
        const double d = 1.0 + std::pow(s, e);
        return -e * std::pow(s, e - 1.0) / (d * d);
    };
    return pr;
}

RadialProfile RadialProfile::plateau(double s0, double s1) {
    if (!(s0 >= 0.0) || !(s1 > s0)) throw std::domain_error("RadialProfile::plateau: need 0 <= s0 < s1");
    RadialProfile pr;
    std::ostringstream name;
    name << "plateau:" << s0 << "," << s1;
    pr.name = name.str();
    pr.value = [s0, s1](double s) { return s <= s0 ? 1.0 : (s >= s1 ? 0.0 : (s1 - s) / (s1 - s0)); };
    pr.derivative = [s0, s1](double s) { return (s > s0 && s < s1) ? -1.0 / (s1 - s0) : 0.0; };
    if (s0 > 0.0) pr.breaks.push_back(s0);
    pr.support = s1;
    return pr;
}

namespace {

/// int_0^{s_max} f over panels split at the profile breaks and at powers of ten.
double line_integral(const std::function<double(double)>& f, const RadialProfile& pr, double s_max) {
    std::vector<double> cuts{0.0};
    for (double b : pr.breaks) if (b < s_max) cuts.push_back(b);
    for (double d = 1.0; d < s_max; d *= 10.0) cuts.push_back(d);
    cuts.push_back(s_max);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) acc += quad::integrate(f, cuts[i - 1], cuts[i], 1e-12).value;
    return acc;
}

/// Composite Gauss-Legendre on [0, x_max] with breakpoints at the given radii and
/// geometric panels towards the origin.
double radial_integral(const std::function<double(double)>& f, std::vector<double> cuts, double x_max) {
    for (double x = x_max; x > 1e-6 * x_max; x *= 0.5) cuts.push_back(x);
    cuts.push_back(0.0);
    std::vector<double> inside;
    for (double c : cuts) if (c >= 0.0 && c <= x_max) inside.push_back(c);
    std::sort(inside.begin(), inside.end());
    inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
    // Refine long panels so none spans more than x_max / 64.
    std::vector<double> fine{inside.front()};
    for (std::size_t i = 1; i < inside.size(); ++i) {
        const double len = inside[i] - inside[i - 1];
        const int parts = std::max(1, static_cast<int>(std::ceil(64.0 * len / x_max)));
        for (int k = 1; k <= parts; ++k) fine.push_back(inside[i - 1] + len * k / parts);
    }
    return quad::composite_gauss(f, fine, 20);
}

CVector fd_partials(const std::function<double(std::span<const Complex>)>& u, const CVector& z, double h) {
    const std::size_t n = z.size();
    CVector out(n);
    CVector w = z;
    for (std::size_t i = 0; i < n; ++i) {
        auto at = [&](Complex dz) {
            w[i] = z[i] + dz;
            const double v = u(w);
            w[i] = z[i];
            return v;
        };
        const double dx = (at({h, 0.0}) - at({-h, 0.0})) / (2.0 * h);
        const double dy = (at({0.0, h}) - at({0.0, -h})) / (2.0 * h);
        out[i] = Complex(0.5 * dx, -0.5 * dy);  // d/dz = (d/dx - i d/dy) / 2
    }
    return out;
}

}  // namespace

RadialIdentityReport radial_gradient_identities_check(const RadialProfile& pr, int n, double p, double s_max) {
    if (n < 1 || !(p >= 1.0)) throw std::domain_error("radial identities: need n >= 1 and p >= 1");
    RadialIdentityReport r;
    const double scale = std::pow(2.0 * n, p);
    const double a = (2.0 * n - 1.0) * p / (2.0 * n);
    auto e1_density = [&](double s) { return scale * std::pow(std::abs(pr.derivative(s)), p) * std::pow(s, a); };
    auto e2_density = [&](double s) {
        return scale * std::pow(std::abs(pr.derivative(s)), p) * std::pow(s, a) * std::pow(1.0 + std::pow(s, 1.0 / n), 0.5 * p);
    };

    if (s_max <= 0.0) {
        if (std::isfinite(pr.support)) {
            s_max = pr.support;
        } else {
            // First decade where the E2 density drops below 1e-14.
            s_max = 1.0;
            while (s_max < 1e12 && e2_density(s_max) >= 1e-14) s_max *= 10.0;
            if (s_max >= 1e12) r.warning = "one-dimensional integral has not converged by s = 1e12";
        }
    }
    s_max = std::min(s_max, pr.support);
    r.s_max = s_max;

    r.e1_line = line_integral(e1_density, pr, s_max);
    const double k_part = line_integral(
        [&](double s) { return scale * std::pow(std::abs(pr.derivative(s)), p) * k_np(s, n, p); }, pr, s_max);
    r.e2_line = r.e1_line + k_part;

    // A fixed non-axis unit direction; the fields are radial.
    CVector zeta(n, Complex(0.0, 0.0));
    zeta[0] = Complex(0.6, 0.0);
    if (n > 1) zeta[1] = Complex(0.0, 0.8);
    else zeta[0] = Complex(0.6, 0.8);

    // C^n with the Euclidean gradient, dv normalized so that v(B_n) = 1.
    auto flat = [&](std::span<const Complex> z) {
        double r2 = 0.0;
        for (const auto& c : z) r2 += std::norm(c);
        return pr.value(std::pow(r2, n));
    };
    std::vector<double> r_breaks;
    for (double b : pr.breaks) r_breaks.push_back(std::pow(b, 0.5 / n));
    const double R = std::pow(s_max, 0.5 / n);
    r.e1_plane = radial_integral(
        [&](double rad) {
            if (rad <= 0.0) return 0.0;
            CVector z(zeta);
            for (auto& c : z) c *= rad;
            const CVector d = fd_partials(flat, z, 1e-6 * rad);
            double g2 = 0.0;
            for (const auto& c : d) g2 += 4.0 * std::norm(c);  // |grad|^2 = 4 sum |du/dz_i|^2
            return std::pow(g2, 0.5 * p) * 2.0 * n * std::pow(rad, 2 * n - 1);
        },
        r_breaks, R);

    // B_n in the geodesic radius, dv_g = d(sinh^{2n} rho).
    auto ball = [&](std::span<const Complex> z) {
        double r2 = 0.0;
        for (const auto& c : z) r2 += std::norm(c);
        return pr.value(std::pow(r2 / (1.0 - r2), n));
    };
    std::vector<double> rho_breaks;
    for (double b : pr.breaks) rho_breaks.push_back(std::asinh(std::pow(b, 0.5 / n)));
    const double rho_max = std::asinh(R);
    r.e2_ball = radial_integral(
        [&](double rho) {
            if (rho <= 0.0) return 0.0;
            const double rad = std::tanh(rho);
            CVector z(zeta);
            for (auto& c : z) c *= rad;
            const double h = 1e-6 * std::min(rad, 1.0 - rad);
            const CVector d = fd_partials(ball, z, h);
            const double g = geometry::gradient_norm_from_partials(d, BallPoint(z));
            return std::pow(g, p) * volume_density(rho, n);
        },
        rho_breaks, rho_max);

    r.e1_rel_error = std::abs(r.e1_plane - r.e1_line) / std::abs(r.e1_line);
    r.e2_rel_error = std::abs(r.e2_ball - r.e2_line) / std::abs(r.e2_line);
    r.pass = r.e1_rel_error <= 1e-4 && r.e2_rel_error <= 1e-4;
    return r;
}

}  // namespace rearrange
}  // namespace hypball

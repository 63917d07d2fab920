#include "hypball/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "hypball/geometry.hpp"
#include "hypball/quadrature.hpp"
#include "hypball/special.hpp"
#include "hypball/superlevel.hpp"

namespace hypball::inequalities {

namespace {

constexpr std::size_t kBatches = 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(int n) {
    if (n < 1) throw std::domain_error("dimension must be >= 1");
}

/// Adaptive integral over [a, b], b possibly infinite.
quad::Result1D integral(const std::function<double(double)>& f, double a, double b) {
    if (!(b > a)) return {};
    if (std::isinf(b)) return quad::integrate_to_infinity(f, a);
    return quad::integrate(f, a, b);
}

void require_finite(const quad::Result1D& r, const char* what) {
    if (!std::isfinite(r.value) || !std::isfinite(r.error) || r.error > 1e-6 * std::max(1.0, std::abs(r.value)))
        throw std::domain_error(std::string(what) + ": integral diverges or fails to converge");
}

}  // namespace

double sobolev_constant(int n_real, double p) {
    if (n_real < 1) throw std::domain_error("sobolev_constant: dimension must be >= 1");
    const double N = n_real;
    if (!(p >= 1.0) || !(p < N)) throw std::domain_error("sobolev_constant: requires 1 <= p < N");
    if (p == 1.0) return N;
    const double first = std::pow(N * (p - 1.0) / (N - p), 1.0 - 1.0 / p);
    const double log_gammas = std::lgamma(N) - std::lgamma(N / p) - std::lgamma(N + 1.0 - N / p);
    return N / (first * std::exp(log_gammas / N));
}

double sobolev_extremal_ratio(int n_real, double p) {
    const double N = n_real;
    if (!(p > 1.0) || !(p < N)) throw std::domain_error("sobolev_extremal_ratio: requires 1 < p < N");
    const double q = p / (p - 1.0);
    const double e = (N - p) / p;
    const double p_star = N * p / (N - p);
    // log(1 + r^q) without overflow for large r.
    const auto log1p_pow = [q](double lr) { return q * lr > 30.0 ? q * lr + std::log1p(std::exp(-q * lr)) : std::log1p(std::exp(q * lr)); };
    const auto grad = quad::integrate_to_infinity(
        [&](double r) {
            if (r <= 0.0) return 0.0;
            const double lr = std::log(r);
            const double log_d = std::log(e * q) + (q - 1.0) * lr - (e + 1.0) * log1p_pow(lr);
            return N * std::exp(p * log_d + (N - 1.0) * lr);
        },
        0.0);
    const auto mass = quad::integrate_to_infinity(
        [&](double r) {
            if (r <= 0.0) return 0.0;
            const double lr = std::log(r);
            return N * std::exp(-N * log1p_pow(lr) + (N - 1.0) * lr);
        },
        0.0);
    return std::pow(grad.value, 1.0 / p) / std::pow(mass.value, 1.0 / p_star);
}

double ell(double s, int n) {
    return std::pow(s, (2.0 * n - 1.0) / (2.0 * n)) * std::sqrt(1.0 + std::pow(s, 1.0 / n));
}

double ell_integral(int n, double p) {
    require_dim(n);
    if (!(p > 2.0 * n)) throw std::domain_error("ell_integral: requires p > 2n");
    return n * special::beta(n - (2.0 * n - 1.0) * p / (2.0 * (p - 1.0)), n / (p - 1.0));
}

double ell_integral_quadrature(int n, double p) {
    require_dim(n);
    if (!(p > 2.0 * n)) throw std::domain_error("ell_integral_quadrature: requires p > 2n");
    const double e = -p / (p - 1.0);
    const auto r = quad::integrate_to_infinity([&](double s) { return s <= 0.0 ? 0.0 : std::pow(ell(s, n), e); }, 0.0);
    require_finite(r, "ell_integral_quadrature");
    return r.value;
}

double sup_representation(double a, double b, double alpha) {
    if (!(a >= 0.0) || !(b >= 0.0) || !(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("sup_representation: need a, b >= 0 and 0 < alpha < 1");
    const auto h = [&](double t) {
        const double left = t > 0.0 ? std::pow(t, 1.0 - alpha) * std::pow(a, alpha) : 0.0;
        const double right = t < 1.0 ? std::pow(1.0 - t, 1.0 - alpha) * std::pow(b, alpha) : 0.0;
        return left + right;
    };
    const auto best = boost::math::tools::brent_find_minima([&](double t) { return -h(t); }, 0.0, 1.0, 52);
    return std::max({h(best.first), h(0.0), h(1.0)});
}

SharpConstants sharp_constants(int n, double p) {
    require_dim(n);
    if (!(p >= 1.0)) throw std::domain_error("sharp_constants: requires p >= 1");
    SharpConstants c;
    c.n = n;
    c.p = p;
    const double N = 2.0 * n;
    if (p < N) {
        c.p_star = N * p / (N - p);
        c.S = sobolev_constant(2 * n, p);
    } else if (p > N) {
        c.ell_integral = ell_integral(n, p);
        c.sup_prefactor = 0.5 * special::beta(n - (2.0 * n - 1.0) * p / (2.0 * (p - 1.0)), n / (p - 1.0));
    }
    return c;
}

CurveCheck isoperimetric_model_check(std::span<const double> rho_grid, int n) {
    require_dim(n);
    const double omega = special::euclidean_ball_volume(n);
    const double C = std::pow(special::euclidean_sphere_area(n), 2.0 * n) / std::pow(omega, 2.0 * n - 1.0);
    CurveCheck out;
    out.worst = kInf;
    out.pass = true;
    for (double rho : rho_grid) {
        const double per = rho > 0.0 ? omega * geometry::geodesic_sphere_area({rho}, n) : 0.0;
        const double vol = rho > 0.0 ? omega * geometry::geodesic_ball_volume({rho}, n) : 0.0;
        const double lhs = std::pow(per, 2.0 * n);
        const double rhs = C * std::pow(vol, 2.0 * n - 1.0);
        out.rho.push_back(rho);
        out.lhs.push_back(lhs);
        out.rhs.push_back(rhs);
        out.margins.push_back(lhs - rhs);
        const double rel = rhs > 0.0 ? (lhs - rhs) / rhs : 0.0;
        out.worst = std::min(out.worst, rel);
        if (lhs - rhs < -1e-12 * rhs) out.pass = false;
    }
    if (rho_grid.empty()) out.worst = 0.0;
    return out;
}

CurveCheck isoperimetric_refined_check(std::span<const double> rho_grid, int n) {
    require_dim(n);
    CurveCheck out;
    const double k = 4.0 * n * n;
    for (double rho : rho_grid) {
        const double per = rho > 0.0 ? geometry::geodesic_sphere_area({rho}, n) : 0.0;
        const double V = rho > 0.0 ? geometry::geodesic_ball_volume({rho}, n) : 0.0;
        const double lhs = per * per;
        const double rhs = k * (std::pow(V, (2.0 * n - 1.0) / n) + V * V);
        out.rho.push_back(rho);
        out.lhs.push_back(lhs);
        out.rhs.push_back(rhs);
        out.margins.push_back(lhs - rhs);
        const double scale = std::max(std::abs(lhs), std::abs(rhs));
        if (scale > 0.0) out.worst = std::max(out.worst, std::abs(lhs - rhs) / scale);
    }
    out.pass = out.worst <= 1e-12;
    return out;
}

std::string_view to_string(SobolevRegime r) noexcept {
    switch (r) {
        case SobolevRegime::I: return "I";
        case SobolevRegime::II: return "II";
        case SobolevRegime::III: return "III";
        case SobolevRegime::IV: return "IV";
    }
    return "?";
}

SobolevRegime parse_regime(std::string_view s) {
    if (s == "I") return SobolevRegime::I;
    if (s == "II") return SobolevRegime::II;
    if (s == "III") return SobolevRegime::III;
    if (s == "IV") return SobolevRegime::IV;
    throw std::invalid_argument("unknown Sobolev regime: " + std::string(s));
}

std::optional<SobolevRegime> regime_for(int n, double p) {
    if (p == 1.0) return SobolevRegime::I;
    if (p > 1.0 && p < 2.0) return SobolevRegime::II;
    if (n >= 2 && p >= 2.0 && p < 2.0 * n) return SobolevRegime::III;
    if (p > 2.0 * n) return SobolevRegime::IV;
    return std::nullopt;
}

SobolevReport sobolev_check(const LevelFunction& w, double tau, double p, SobolevRegime regime, const McConfig& cfg) {
    const int n = w.dim();
    const auto expected = regime_for(n, p);
    if (!expected || *expected != regime)
        throw std::invalid_argument("sobolev_check: p = " + std::to_string(p) + ", n = " + std::to_string(n) +
                                    " is outside regime " + std::string(to_string(regime)));
    const double t0 = holo::level_maximum(w).value;
    if (!(tau > 0.0) || !(tau < t0)) throw std::domain_error("sobolev_check: need 0 < tau < max w");

    const auto c = sharp_constants(n, p);
    const double N = 2.0 * n;
    const double ps = c.p_star;
    const bool sup_form = regime == SobolevRegime::IV;
    const std::size_t K = sup_form ? 1 : 3;
    const superlevel::RayIntegrals ints(
        w, tau, K,
        [p, ps, sup_form](double v, double g, std::span<double> out) {
            out[0] = std::pow(g, p);
            if (sup_form) return;
            out[1] = std::pow(v, ps);
            out[2] = std::pow(v, p);
        },
        cfg, true);

    SobolevReport r;
    r.regime = regime;
    r.n = n;
    r.p = p;
    r.tau = tau;
    r.sup = t0 - tau;
    const double S = c.S.value_or(0.0);
    const double k = N / p;
    std::function<double(std::span<const double>)> lhs, rhs;
    switch (regime) {
        case SobolevRegime::I:
            lhs = [](std::span<const double> x) { return x[0] * x[0]; };
            rhs = [N](std::span<const double> x) {
                return N * N * (std::pow(x[1], (N - 1.0) / (0.5 * N)) + x[2] * x[2]);
            };
            break;
        case SobolevRegime::II:
            lhs = [](std::span<const double> x) { return x[0]; };
            rhs = [=](std::span<const double> x) {
                return std::pow(S * S * std::pow(x[1], 2.0 / ps) + k * k * std::pow(x[2], 2.0 / p), 0.5 * p);
            };
            break;
        case SobolevRegime::III:
            lhs = [](std::span<const double> x) { return x[0]; };
            rhs = [=](std::span<const double> x) { return std::pow(S, p) * std::pow(x[1], p / ps) + std::pow(k, p) * x[2]; };
            break;
        case SobolevRegime::IV: {
            const double pre = *c.sup_prefactor;
            const double sup = r.sup;
            lhs = [pre, p](std::span<const double> x) { return pre * std::pow(x[0], 1.0 / p); };
            rhs = [sup](std::span<const double>) { return sup; };
            break;
        }
    }
    const auto groups = ints.batch_means(kBatches);
    const auto sizes = ints.batch_sizes(kBatches);
    r.gradient = ints.mean(0);
    r.lhs = stats::jackknife(groups, sizes, lhs);
    r.rhs = stats::jackknife(groups, sizes, rhs);
    const auto diff = stats::jackknife(groups, sizes, [&](std::span<const double> x) { return lhs(x) - rhs(x); });
    r.margin = diff.value;
    r.tolerance = stats::tolerance(diff.std_error, r.lhs.value);
    r.pass = r.margin >= -r.tolerance;
    return r;
}

HardyReport weighted_hardy_check(const HardyInput& in, double p, double eps, HardyMode mode) {
    if (!(p > 1.0)) throw std::domain_error("weighted_hardy_check: requires p > 1");
    if (!(in.lo >= 0.0) || !(in.hi > in.lo)) throw std::domain_error("weighted_hardy_check: need 0 <= lo < hi");
    const double gap = eps + 1.0 - p;  // > 0 for the tail form, < 0 for the head form
    if (mode == HardyMode::tail && !(gap > 0.0)) throw std::domain_error("weighted_hardy_check: tail form needs eps > p - 1");
    if (mode == HardyMode::head && !(gap < 0.0)) throw std::domain_error("weighted_hardy_check: head form needs eps < p - 1");
    const bool power_tail = std::isfinite(in.tail_start) && std::isinf(in.hi);
    if (mode == HardyMode::head && std::isinf(in.hi))
        throw std::domain_error("weighted_hardy_check: head form needs bounded support");
    if (power_tail && !(in.tail_start >= in.lo)) throw std::domain_error("weighted_hardy_check: tail must start inside the support");

    const auto& f = in.f;
    const double X = power_tail ? in.tail_start : in.hi;
    HardyReport r;
    r.mode = mode;
    r.constant = std::pow(p / std::abs(gap), p);

    // Closed-form pieces beyond X for f = c x^{-beta}.
    double tail_mass = 0.0, tail_left = 0.0, tail_right = 0.0;
    if (power_tail) {
        const double beta = in.tail_exponent;
        const double e = beta * p - eps - 1.0;
        if (!(beta > 1.0) || !(e > 0.0)) throw std::domain_error("weighted_hardy_check: power tail makes a side diverge");
        const double c = f(X) * std::pow(X, beta);
        tail_mass = c * std::pow(X, 1.0 - beta) / (beta - 1.0);
        tail_left = std::pow(c, p) * std::pow(X, -e) / e;
        tail_right = std::pow(c / (beta - 1.0), p) * std::pow(X, -e) / e;
    }

    const auto left = integral(
        [&](double x) { return x > 0.0 ? std::pow(f(x), p) * std::exp(eps * std::log(x)) : 0.0; }, in.lo, X);
    require_finite(left, "weighted_hardy_check (left side)");
    const auto mass = integral(f, in.lo, X);
    require_finite(mass, "weighted_hardy_check (mass)");
    const double M = mass.value + tail_mass;

    // F(x): the averaged mass, tail or head.
    const auto F = [&](double x) {
        if (mode == HardyMode::tail) return integral(f, x, X).value + tail_mass;
        return integral(f, in.lo, x).value;
    };
    const auto inner = integral(
        [&](double x) {
            const double m = x > 0.0 ? F(x) : 0.0;
            return m > 0.0 ? std::exp(p * std::log(m) + (eps - p) * std::log(x)) : 0.0;
        },
        in.lo, X);
    require_finite(inner, "weighted_hardy_check (right side)");
    double outside = 0.0;
    if (mode == HardyMode::tail && in.lo > 0.0) outside = std::pow(M, p) * std::pow(in.lo, gap) / gap;
    if (mode == HardyMode::head) outside = std::pow(M, p) * std::pow(in.hi, gap) / (-gap);

    r.lhs = r.constant * (left.value + tail_left);
    r.rhs = inner.value + tail_right + outside;
    if (!std::isfinite(r.lhs) || !std::isfinite(r.rhs)) throw std::domain_error("weighted_hardy_check: a side diverges");
    r.ratio = r.lhs > 0.0 ? r.rhs / r.lhs : 0.0;
    r.margin = r.lhs - r.rhs;
    r.tolerance = 1e-8 * std::max({1.0, r.lhs, r.rhs}) + r.constant * left.error + inner.error;
    r.pass = r.margin >= -r.tolerance;
    return r;
}

namespace {

/// int_0^1 Phi(h(t)) weight(t) dt for h strictly decreasing, split where h crosses a kink of Phi.
quad::Result1D kalaj_integral(const KalajInput& in, const std::function<double(double)>& h,
                              const std::function<double(double)>& weight) {
    std::vector<double> cuts{0.0, 1.0};
    for (double x : in.phi_kinks) {
        if (!(h(1.0) < x)) continue;
        // Bisect in log t: h(exp(u)) - x changes sign on (-700, 0).
        double a = -700.0, b = 0.0;
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
            const double m = 0.5 * (a + b);
            (h(std::exp(m)) > x ? a : b) = m;
        }
        cuts.push_back(std::exp(0.5 * (a + b)));
    }
    std::sort(cuts.begin(), cuts.end());
    quad::Result1D acc;
    const auto g = [&](double t) { return t > 0.0 ? in.Phi(h(t)) * weight(t) : 0.0; };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto piece = quad::integrate(g, cuts[i], cuts[i + 1]);
        acc.value += piece.value;
        acc.error += piece.error;
    }
    return acc;
}

}  // namespace

KalajReport kalaj_lemma_check(const KalajInput& in) {
    if (!(in.alpha > 0.0)) throw std::domain_error("kalaj_lemma_check: alpha must be positive");
    const double e = -1.0 / in.alpha;
    const auto one = [](double) { return 1.0; };
    const auto extremal = [e](double t) { return std::pow(t, e); };
    const auto c = kalaj_integral(in, extremal, one);
    require_finite(c, "kalaj_lemma_check (normalization)");

    const auto scaled = [&](double lambda) {
        return [&, lambda](double t) { return lambda * in.g(t) * std::pow(t, e); };
    };
    const auto residual = [&](double lambda) { return kalaj_integral(in, scaled(lambda), one).value - c.value; };

    KalajReport r;
    r.normalization = c.value;
    double lambda = 1.0;
    double res = residual(1.0);
    if (std::abs(res) > 1e-14 * std::max(1.0, c.value)) {
        // Bracket, then solve; the normalization integral increases with lambda.
        double lo = 1.0, hi = 1.0;
        int steps = 0;
        if (res < 0.0) {
            while (residual(hi) < 0.0 && ++steps < 64) hi *= 2.0;
        } else {
            while (residual(lo) > 0.0 && ++steps < 64) lo *= 0.5;
        }
        if (steps >= 64) throw std::runtime_error("kalaj_lemma_check: normalization cannot be met by rescaling g");
        boost::uintmax_t iters = 200;
        const auto root = boost::math::tools::toms748_solve(residual, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
        lambda = 0.5 * (root.first + root.second);
        res = residual(lambda);
        if (std::abs(res) > 1e-9 * std::max(1.0, c.value))
            throw std::runtime_error("kalaj_lemma_check: normalization failure after rescaling");
    }
    r.scale = lambda;
    r.normalization_residual = res;
    r.lhs = kalaj_integral(in, scaled(lambda), in.Psi).value;
    r.rhs = kalaj_integral(in, extremal, in.Psi).value;
    r.margin = r.rhs - r.lhs;
    r.pass = r.margin >= -r.tolerance;
    return r;
}

}  // namespace hypball::inequalities

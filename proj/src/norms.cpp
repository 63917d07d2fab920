#include "hypball/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hypball/quadrature.hpp"
#include "hypball/special.hpp"
#include "hypball/stats.hpp"

namespace hypball {

double SpaceParams::r() const { return kind == SpaceKind::hardy ? p / n : p / alpha; }

double SpaceParams::weight_exponent() const { return kind == SpaceKind::hardy ? static_cast<double>(n) : alpha; }

std::string SpaceParams::label() const {
    std::ostringstream out;
    if (kind == SpaceKind::hardy) out << "H^" << p;
    else out << "A^" << p << "_" << alpha;
    return out.str();
}

void SpaceParams::validate() const {
    if (n < 1) throw std::domain_error("SpaceParams: n must be >= 1");
    if (!(p > 0.0)) throw std::domain_error("SpaceParams: p must be positive");
    if (kind == SpaceKind::bergman && !(alpha > n)) throw std::domain_error("SpaceParams: Bergman spaces need alpha > n");
}

namespace norms {

namespace {

bool is_even_integer(double p) {
    const double k = std::round(p / 2.0);
    return k >= 1.0 && std::abs(p - 2.0 * k) < 1e-14;
}

double power_abs(Complex z, double p) { return std::pow(std::abs(z), p); }

/// Sum of closed-form monomial contributions of g in the p = 2 norm (orthogonal basis).
double orthogonal_sum(const Polynomial& g, const SpaceParams& space) {
    SpaceParams two = space;
    two.p = 2.0;
    double acc = 0.0;
    for (const auto& [a, c] : g.terms()) acc += monomial_norm_power(a, c, two);
    return acc;
}

int cubature_resolution(const SpaceParams& space) {
    if (space.kind == SpaceKind::hardy) return space.n == 1 ? 8192 : 128;
    return space.n == 1 ? 1024 : 48;
}

IntegralEstimate cubature_at(const Polynomial& f, const SpaceParams& space, int resolution, int radial) {
    const SphereRule rule = integrate::sphere_cubature(space.n, resolution);
    if (space.kind == SpaceKind::hardy) {
        double acc = 0.0;
        for (std::size_t j = 0; j < rule.size(); ++j) acc += rule.weights[j] * power_abs(f(rule[j]), space.p);
        return {acc, 0.0, rule.size(), Method::cubature, {}};
    }
    const double p = space.p;
    const ScalarField phi{[&f, p](const BallPoint& z) { return power_abs(f(z), p); }, {}, 1.0};
    auto est = integrate::integrate_ball_weighted(phi, space.n, space.alpha - space.n - 1.0, radial, rule);
    est.value *= special::c_alpha(space.alpha, space.n);
    return est;
}

}  // namespace

double monomial_norm_power(const MultiIndex& a, Complex c, const SpaceParams& space) {
    space.validate();
    double log_num = 0.0;
    double beta_sum = 0.0;
    for (int e : a.exponents) {
        const double beta = 0.5 * space.p * e;
        log_num += std::lgamma(beta + 1.0);
        beta_sum += beta;
    }
    const double scale = power_abs(c, space.p);
    if (space.kind == SpaceKind::hardy) {
        return scale * std::exp(std::lgamma(static_cast<double>(space.n)) + log_num -
                                std::lgamma(space.n + beta_sum));
    }
    return scale * std::exp(std::lgamma(space.alpha) + log_num - std::lgamma(space.alpha + beta_sum));
}

IntegralEstimate norm_power(const Polynomial& f, const SpaceParams& space, const McConfig& cfg, NormMethod method) {
    space.validate();
    if (f.dim() != space.n) throw std::invalid_argument("norm: polynomial dimension does not match the space");
    if (f.is_zero()) return {0.0, 0.0, 0, Method::exact, {}};

    if (method == NormMethod::automatic) {
        if (f.terms().size() == 1) {
            const auto& [a, c] = *f.terms().begin();
            return {monomial_norm_power(a, c, space), 0.0, 0, Method::exact, {}};
        }
        if (is_even_integer(space.p)) {
            // ||f||_p^p = ||f^k||_2^2 for p = 2k.
            const int k = static_cast<int>(std::round(space.p / 2.0));
            Polynomial g = f;
            for (int i = 1; i < k; ++i) g = g * f;
            return {orthogonal_sum(g, space), 0.0, 0, Method::exact, {}};
        }
        if (space.n <= 2) {
            const int res = cubature_resolution(space);
            const auto fine = cubature_at(f, space, res, 48);
            const auto coarse = cubature_at(f, space, res / 2, 24);
            IntegralEstimate out = fine;
            out.std_error = std::abs(fine.value - coarse.value);
            return out;
        }
    }

    const double p = space.p;
    if (space.kind == SpaceKind::hardy) {
        return integrate::integrate_sphere([&f, p](std::span<const Complex> z) { return power_abs(f(z), p); }, space.n,
                                           cfg);
    }
    const ScalarField phi{[&f, p](const BallPoint& z) { return power_abs(f(z), p); }, {}, 1.0};
    auto est = integrate::integrate_ball_weighted(phi, space.n, space.alpha - space.n - 1.0, cfg);
    const double c = special::c_alpha(space.alpha, space.n);
    est.value *= c;
    est.std_error *= c;
    return est;
}

IntegralEstimate norm(const Polynomial& f, const SpaceParams& space, const McConfig& cfg, NormMethod method) {
    IntegralEstimate est = norm_power(f, space, cfg, method);
    const double integral = est.value;
    est.value = std::pow(integral, 1.0 / space.p);
    // d(I^{1/p}) = I^{1/p - 1} dI / p
    est.std_error = integral > 0.0 ? est.std_error * est.value / (space.p * integral) : 0.0;
    return est;
}

IntegralEstimate hardy_norm(const Polynomial& f, double p, const McConfig& cfg, NormMethod method) {
    return norm(f, SpaceParams::hardy(f.dim(), p), cfg, method);
}

IntegralEstimate bergman_norm(const Polynomial& f, double p, double alpha, const McConfig& cfg, NormMethod method) {
    return norm(f, SpaceParams::bergman(f.dim(), p, alpha), cfg, method);
}

Normalized normalize(const Polynomial& f, const SpaceParams& space, const McConfig& cfg) {
    const auto est = norm(f, space, cfg);
    if (!(est.value > 0.0)) throw std::domain_error("normalize: zero polynomial");
    return {f.scaled(1.0 / est.value), 1.0 / est.value};
}

MarginReport pointwise_bound_check(const Polynomial& f, const SpaceParams& space, std::span<const BallPoint> points,
                                   const McConfig& cfg) {
    const auto np = norm_power(f, space, cfg);
    const double w = space.weight_exponent();
    MarginReport report;
    report.margin = std::numeric_limits<double>::infinity();
    for (const auto& z : points) {
        const double m = np.value - power_abs(f(z), space.p) * std::pow(z.defect(), w);
        if (m < report.margin) {
            report.margin = m;
            std::ostringstream out;
            out << "worst at |z| = " << z.norm();
            report.detail = out.str();
        }
    }
    report.tolerance = stats::tolerance(np.std_error, np.value);
    report.pass = report.margin >= -report.tolerance;
    return report;
}

ChainReport contraction_chain_check(const Polynomial& f, double r, std::span<const double> alphas, const McConfig& cfg,
                                    NormMethod method) {
    const int n = f.dim();
    if (!std::is_sorted(alphas.begin(), alphas.end())) throw std::invalid_argument("contraction chain: alphas must ascend");
    ChainReport report;
    const SpaceParams h = SpaceParams::hardy(n, n * r);
    report.entries.push_back({h, norm(f, h, cfg, method)});
    for (double alpha : alphas) {
        const SpaceParams b = SpaceParams::bergman(n, alpha * r, alpha);
        report.entries.push_back({b, norm(f, b, cfg, method)});
    }
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < report.entries.size(); ++i) {
        const auto& prev = report.entries[i - 1].norm;
        const auto& next = report.entries[i].norm;
        const double tol = stats::tolerance(std::hypot(prev.std_error, next.std_error), prev.value);
        report.worst_margin = std::min(report.worst_margin, prev.value - next.value + tol);
    }
    report.pass = report.worst_margin >= 0.0;
    return report;
}

LimitReport hardy_limit_check(const Polynomial& f, double r, std::span<const double> alphas, const McConfig& cfg) {
    const int n = f.dim();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > n) || (i > 0 && !(alphas[i] < alphas[i - 1])))
            throw std::invalid_argument("hardy_limit_check: alphas must decrease strictly towards n");
    }
    LimitReport report;
    report.hardy = norm(f, SpaceParams::hardy(n, n * r), cfg);
    report.alphas.assign(alphas.begin(), alphas.end());
    report.monotone = true;
    for (double alpha : alphas) {
        const auto b = norm(f, SpaceParams::bergman(n, alpha * r, alpha), cfg);
        report.bergman.push_back(b);
        report.gaps.push_back(std::abs(b.value - report.hardy.value));
        report.gap_errors.push_back(std::hypot(b.std_error, report.hardy.std_error));
    }
    for (std::size_t i = 1; i < report.gaps.size(); ++i) {
        const double tol = stats::tolerance(std::hypot(report.gap_errors[i], report.gap_errors[i - 1]), report.hardy.value);
        if (report.gaps[i] > report.gaps[i - 1] + tol) report.monotone = false;
        if (3.0 * report.gap_errors[i] > report.gaps[i] && report.gaps[i] > 0.0)
            report.warning = "sampling error exceeds the measured gap; raise the sample budget";
    }
    report.final_small = alphas.empty() || alphas.back() - n > 0.0100001 || report.gaps.back() < 5e-2;
    report.pass = report.monotone && report.final_small;
    return report;
}

double normalization_identity(double alpha, int n) {
    // (1/t - 1)^n t^{alpha - 1} = (1 - t)^n t^{alpha - n - 1}. With t = x^{1/(alpha - n)} the
    // endpoint singularity disappears: the integral is (1/(alpha - n)) int_0^1 (1 - t(x))^n dx.
    const double e = alpha - n;
    const auto r = quad::integrate([e, n](double x) { return std::pow(1.0 - std::pow(x, 1.0 / e), n); }, 0.0, 1.0, 1e-14);
    return special::k_alpha(alpha, n) * r.value / e;
}

}  // namespace norms
}  // namespace hypball

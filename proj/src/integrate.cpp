#include "hypball/integrate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hypball/quadrature.hpp"
#include "hypball/rng.hpp"
#include "hypball/special.hpp"
#include "hypball/stats.hpp"

namespace hypball {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::monte_carlo: return "monte_carlo";
        case Method::radial_product: return "radial_product";
        case Method::exact: return "exact";
        case Method::cubature: return "cubature";
    }
    return "unknown";
}

void McConfig::validate() const {
    if (sphere_samples < 16 || radial_nodes < 16)
        throw std::invalid_argument("McConfig: sphere_samples and radial_nodes must be >= 16");
}

DirectionSet::DirectionSet(int n, std::size_t count, std::uint64_t seed, std::uint64_t sub) : n_(n) {
    if (n < 1) throw std::invalid_argument("DirectionSet: n must be >= 1");
    data_.resize(count * static_cast<std::size_t>(n));
    const auto gen = rng::make(seed, rng::Stream::sphere_directions, sub);
    for (std::size_t j = 0; j < count; ++j) {
        rng::sphere_point(gen, j, {data_.data() + j * static_cast<std::size_t>(n), static_cast<std::size_t>(n)});
    }
}

namespace integrate {

namespace {

IntegralEstimate from_running(const stats::Running& acc, Method method) {
    return {acc.mean(), acc.std_error(), static_cast<std::uint64_t>(acc.count()), method, {}};
}

BallPoint scaled_point(std::span<const Complex> zeta, double r) {
    // Rounding can push |r zeta| to 1 for r within an ulp of 1.
    CVector c(zeta.begin(), zeta.end());
    for (auto& x : c) x *= r;
    return BallPoint(std::move(c));
}

}  // namespace

SphereRule sphere_cubature(int n, int resolution) {
    if (resolution < 4) throw std::invalid_argument("sphere_cubature: resolution must be >= 4");
    SphereRule rule;
    rule.n = n;
    const double two_pi = 2.0 * std::numbers::pi;
    if (n == 1) {
        for (int k = 0; k < resolution; ++k) {
            rule.points.push_back(std::polar(1.0, two_pi * k / resolution));
            rule.weights.push_back(1.0 / resolution);
        }
        return rule;
    }
    if (n == 2) {
        // |zeta_1|^2 is uniform on [0, 1] for n = 2; the phases are independent and uniform.
        const quad::Rule x = quad::gauss_legendre(std::max(resolution / 4, 4), 0.0, 1.0);
        const double phase_weight = 1.0 / (static_cast<double>(resolution) * resolution);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double m1 = std::sqrt(x.nodes[i]);
            const double m2 = std::sqrt(1.0 - x.nodes[i]);
            for (int k = 0; k < resolution; ++k) {
                for (int l = 0; l < resolution; ++l) {
                    rule.points.push_back(std::polar(m1, two_pi * k / resolution));
                    rule.points.push_back(std::polar(m2, two_pi * l / resolution));
                    rule.weights.push_back(x.weights[i] * phase_weight);
                }
            }
        }
        return rule;
    }
    throw std::invalid_argument("sphere_cubature: only n <= 2 is supported");
}

IntegralEstimate integrate_sphere(const SphereField& phi, int n, const McConfig& cfg) {
    cfg.validate();
    const DirectionSet dirs(n, static_cast<std::size_t>(cfg.sphere_samples), cfg.seed);
    stats::Running acc;
    for (std::size_t j = 0; j < dirs.size(); ++j) acc.add(phi(dirs[j]));
    return from_running(acc, Method::monte_carlo);
}

double exact_sphere_monomial(const MultiIndex& a, const MultiIndex& b, int n) {
    if (a.dim() != n || b.dim() != n) throw std::invalid_argument("exact_sphere_monomial: dimension mismatch");
    if (a != b) return 0.0;
    return std::exp(std::lgamma(static_cast<double>(n)) + std::log(a.factorial()) -
                    std::lgamma(static_cast<double>(n + a.degree())));
}

IntegralEstimate integrate_ball(const ScalarField& phi, int n, const McConfig& cfg) {
    cfg.validate();
    const quad::Rule radial = quad::gauss_legendre(cfg.radial_nodes, 0.0, 1.0);
    std::vector<double> w(radial.size());
    for (std::size_t k = 0; k < radial.size(); ++k)
        w[k] = radial.weights[k] * 2.0 * n * std::pow(radial.nodes[k], 2 * n - 1);
    const DirectionSet dirs(n, static_cast<std::size_t>(cfg.sphere_samples), cfg.seed);
    stats::Running acc;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        double y = 0.0;
        for (std::size_t k = 0; k < radial.size(); ++k) y += w[k] * phi(scaled_point(dirs[j], radial.nodes[k]));
        acc.add(y);
    }
    auto est = from_running(acc, Method::radial_product);
    est.samples *= radial.size();
    return est;
}

IntegralEstimate integrate_ball_weighted(const ScalarField& phi, int n, double gamma, const McConfig& cfg) {
    cfg.validate();
    const quad::Rule x = quad::gauss_jacobi01(cfg.radial_nodes, gamma, n - 1.0);
    const DirectionSet dirs(n, static_cast<std::size_t>(cfg.sphere_samples), cfg.seed);
    stats::Running acc;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        double y = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) y += n * x.weights[k] * phi(scaled_point(dirs[j], std::sqrt(x.nodes[k])));
        acc.add(y);
    }
    auto est = from_running(acc, Method::radial_product);
    est.samples *= x.size();
    return est;
}

IntegralEstimate integrate_ball_weighted(const ScalarField& phi, int n, double gamma, int radial_nodes,
                                         const SphereRule& sphere) {
    if (sphere.n != n) throw std::invalid_argument("integrate_ball_weighted: sphere rule dimension mismatch");
    const quad::Rule x = quad::gauss_jacobi01(radial_nodes, gamma, n - 1.0);
    double total = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double r = std::sqrt(x.nodes[k]);
        double shell = 0.0;
        for (std::size_t j = 0; j < sphere.size(); ++j) shell += sphere.weights[j] * phi(scaled_point(sphere[j], r));
        total += n * x.weights[k] * shell;
    }
    return {total, 0.0, static_cast<std::uint64_t>(x.size() * sphere.size()), Method::cubature, {}};
}

IntegralEstimate integrate_ball_rejection(const ScalarField& phi, int n, const McConfig& cfg) {
    cfg.validate();
    const auto gen = rng::make(cfg.seed, rng::Stream::ball_rejection);
    stats::Running acc;
    std::uint64_t proposal = 0;
    std::vector<double> x(2 * static_cast<std::size_t>(n));
    while (acc.count() < static_cast<std::size_t>(cfg.sphere_samples)) {
        for (std::size_t k = 0; k < x.size(); k += 2) {
            const auto u = gen.uniform2(proposal * 64 + k / 2);
            x[k] = 2.0 * u[0] - 1.0;
            if (k + 1 < x.size()) x[k + 1] = 2.0 * u[1] - 1.0;
        }
        ++proposal;
        double norm2 = 0.0;
        for (double v : x) norm2 += v * v;
        if (norm2 >= 1.0) continue;
        CVector z(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) z[i] = {x[2 * i], x[2 * i + 1]};
        acc.add(phi(BallPoint(std::move(z))));
    }
    return from_running(acc, Method::monte_carlo);
}

IntegralEstimate integrate_ball_hyperbolic(const ScalarField& phi, int n, const McConfig& cfg) {
    cfg.validate();
    const double hint = phi.support_radius_hint;
    if (!(hint > 0.0) || hint > 1.0) throw std::invalid_argument("integrate_ball_hyperbolic: hint must lie in (0, 1]");
    const DirectionSet dirs(n, static_cast<std::size_t>(cfg.sphere_samples), cfg.seed);
    IntegralEstimate est;

    if (hint < 1.0) {
        const double s_max = std::pow(hint * hint / (1.0 - hint * hint), n);
        const auto gen = rng::make(cfg.seed, rng::Stream::hyperbolic_joint);
        stats::Running acc;
        for (std::size_t j = 0; j < dirs.size(); ++j) {
            const double s = s_max * gen.uniform2(j)[0];
            const double r = geometry::radius_of_volume(s, n);
            acc.add(s_max * phi(scaled_point(dirs[j], r)));
        }
        est = from_running(acc, Method::monte_carlo);
        double edge = 0.0;
        for (std::size_t j = 0; j < std::min<std::size_t>(dirs.size(), 16); ++j)
            edge = std::max(edge, std::abs(phi(scaled_point(dirs[j], hint))));
        if (edge > 1e-12) {
            std::ostringstream msg;
            msg << "integrand is " << edge << " at the truncation radius " << hint;
            est.warning = msg.str();
        }
        return est;
    }

    const quad::Rule radial = quad::gauss_legendre(cfg.radial_nodes, 0.0, 1.0);
    std::vector<double> w(radial.size());
    for (std::size_t k = 0; k < radial.size(); ++k) {
        const double r = radial.nodes[k];
        w[k] = radial.weights[k] * 2.0 * n * std::pow(r, 2 * n - 1) / std::pow(1.0 - r * r, n + 1);
    }
    stats::Running acc;
    double edge = 0.0;
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        double y = 0.0;
        for (std::size_t k = 0; k < radial.size(); ++k) y += w[k] * phi(scaled_point(dirs[j], radial.nodes[k]));
        acc.add(y);
        if (j < 16) edge = std::max(edge, std::abs(phi(scaled_point(dirs[j], radial.nodes.back()))));
    }
    est = from_running(acc, Method::radial_product);
    est.samples *= radial.size();
    if (edge > 1e-12) {
        std::ostringstream msg;
        msg << "integrand has not decayed near the boundary (" << edge << " at r = " << radial.nodes.back() << ")";
        est.warning = msg.str();
    }
    return est;
}

}  // namespace integrate
}  // namespace hypball

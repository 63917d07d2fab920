#include "hypball/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hypball {

BallPoint::BallPoint(CVector coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("BallPoint: dimension must be at least 1");
    for (const auto& c : coords_) norm2_ += std::norm(c);
    if (!(norm2_ < 1.0)) throw std::domain_error("BallPoint: |z| must be < 1, got |z|^2 = " + std::to_string(norm2_));
}

BallPoint BallPoint::radial(std::span<const Complex> direction, double r) {
    CVector c(direction.begin(), direction.end());
    for (auto& x : c) x *= r;
    return BallPoint(std::move(c));
}

BallPoint BallPoint::origin(int n) { return BallPoint(CVector(static_cast<std::size_t>(n), Complex{})); }

double BallPoint::norm() const { return std::sqrt(norm2_); }

namespace geometry {

namespace {

constexpr double kLogSpaceThreshold = 300.0;

double log_sinh(double rho) {
    if (rho < kLogSpaceThreshold) return std::log(std::sinh(rho));
    return rho - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * rho));
}

BallPoint shifted(const BallPoint& z, std::size_t k, double delta) {
    CVector c = z.coords();
    const std::size_t n = c.size();
    if (k < n) c[k] += Complex(delta, 0.0);
    else c[k - n] += Complex(0.0, delta);
    return BallPoint(std::move(c));
}

BallPoint shifted2(const BallPoint& z, std::size_t k, double dk, std::size_t l, double dl) {
    CVector c = z.coords();
    const std::size_t n = c.size();
    auto bump = [&](std::size_t idx, double d) {
        if (idx < n) c[idx] += Complex(d, 0.0);
        else c[idx - n] += Complex(0.0, d);
    };
    bump(k, dk);
    bump(l, dl);
    return BallPoint(std::move(c));
}

double checked(double v) {
    if (!std::isfinite(v)) throw std::domain_error("invariant_laplacian: field is singular near the evaluation point");
    return v;
}

}  // namespace

GeodesicRadius geodesic_radius(const BallPoint& z) { return {geodesic_radius_of(z.norm())}; }

double geodesic_radius_of(double r) {
    if (!(r >= 0.0) || !(r < 1.0)) throw std::domain_error("geodesic_radius: requires 0 <= |z| < 1");
    return std::atanh(r);
}

double log_geodesic_ball_volume(GeodesicRadius rho, int n) {
    if (!(rho.rho >= 0.0) || !std::isfinite(rho.rho)) throw std::domain_error("geodesic radius must be finite and >= 0");
    if (rho.rho == 0.0) return -std::numeric_limits<double>::infinity();
    return 2.0 * n * log_sinh(rho.rho);
}

double geodesic_ball_volume(GeodesicRadius rho, int n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(rho.rho >= 0.0) || !std::isfinite(rho.rho)) throw std::domain_error("geodesic radius must be finite and >= 0");
    if (rho.rho < kLogSpaceThreshold) return std::pow(std::sinh(rho.rho), 2.0 * n);
    const double lv = log_geodesic_ball_volume(rho, n);
    if (lv > std::log(std::numeric_limits<double>::max())) throw std::overflow_error("geodesic_ball_volume overflows");
    return std::exp(lv);
}

double geodesic_sphere_area(GeodesicRadius rho, int n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(rho.rho > 0.0) || !std::isfinite(rho.rho)) throw std::domain_error("geodesic_sphere_area: requires rho > 0");
    if (rho.rho < kLogSpaceThreshold)
        return 2.0 * n * std::pow(std::sinh(rho.rho), 2.0 * n - 1.0) * std::cosh(rho.rho);
    // cosh ~ sinh here; log cosh = log sinh + log coth.
    const double la = std::log(2.0 * n) + 2.0 * n * log_sinh(rho.rho) - std::log(std::tanh(rho.rho));
    if (la > std::log(std::numeric_limits<double>::max())) throw std::overflow_error("geodesic_sphere_area overflows");
    return std::exp(la);
}

double radius_of_volume(double s, int n) {
    if (!(s >= 0.0)) throw std::domain_error("radius_of_volume: volume must be >= 0");
    return std::tanh(std::asinh(std::pow(s, 1.0 / (2.0 * n))));
}

CVector finite_difference_gradient(const ScalarField& u, const BallPoint& z) {
    const std::size_t n = z.coords().size();
    const double h = 1e-5 * (1.0 - z.norm());
    CVector grad(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = (u(shifted(z, i, h)) - u(shifted(z, i, -h))) / (2.0 * h);
        const double dy = (u(shifted(z, i + n, h)) - u(shifted(z, i + n, -h))) / (2.0 * h);
        grad[i] = 0.5 * Complex(dx, -dy);
    }
    return grad;
}

double gradient_norm_from_partials(std::span<const Complex> partials, const BallPoint& z) {
    double diag = 0.0;
    Complex proj{};
    for (std::size_t i = 0; i < partials.size(); ++i) {
        diag += std::norm(partials[i]);
        proj += z[i] * partials[i];
    }
    const double form = std::max(diag - std::norm(proj), 0.0);
    return std::sqrt(4.0 * z.defect() * form);
}

double bergman_gradient_norm(const ScalarField& u, const BallPoint& z) {
    const CVector grad = u.complex_gradient ? u.complex_gradient(z) : finite_difference_gradient(u, z);
    return gradient_norm_from_partials(grad, z);
}

double invariant_laplacian(const ScalarField& u, const BallPoint& z, std::optional<double> step) {
    const std::size_t n = z.coords().size();
    const std::size_t dim = 2 * n;
    const double h = step.value_or(1e-3 * (1.0 - z.norm()));
    const double f0 = checked(u(z));

    // Real Hessian, fourth-order accurate.
    std::vector<double> hess(dim * dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
        const double fp1 = checked(u(shifted(z, k, h)));
        const double fm1 = checked(u(shifted(z, k, -h)));
        const double fp2 = checked(u(shifted(z, k, 2 * h)));
        const double fm2 = checked(u(shifted(z, k, -2 * h)));
        hess[k * dim + k] = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
        for (std::size_t l = k + 1; l < dim; ++l) {
            auto cross = [&](double s) {
                return (checked(u(shifted2(z, k, s, l, s))) - checked(u(shifted2(z, k, s, l, -s))) -
                        checked(u(shifted2(z, k, -s, l, s))) + checked(u(shifted2(z, k, -s, l, -s)))) /
                       (4.0 * s * s);
            };
            const double mixed = (4.0 * cross(h) - cross(2.0 * h)) / 3.0;
            hess[k * dim + l] = hess[l * dim + k] = mixed;
        }
    }

    // d^2/dz_i dconj(z_j) = (u_xixj + u_yiyj + i (u_xiyj - u_yixj)) / 4.
    Complex acc{};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double re = hess[i * dim + j] + hess[(i + n) * dim + (j + n)];
            const double im = hess[i * dim + (j + n)] - hess[(i + n) * dim + j];
            const Complex mixed = 0.25 * Complex(re, im);
            const Complex metric = (i == j ? 1.0 : 0.0) - z[i] * std::conj(z[j]);
            acc += metric * mixed;
        }
    }
    return 4.0 * z.defect() * acc.real();
}

}  // namespace geometry
}  // namespace hypball

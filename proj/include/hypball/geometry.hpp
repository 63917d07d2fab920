#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hypball {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// A point of the unit ball B_n of C^n. Construction enforces |z| < 1.
class BallPoint {
public:
    explicit BallPoint(CVector coords);
    /// The point r * zeta for a unit direction zeta, 0 <= r < 1.
    static BallPoint radial(std::span<const Complex> direction, double r);
    static BallPoint origin(int n);

    [[nodiscard]] int dim() const noexcept { return static_cast<int>(coords_.size()); }
    [[nodiscard]] const CVector& coords() const noexcept { return coords_; }
    [[nodiscard]] const Complex& operator[](std::size_t i) const noexcept { return coords_[i]; }
    [[nodiscard]] double norm2() const noexcept { return norm2_; }
    [[nodiscard]] double norm() const;
    /// 1 - |z|^2, computed without cancellation near the boundary when possible.
    [[nodiscard]] double defect() const noexcept { return 1.0 - norm2_; }

private:
    CVector coords_;
    double norm2_ = 0.0;
};

/// Hyperbolic distance from the origin, in the length units of the Bergman metric.
struct GeodesicRadius {
    double rho = 0.0;
};

/// A real-valued field on B_n together with optional analytic derivatives.
struct ScalarField {
    std::function<double(const BallPoint&)> eval;
    /// Holomorphic-coordinate partials du/dz_i.
    std::function<CVector(const BallPoint&)> complex_gradient;
    double support_radius_hint = 1.0;

    double operator()(const BallPoint& z) const { return eval(z); }
};

namespace geometry {

GeodesicRadius geodesic_radius(const BallPoint& z);
/// arctanh(r) for a Euclidean radius r in [0, 1).
double geodesic_radius_of(double r);

/// Hyperbolic volume of the geodesic ball of radius rho: sinh(rho)^{2n}.
double geodesic_ball_volume(GeodesicRadius rho, int n);
/// log of geodesic_ball_volume, finite for every rho > 0.
double log_geodesic_ball_volume(GeodesicRadius rho, int n);
/// Area of the geodesic sphere: 2n sinh(rho)^{2n-1} cosh(rho).
double geodesic_sphere_area(GeodesicRadius rho, int n);

/// Euclidean radius whose geodesic ball has hyperbolic volume s.
double radius_of_volume(double s, int n);

/// du/dz_i by central differences with step 1e-5 (1 - |z|).
CVector finite_difference_gradient(const ScalarField& u, const BallPoint& z);

/// |grad_g u|_g from holomorphic partials at z.
double gradient_norm_from_partials(std::span<const Complex> partials, const BallPoint& z);
/// |grad_g u|_g, analytic gradient when the field carries one, finite differences otherwise.
double bergman_gradient_norm(const ScalarField& u, const BallPoint& z);

/// Invariant Laplacian 4(1-|z|^2) sum (delta_ij - z_i conj z_j) d^2u / dz_i d conj z_j,
/// evaluated by fourth-order finite differences on the real coordinates.
/// `step` overrides the default stencil width 1e-3 (1 - |z|).
double invariant_laplacian(const ScalarField& u, const BallPoint& z, std::optional<double> step = std::nullopt);

}  // namespace geometry
}  // namespace hypball

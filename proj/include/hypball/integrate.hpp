#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypball/geometry.hpp"
#include "hypball/holo.hpp"

namespace hypball {

enum class Method { monte_carlo, radial_product, exact, cubature };

std::string_view to_string(Method m) noexcept;

/// Result of an integration engine.
///
/// For `cubature`, `std_error` carries a resolution-difference error estimate
/// instead of a sampling error. `std_error` is 0 for `exact`.
struct IntegralEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    Method method = Method::exact;
    std::string warning;
};

struct McConfig {
    std::uint64_t seed = 42;
    int sphere_samples = 4096;
    int radial_nodes = 64;

    /// Throws std::invalid_argument unless both counts are >= 16.
    void validate() const;
};

/// A function on the unit sphere S_n, given the unit vector.
using SphereField = std::function<double(std::span<const Complex>)>;

/// Shared set of uniform directions on S_n (common random numbers).
class DirectionSet {
public:
    DirectionSet(int n, std::size_t count, std::uint64_t seed, std::uint64_t sub = 0);

    [[nodiscard]] int dim() const noexcept { return n_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size() / static_cast<std::size_t>(n_); }
    [[nodiscard]] std::span<const Complex> operator[](std::size_t j) const noexcept {
        return {data_.data() + j * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }

private:
    int n_;
    CVector data_;
};

/// Deterministic product rule on S_n for n <= 2. Weights sum to 1.
struct SphereRule {
    int n = 1;
    CVector points;  // size() * n entries
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
    [[nodiscard]] std::span<const Complex> operator[](std::size_t j) const noexcept {
        return {points.data() + j * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }
};

namespace integrate {

/// n = 1: `resolution` equispaced points on the circle.
/// n = 2: Gauss-Legendre in |zeta_1|^2 (resolution / 4 nodes) times a
/// resolution x resolution phase grid.
SphereRule sphere_cubature(int n, int resolution);

/// Monte Carlo mean of phi over normalized surface measure.
IntegralEstimate integrate_sphere(const SphereField& phi, int n, const McConfig& cfg);

/// Integral of zeta^a conj(zeta)^b over S_n with sigma(S_n) = 1.
double exact_sphere_monomial(const MultiIndex& a, const MultiIndex& b, int n);

/// Integral over B_n against normalized volume: Gauss-Legendre in r times
/// shared sphere directions.
IntegralEstimate integrate_ball(const ScalarField& phi, int n, const McConfig& cfg);

/// Integral of phi (1 - |z|^2)^gamma dv, gamma > -1. Gauss-Jacobi in x = |z|^2,
/// so weights singular at the boundary are integrated exactly.
IntegralEstimate integrate_ball_weighted(const ScalarField& phi, int n, double gamma, const McConfig& cfg);

/// Same integral with a deterministic sphere rule in place of sampled directions.
IntegralEstimate integrate_ball_weighted(const ScalarField& phi, int n, double gamma, int radial_nodes,
                                         const SphereRule& sphere);

/// Plain rejection sampling from the cube [-1, 1]^{2n}; an independent cross-check.
IntegralEstimate integrate_ball_rejection(const ScalarField& phi, int n, const McConfig& cfg);

/// Integral of phi against dv_g = dv / (1 - |z|^2)^{n+1}.
///
/// With support_radius_hint r < 1 the volume coordinate s is sampled uniformly
/// on [0, s(r)] jointly with the direction. Without a hint, polar
/// Gauss-Legendre in r is used and phi must decay fast enough at the boundary.
IntegralEstimate integrate_ball_hyperbolic(const ScalarField& phi, int n, const McConfig& cfg);

}  // namespace integrate
}  // namespace hypball

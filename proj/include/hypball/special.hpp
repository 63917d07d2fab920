#pragma once

#include <cmath>
#include <stdexcept>

namespace hypball::special {

inline double lgamma(double x) { return std::lgamma(x); }

inline double gamma(double x) { return std::tgamma(x); }

/// Euler Beta function B(p, q) for p, q > 0.
inline double beta(double p, double q) {
    if (!(p > 0.0) || !(q > 0.0)) throw std::domain_error("beta: arguments must be positive");
    return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q));
}

inline double factorial(int k) { return std::tgamma(k + 1.0); }

/// Weighted Bergman normalizer Gamma(alpha) / (n! Gamma(alpha - n)), alpha > n.
inline double c_alpha(double alpha, int n) {
    if (!(alpha > n)) throw std::domain_error("c_alpha: requires alpha > n");
    return std::exp(std::lgamma(alpha) - std::lgamma(n + 1.0) - std::lgamma(alpha - n));
}

/// (alpha - n) Gamma(alpha + 1) / (Gamma(n + 1) Gamma(alpha - n + 1)); equals alpha * c_alpha.
inline double k_alpha(double alpha, int n) {
    if (!(alpha > n)) throw std::domain_error("k_alpha: requires alpha > n");
    return (alpha - n) *
           std::exp(std::lgamma(alpha + 1.0) - std::lgamma(n + 1.0) - std::lgamma(alpha - n + 1.0));
}

/// Lebesgue volume of the unit ball of C^n = R^{2n}: pi^n / n!.
inline double euclidean_ball_volume(int n) {
    return std::exp(n * std::log(M_PI) - std::lgamma(n + 1.0));
}

/// Lebesgue area of the unit sphere of R^{2n}: 2 pi^n / (n-1)!.
inline double euclidean_sphere_area(int n) {
    return 2.0 * std::exp(n * std::log(M_PI) - std::lgamma(static_cast<double>(n)));
}

}  // namespace hypball::special

#pragma once

#include <span>
#include <string>
#include <vector>

#include "hypball/holo.hpp"
#include "hypball/integrate.hpp"

namespace hypball {

enum class SpaceKind { hardy, bergman };

/// H^p (alpha unused) or A^p_alpha on B_n.
struct SpaceParams {
    SpaceKind kind = SpaceKind::hardy;
    int n = 1;
    double p = 2.0;
    double alpha = 0.0;

    static SpaceParams hardy(int n, double p) { return {SpaceKind::hardy, n, p, 0.0}; }
    static SpaceParams bergman(int n, double p, double alpha) { return {SpaceKind::bergman, n, p, alpha}; }

    /// p / alpha for Bergman, p / n for Hardy.
    [[nodiscard]] double r() const;
    /// Exponent of (1 - |z|^2) in the pointwise bound: n for Hardy, alpha for Bergman.
    [[nodiscard]] double weight_exponent() const;
    [[nodiscard]] std::string label() const;
    /// Throws std::domain_error for p <= 0, n < 1 or (Bergman) alpha <= n.
    void validate() const;
};

/// `automatic` uses closed forms when available (single monomials, even p),
/// deterministic cubature for n <= 2, and Monte Carlo otherwise.
enum class NormMethod { automatic, monte_carlo };

namespace norms {

/// ||f||^p in the given space.
IntegralEstimate norm_power(const Polynomial& f, const SpaceParams& space, const McConfig& cfg,
                            NormMethod method = NormMethod::automatic);

/// ||f|| = norm_power^{1/p}, with the error propagated to first order.
IntegralEstimate norm(const Polynomial& f, const SpaceParams& space, const McConfig& cfg,
                      NormMethod method = NormMethod::automatic);

IntegralEstimate hardy_norm(const Polynomial& f, double p, const McConfig& cfg,
                            NormMethod method = NormMethod::automatic);
IntegralEstimate bergman_norm(const Polynomial& f, double p, double alpha, const McConfig& cfg,
                              NormMethod method = NormMethod::automatic);

/// ||c z^a||^p in closed form.
double monomial_norm_power(const MultiIndex& a, Complex c, const SpaceParams& space);

/// f / ||f|| and the scale 1 / ||f|| that was applied.
struct Normalized {
    Polynomial f;
    double scale = 1.0;
};
Normalized normalize(const Polynomial& f, const SpaceParams& space, const McConfig& cfg);

struct MarginReport {
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

/// min over points of ||f||^p - |f(z)|^p (1 - |z|^2)^w.
MarginReport pointwise_bound_check(const Polynomial& f, const SpaceParams& space, std::span<const BallPoint> points,
                                   const McConfig& cfg);

struct ChainEntry {
    SpaceParams space;
    IntegralEstimate norm;
};

struct ChainReport {
    std::vector<ChainEntry> entries;  // Hardy first, then increasing alpha
    double worst_margin = 0.0;       // min over steps of (previous - next + tolerance)
    bool pass = false;
};

/// ||f||_{H^{nr}} >= ||f||_{A^{alpha r}_alpha} for increasing alpha.
ChainReport contraction_chain_check(const Polynomial& f, double r, std::span<const double> alphas, const McConfig& cfg,
                                    NormMethod method = NormMethod::automatic);

struct LimitReport {
    IntegralEstimate hardy;
    std::vector<double> alphas;
    std::vector<IntegralEstimate> bergman;
    std::vector<double> gaps;
    std::vector<double> gap_errors;
    bool monotone = false;
    bool final_small = false;
    bool pass = false;
    std::string warning;
};

/// Gap |A^{alpha r}_alpha - H^{nr}| along alphas decreasing to n.
LimitReport hardy_limit_check(const Polynomial& f, double r, std::span<const double> alphas, const McConfig& cfg);

/// k_alpha * integral_0^1 (1/t - 1)^n t^{alpha - 1} dt by adaptive quadrature (equals 1).
double normalization_identity(double alpha, int n);

}  // namespace norms
}  // namespace hypball

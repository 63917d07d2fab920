#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hypball/holo.hpp"
#include "hypball/integrate.hpp"
#include "hypball/norms.hpp"
#include "hypball/stats.hpp"

namespace hypball {

/// mu(t) = vol_g({u > t}) sampled on a grid, with the exact derivative estimate.
struct DistributionFunction {
    int n = 1;
    double t0 = 0.0;
    std::vector<double> t_grid;
    std::vector<double> mu;
    std::vector<double> mu_stderr;
    std::vector<double> mu_prime;  // d mu / dt from per-ray crossing slopes
    std::vector<double> mu_prime_stderr;
    std::uint64_t directions = 0;
    double cutoff_rho = 0.0;  // a-priori radius beyond which u < t_min / 2
    double scan_rho = 0.0;    // observed radius beyond which the scanned u < t_min / 2
    std::string warning;
};

/// g(t) = t^{1/b} (mu(t)^{1/n} + 1).
struct MonotoneFunctional {
    std::vector<double> t_grid;
    std::vector<double> g;
    std::vector<double> g_stderr;
};

namespace superlevel {

/// A function restricted to one ray rho -> tanh(rho) zeta, with its rho-derivative.
struct RayProfile {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};
using RayFamily = std::function<RayProfile(std::span<const Complex> zeta)>;

/// Per-direction superlevel lengths in the volume coordinate, for a set of levels.
///
/// Along a direction zeta, {rho : u(tanh(rho) zeta) > t} is a finite union of
/// intervals; its length in s = sinh^{2n}(rho) is L(t) and mu(t) is the mean of
/// L over directions. All levels share the same directions.
class RaySamples {
public:
    RaySamples(const LevelFunction& u, std::vector<double> t_grid, const McConfig& cfg);
    /// Generic form: the caller guarantees every profile stays below t_min / 2 beyond rho_max.
    RaySamples(int n, const RayFamily& family, double rho_max, std::vector<double> t_grid, const McConfig& cfg);

    [[nodiscard]] std::size_t directions() const noexcept { return directions_; }
    [[nodiscard]] const std::vector<double>& t_grid() const noexcept { return t_; }
    [[nodiscard]] double length(std::size_t j, std::size_t k) const { return length_[j * t_.size() + k]; }
    [[nodiscard]] double slope(std::size_t j, std::size_t k) const { return slope_[j * t_.size() + k]; }
    [[nodiscard]] double grid_max() const noexcept { return grid_max_; }
    [[nodiscard]] double cutoff_rho() const noexcept { return cutoff_rho_; }
    [[nodiscard]] double scan_rho() const noexcept { return scan_rho_; }
    /// True if some superlevel set was still open at the cutoff radius.
    [[nodiscard]] bool reaches_cutoff() const noexcept { return open_; }

    /// Mean and standard error of sum_k w_k L_j(t_k) (+ sum_k d_k L_j'(t_k)) over directions.
    [[nodiscard]] stats::MeanAndError linear(std::span<const double> w, std::span<const double> d = {}) const;

    /// Contiguous direction batches: per-batch means of (L(t_k))_k followed by (L'(t_k))_k.
    [[nodiscard]] std::vector<std::vector<double>> batch_means(std::size_t batches) const;
    [[nodiscard]] std::vector<double> batch_sizes(std::size_t batches) const;

private:
    std::vector<double> t_;
    std::size_t directions_ = 0;
    std::vector<double> length_;
    std::vector<double> slope_;
    double grid_max_ = 0.0;
    double cutoff_rho_ = 0.0;
    double scan_rho_ = 0.0;
    bool open_ = false;
};

/// Pooled mean and error of each level of a ray sample.
DistributionFunction summarize(const RaySamples& rays, int n, double t0);

/// Nested Gauss rules (48 and 24 nodes) for int phi(t) h(t) dt over levels below a maximum t0,
/// where phi is a quantity sampled by RaySamples (mu or mu').
struct LevelQuadrature {
    std::vector<double> t;
    std::vector<double> fine;
    std::vector<double> coarse;

    /// Adds int_lo^hi phi h dt: Gauss-Legendre in ln t, graded as t = hi - c x^3 next to t0.
    void panel(double lo, double hi, double t0, const std::function<double(double)>& h);
    /// Adds int_0^{t_min} mu s t^{s-1} dt assuming mu(t) ~ mu(t_min) (t_min / t)^decay.
    void power_tail(double t_min, double s, double decay);
};

/// Radius beyond which u < t / 2 on every ray, from |f| <= sum |c_a|.
double certified_cutoff(const LevelFunction& u, double t);

/// 64 geometric levels in [t0 1e-3, t0 (1 - 1e-3)].
std::vector<double> default_t_grid(double t0, std::size_t count = 64);

DistributionFunction distribution_function(const LevelFunction& u, std::span<const double> t_grid, const McConfig& cfg);
/// Uses default_t_grid(t0) with t0 from holo::level_maximum.
DistributionFunction distribution_function(const LevelFunction& u, const McConfig& cfg);

MonotoneFunctional monotone_functional(const DistributionFunction& mu, double b);

struct CurveReport {
    double worst = 0.0;      // largest violation minus tolerance; pass iff <= 0
    double worst_raw = 0.0;  // largest raw violation
    double worst_t = 0.0;
    bool pass = false;
    std::vector<double> margins;     // per grid point
    std::vector<double> tolerances;  // per grid point
};

/// g(t_{i+1}) <= g(t_i) + tol on consecutive levels in (0, t0).
CurveReport monotonicity_check(const DistributionFunction& mu, double b);

/// (bt/n) mu' mu^{1/n - 1} + mu^{1/n} + 1 <= tol at interior levels, mu' from a monotone cubic.
CurveReport differential_inequality_check(const DistributionFunction& mu, double b);

struct WeakTypeReport {
    DistributionFunction mu;
    double scale = 1.0;  // factor applied to f to reach unit Hardy norm
    CurveReport margins;  // margin_k = max((1/t - 1)^n, 0) - mu(t_k)
};

/// Normalizes f in H^{nr}, builds u = |f|^r (1 - |z|^2) and compares mu with (1/t - 1)^n.
WeakTypeReport weak_type_check(const Polynomial& f, double r, const McConfig& cfg);
WeakTypeReport weak_type_check(const Polynomial& f, double r, std::span<const double> t_grid, const McConfig& cfg);

struct LayerCake {
    IntegralEstimate value;
    double quadrature_error = 0.0;
    std::string warning;
};

/// alpha c_alpha int_0^{t0} mu(t) t^{alpha - 1} dt for u = |f|^r (1 - |z|^2).
LayerCake layer_cake_bergman(const Polynomial& f, double r, double alpha, const McConfig& cfg);

/// Increasing G with G(0) = 0, from a fixed registry.
struct GFunction {
    enum class Kind { power, hinge, piecewise };
    Kind kind = Kind::power;
    double s = 2.0;                // power: t^s
    double c = 0.5;                // hinge: max(t - c, 0)
    std::vector<double> knots;     // piecewise: increasing breakpoints starting at 0
    std::vector<double> slopes;    // piecewise: nonnegative slope on [knots[i], knots[i+1])

    static GFunction power(double s);
    static GFunction hinge(double c);
    static GFunction piecewise(std::vector<double> knots, std::vector<double> slopes);
    /// Parses "power:2", "hinge:0.5" or "piecewise:0,0.2,0.6:1,3,0.5".
    static GFunction parse(const std::string& tag);

    [[nodiscard]] double operator()(double t) const;
    [[nodiscard]] double derivative(double t) const;
    [[nodiscard]] std::string name() const;
};

struct ExtremalReport {
    IntegralEstimate value;  // int G(u) dv_g for the normalized f
    double extremal = 0.0;   // the same functional for f = 1
    double quadrature_error = 0.0;
    double margin = 0.0;     // extremal - value
    double tolerance = 0.0;
    double scale = 1.0;
    bool pass = false;
};

/// int G(u) dv_g = int mu dG against the f = 1 value, u = |f|^r (1 - |z|^2) with ||f||_{H^{nr}} = 1.
ExtremalReport extremal_functional_check(const GFunction& G, const Polynomial& f, double r, const McConfig& cfg);

/// int_0^1 max((1/t - 1)^n, 0) G'(t) dt by adaptive quadrature.
double extremal_value(const GFunction& G, int n);

/// Integrals over {w > tau} of user functionals of (v, |grad_g v|) with v = w - tau,
/// accumulated along the same rays as RaySamples.
class RayIntegrals {
public:
    /// `integrand(v, grad, out)` adds the K integrand values at one point into `out`.
    using Integrand = std::function<void(double v, double grad, std::span<double> out)>;

    RayIntegrals(const LevelFunction& w, double tau, std::size_t functionals, const Integrand& integrand,
                 const McConfig& cfg, bool need_gradient = true);

    [[nodiscard]] std::size_t directions() const noexcept { return directions_; }
    [[nodiscard]] std::size_t functionals() const noexcept { return k_; }
    [[nodiscard]] stats::MeanAndError mean(std::size_t k) const;
    [[nodiscard]] std::vector<std::vector<double>> batch_means(std::size_t batches) const;
    [[nodiscard]] std::vector<double> batch_sizes(std::size_t batches) const;
    [[nodiscard]] double value(std::size_t j, std::size_t k) const { return data_[j * k_ + k]; }

private:
    std::size_t directions_ = 0;
    std::size_t k_ = 0;
    std::vector<double> data_;
};

}  // namespace superlevel
}  // namespace hypball

#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypball/holo.hpp"
#include "hypball/integrate.hpp"
#include "hypball/stats.hpp"

namespace hypball::inequalities {

/// Sharp Sobolev constant for ||grad u||_p >= S ||u||_{p*} on R^N with Lebesgue measure
/// normalized so that the unit ball has volume 1. Requires 1 <= p < N; S(N, 1) = N.
double sobolev_constant(int n_real, double p);

/// ||grad v||_p / ||v||_{p*} for the radial extremal v = (1 + |x|^{p/(p-1)})^{-(N-p)/p} on R^N,
/// computed by one-dimensional quadrature in the same normalization.
double sobolev_extremal_ratio(int n_real, double p);

/// l(s) = s^{(2n-1)/2n} (1 + s^{1/n})^{1/2}.
double ell(double s, int n);
/// n B(n - (2n-1)p/(2(p-1)), n/(p-1)) for p > 2n.
double ell_integral(int n, double p);
/// int_0^inf l(s)^{-p/(p-1)} ds by adaptive quadrature.
double ell_integral_quadrature(int n, double p);

/// sup over t in [0, 1] of t^{1-alpha} a^alpha + (1-t)^{1-alpha} b^alpha, found numerically.
double sup_representation(double a, double b, double alpha);

struct SharpConstants {
    int n = 1;
    double p = 1.0;
    double p_star = std::numeric_limits<double>::infinity();  // 2np/(2n-p) for p < 2n
    std::optional<double> S;                                   // for 1 <= p < 2n
    std::optional<double> ell_integral;                        // for p > 2n
    std::optional<double> sup_prefactor;                       // B(...)/2 for p > 2n
};
SharpConstants sharp_constants(int n, double p);

struct CurveCheck {
    std::vector<double> rho;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> margins;  // lhs - rhs
    double worst = 0.0;           // min margin, or max relative error for identities
    bool pass = false;
};

/// per_g^{2n} - C vol_g^{2n-1} on geodesic balls, C from the Euclidean unit ball of R^{2n}.
/// Hyperbolic quantities are taken in the Lebesgue scale (multiplied by pi^n/n!).
CurveCheck isoperimetric_model_check(std::span<const double> rho_grid, int n);

/// per_g^2 = 4n^2 (V^{(2n-1)/n} + V^2) on geodesic balls; `worst` is the max relative error.
CurveCheck isoperimetric_refined_check(std::span<const double> rho_grid, int n);

enum class SobolevRegime { I, II, III, IV };
std::string_view to_string(SobolevRegime r) noexcept;
SobolevRegime parse_regime(std::string_view s);
/// The regime whose hypotheses hold for (n, p), if any.
std::optional<SobolevRegime> regime_for(int n, double p);

struct SobolevReport {
    SobolevRegime regime = SobolevRegime::I;
    int n = 1;
    double p = 1.0;
    double tau = 0.0;
    stats::MeanAndError gradient;  // int |grad_g u|^p dv_g
    stats::MeanAndError lhs;
    stats::MeanAndError rhs;
    double sup = 0.0;  // max u (regime IV)
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// The Sobolev-type inequality of the given regime for u = (w - tau)_+.
SobolevReport sobolev_check(const LevelFunction& w, double tau, double p, SobolevRegime regime, const McConfig& cfg);

/// Inner integral of the averaging operator: tail int_x^inf f (default, for eps > p - 1) or
/// head int_0^x f (for eps < p - 1).
enum class HardyMode { tail, head };

struct HardyInput {
    std::function<double(double)> f;
    double lo = 0.0;  // f vanishes outside [lo, hi]
    double hi = std::numeric_limits<double>::infinity();
    /// With hi = inf: f(x) = c x^{-tail_exponent} for x >= tail_start, handled in closed form.
    double tail_start = std::numeric_limits<double>::infinity();
    double tail_exponent = 0.0;
    std::string name;
};

struct HardyReport {
    HardyMode mode = HardyMode::tail;
    double constant = 0.0;  // (p / |eps + 1 - p|)^p
    double lhs = 0.0;       // constant * int f^p x^eps
    double rhs = 0.0;       // int (F(x)/x)^p x^eps
    double ratio = 0.0;     // rhs / lhs
    double margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

HardyReport weighted_hardy_check(const HardyInput& f, double p, double eps, HardyMode mode = HardyMode::tail);

struct KalajReport {
    double scale = 1.0;  // lambda with g -> lambda g meeting the normalization
    double normalization = 0.0;
    double normalization_residual = 0.0;
    double lhs = 0.0;  // int Phi(g/t^{1/alpha}) Psi
    double rhs = 0.0;  // int Phi(t^{-1/alpha}) Psi
    double margin = 0.0;
    double tolerance = 1e-8;
    bool pass = false;
};

struct KalajInput {
    std::function<double(double)> Phi;
    std::function<double(double)> Psi;
    std::function<double(double)> g;
    std::vector<double> phi_kinks;  // x values where Phi is not smooth
    double alpha = 2.0;
};

KalajReport kalaj_lemma_check(const KalajInput& in);

}  // namespace hypball::inequalities

#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hypball/geometry.hpp"
#include "hypball/holo.hpp"
#include "hypball/integrate.hpp"
#include "hypball/superlevel.hpp"

namespace hypball {

/// u*(s): the generalized inverse of mu, stored as a monotone linear interpolant
/// in the hyperbolic volume coordinate s.
///
/// Repeated s values encode jumps; evaluation is right-continuous. Past the last
/// node u* is 0 (compact support) or follows u*(s) ~ s^{-tail_exponent}.
struct DecreasingRearrangement {
    std::vector<double> s_grid;
    std::vector<double> ustar;
    double tail_exponent = 0.0;  // 0: compactly supported

    [[nodiscard]] double operator()(double s) const;
    /// One-sided slope d u* / ds on the segment containing s (0 on flats and jumps).
    [[nodiscard]] double derivative(double s) const;
    /// vol_g(supp u); infinite for a power-law tail.
    [[nodiscard]] double support_volume() const;
    /// int_0^inf u*(s)^q ds in closed form for the interpolant.
    [[nodiscard]] double power_integral(double q) const;
};

namespace rearrange {

/// Builds u* from mu. `tail_exponent` = b/n for level functions, 0 for compact support.
DecreasingRearrangement decreasing_rearrangement(const DistributionFunction& mu, double tail_exponent = 0.0);

/// u*(sinh^{2n} rho(z)).
double hyperbolic_symmetrization(const DecreasingRearrangement& ustar, const BallPoint& z);
/// u*(|z|^{2n}) for z in C^n.
double euclidean_symmetrization(const DecreasingRearrangement& ustar, std::span<const Complex> z);
ScalarField hyperbolic_field(const DecreasingRearrangement& ustar);

/// Levels of (w - tau)_+ for max w = t0: one level just above 0, then points geometric in
/// w towards the bottom and clustered near the top.
std::vector<double> truncation_levels(double tau, double t0, std::size_t count = 256);

/// mu of u = (w - tau)_+ on truncation_levels(tau, t0), with compact-support u*.
struct Truncation {
    double tau = 0.0;
    double t0 = 0.0;  // max of w
    DistributionFunction mu;  // levels of u, t0 field = t0 - tau
    DecreasingRearrangement ustar;
};
Truncation truncate(const LevelFunction& w, double tau, const McConfig& cfg, std::size_t levels = 256);

struct PreservationReport {
    double q = 2.0;  // infinity for the sup norm
    stats::MeanAndError direct;        // int u^q dv_g (or sup u)
    double symmetrized = 0.0;          // int u*^q ds (or u*(0))
    double discretization = 0.0;       // interpolation error estimate for the symmetrized side
    stats::MeanAndError direct_support;  // vol_g({u > 0}) along rays
    double symmetrized_support = 0.0;
    double margin = 0.0;  // |direct - symmetrized|
    double tolerance = 0.0;
    bool pass = false;
};

/// L^q norms and support volumes of u = (w - tau)_+ and its hyperbolic symmetrization.
PreservationReport preservation_check(const LevelFunction& w, double tau, double q, const McConfig& cfg);
/// Several exponents from one set of ray samples; identical to separate calls.
std::vector<PreservationReport> preservation_checks(const LevelFunction& w, double tau, std::span<const double> qs,
                                                    const McConfig& cfg);

struct EquimeasureReport {
    std::vector<double> t_grid;
    std::vector<double> mu;         // of u
    std::vector<double> mu_sharp;   // of u#, from independent directions
    double worst = 0.0;             // max_k |mu - mu_sharp| - tol_k over resolved levels
    std::size_t unresolved = 0;     // levels below t0 that no sampled ray reaches
    bool pass = false;
};

/// Re-estimates the distribution of u# with a different seed and compares it with mu of u.
EquimeasureReport equimeasurability_check(const LevelFunction& w, double tau, const McConfig& cfg);

struct PolyaSzegoReport {
    double p = 2.0;
    stats::MeanAndError gradient;     // int |grad_g u|^p dv_g
    stats::MeanAndError symmetrized;  // int |grad_g u#|^p dv_g via the radial formula
    double quadrature_error = 0.0;
    double margin = 0.0;  // gradient - symmetrized
    double tolerance = 0.0;
    bool pass = false;
};

/// Polya-Szego for u = (w - tau)_+.
PolyaSzegoReport polya_szego_check(const LevelFunction& w, double tau, double p, const McConfig& cfg);
std::vector<PolyaSzegoReport> polya_szego_checks(const LevelFunction& w, double tau, std::span<const double> ps,
                                                 const McConfig& cfg);

/// k_{n,p}(s) = s^{(2n-1)p/2n} ((1 + s^{1/n})^{p/2} - 1).
double k_np(double s, int n, double p);

/// A nonincreasing radial profile u*(s) with a known derivative.
struct RadialProfile {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::vector<double> breaks;  // points where u*' jumps
    double support = std::numeric_limits<double>::infinity();

    /// (1 + s^{1/n})^{-1}.
    static RadialProfile rational(int n);
    /// 1 on [0, s0], linear down to 0 at s1.
    static RadialProfile plateau(double s0, double s1);
};

struct RadialIdentityReport {
    double s_max = 0.0;
    double e1_line = 0.0;    // (2n)^p int |u*'|^p s^{(2n-1)p/2n} ds
    double e1_plane = 0.0;   // int_{C^n} |grad u#_e|^p dv
    double e2_line = 0.0;    // e1_line + (2n)^p int |u*'|^p k_{n,p} ds
    double e2_ball = 0.0;    // int_{B_n} |grad_g u#_g|^p dv_g
    double e1_rel_error = 0.0;
    double e2_rel_error = 0.0;
    bool pass = false;
    std::string warning;
};

/// Compares the one-dimensional gradient integrals with the same integrals computed on C^n
/// and on B_n from finite-difference gradients. s_max <= 0 picks the truncation automatically.
RadialIdentityReport radial_gradient_identities_check(const RadialProfile& profile, int n, double p, double s_max = 0.0);

}  // namespace rearrange
}  // namespace hypball

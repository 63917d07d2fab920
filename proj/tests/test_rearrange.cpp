#include <doctest.h>

#include <cmath>

#include "hypball/rearrange.hpp"

using namespace hypball;
using namespace hypball::rearrange;

namespace {

const McConfig kCfg{42, 1024, 48};

Polynomial z1_plus_half() {
    Polynomial f(2);
    f.add_term(MultiIndex({1, 0}), 1.0);
    f.add_term(MultiIndex({0, 0}), 0.5);
    return f;
}

DistributionFunction table(std::vector<double> t, std::vector<double> mu, double t0) {
    DistributionFunction d;
    d.t_grid = std::move(t);
    d.mu = std::move(mu);
    d.mu_stderr.assign(d.mu.size(), 0.0);
    d.t0 = t0;
    return d;
}

}  // namespace

TEST_CASE("generalized inverse") {
    // (1/t - 1)^n inverts to (1 + s^{1/n})^{-1} at every node.
    for (int n = 1; n <= 2; ++n) {
        const LevelFunction u(Polynomial::constant(n, 1.0), 1.0, 1.0);
        const auto mu = superlevel::distribution_function(u, kCfg);
        const auto ustar = decreasing_rearrangement(mu, 1.0 / n);
        for (std::size_t k = 0; k < mu.t_grid.size(); ++k)
            CHECK(ustar(mu.mu[k]) == doctest::Approx(1.0 / (1.0 + std::pow(mu.mu[k], 1.0 / n))).epsilon(1e-9));
        CHECK(ustar(0.0) == doctest::Approx(1.0));
        // Between nodes and in the tail the interpolant stays close.
        for (double s : {0.05, 0.7, 3.0, 1e4}) CHECK(ustar(s) == doctest::Approx(1.0 / (1.0 + std::pow(s, 1.0 / n))).epsilon(1e-2));
        CHECK(std::isinf(ustar.support_volume()));
    }

    const auto zero = decreasing_rearrangement(table({0.1, 0.5}, {0.0, 0.0}, 0.0));
    for (double s : {0.0, 1.0, 10.0}) CHECK(zero(s) == 0.0);

    const auto step = decreasing_rearrangement(table({0.25, 0.5, 0.999999, 1.0, 2.0}, {5, 5, 5, 0, 0}, 1.0));
    for (double s : {0.0, 1.0, 4.999}) CHECK(step(s) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(step(5.0) == 0.0);
    CHECK(step(7.0) == 0.0);
    CHECK(step.support_volume() == 5.0);
    // Linear pieces integrate exactly: u* = 1 on [0, 5) up to 1e-6.
    CHECK(step.power_integral(2.0) == doctest::Approx(5.0).epsilon(1e-5));
}

TEST_CASE("symmetrizations") {
    // u = 1 - |z|^2 on the disc is radial and decreasing: u# = u at the nodes.
    const LevelFunction u(Polynomial::constant(1, 1.0), 2.0, 1.0);
    const auto mu = superlevel::distribution_function(u, kCfg);
    const auto ustar = decreasing_rearrangement(mu, 1.0);
    const CVector e{Complex(0.6, 0.8)};
    for (std::size_t k = 0; k < mu.t_grid.size(); k += 7) {
        const double s = mu.mu[k];
        const double r = std::sqrt(s / (1.0 + s));
        const auto z = BallPoint::radial(e, r);
        CHECK(std::abs(hyperbolic_symmetrization(ustar, z) - u(z)) < 1e-10);
    }
    CHECK(hyperbolic_symmetrization(ustar, BallPoint::origin(1)) == doctest::Approx(1.0));
    CHECK(hyperbolic_field(ustar).eval(BallPoint::radial(e, 0.3)) == doctest::Approx(u(BallPoint::radial(e, 0.3))).epsilon(1e-3));

    // Euclidean: u* of the truncation at tau is supported in |z| <= mu(tau)^{1/2n}.
    const double tau = 0.2;
    const auto tr = truncate(LevelFunction(Polynomial::constant(2, 1.0), 1.0, 1.0), tau, kCfg);
    const double radius = std::pow(std::pow(1.0 / tau - 1.0, 2), 0.25);
    CHECK(tr.ustar.support_volume() == doctest::Approx(std::pow(1.0 / tau - 1.0, 2)).epsilon(1e-7));
    const CVector inside{Complex(0.999 * radius, 0.0), Complex(0.0, 0.0)};
    const CVector outside{Complex(0.0, 0.0), Complex(0.0, 1.001 * radius)};
    CHECK(euclidean_symmetrization(tr.ustar, inside) > 0.0);
    CHECK(euclidean_symmetrization(tr.ustar, outside) == 0.0);
    CHECK(euclidean_symmetrization(tr.ustar, CVector(2, Complex(0.0, 0.0))) == doctest::Approx(1.0 - tau));
    double prev = 2.0;
    for (double r = 0.0; r < 1.2 * radius; r += 0.05) {
        const double v = euclidean_symmetrization(tr.ustar, CVector{Complex(r, 0.0), Complex(0.0, 0.0)});
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("norm and support preservation") {
    for (int n = 1; n <= 2; ++n) {
        const LevelFunction w(Polynomial::constant(n, 1.0), 1.0, 1.0);
        for (double q : {1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()}) {
            const auto r = preservation_check(w, 0.05, q, kCfg);
            CHECK_MESSAGE(r.pass, "n=" << n << " q=" << q << " margin=" << r.margin << " tol=" << r.tolerance);
            if (std::isfinite(q)) CHECK(r.margin < 1e-3 * r.symmetrized);
        }
    }
    // (|z_1|^2 (1 - |z|^2) - 0.1)_+ on B_2
    const LevelFunction w(Polynomial::coordinate(2, 0), 2.0, 1.0);
    for (double q : {1.0, 2.0, 4.0, std::numeric_limits<double>::infinity()}) {
        const auto r = preservation_check(w, 0.1, q, kCfg);
        CHECK_MESSAGE(r.pass, "q=" << q << " margin=" << r.margin << " tol=" << r.tolerance);
        CHECK(r.direct_support.value == doctest::Approx(r.symmetrized_support).epsilon(0.05));
    }
    CHECK_THROWS_AS(preservation_check(w, 0.3, 2.0, kCfg), std::domain_error);
}

TEST_CASE("equimeasurability") {
    CHECK(equimeasurability_check(LevelFunction(z1_plus_half(), 2.0, 1.0), 0.05 * 0.5625, kCfg).pass);
    CHECK(equimeasurability_check(LevelFunction(Polynomial::constant(1, 1.0), 1.0, 1.0), 0.05, kCfg).pass);
}

TEST_CASE("Polya-Szego") {
    const LevelFunction flat(Polynomial::constant(1, 1.0), 1.0, 1.0);
    for (double p : {1.5, 2.0, 3.0}) {
        const auto r = polya_szego_check(flat, 0.05, p, kCfg);
        CHECK(r.pass);
        CHECK(std::abs(r.margin) <= r.tolerance);
        CHECK(r.symmetrized.value == doctest::Approx(r.gradient.value).epsilon(1e-4));
    }
    const LevelFunction w(z1_plus_half(), 2.0, 1.0);
    const double t0 = holo::level_maximum(w).value;
    for (double p : {1.5, 2.0, 3.0}) {
        const auto r = polya_szego_check(w, 0.05 * t0, p, kCfg);
        CHECK_MESSAGE(r.pass, "p=" << p << " margin=" << r.margin << " tol=" << r.tolerance);
        CHECK(r.margin > 0.0);
    }
}

TEST_CASE("radial gradient identities") {
    CHECK(k_np(1.0, 1, 2.0) == doctest::Approx(1.0));
    CHECK(k_np(0.0, 2, 2.0) == 0.0);

    const auto r1 = radial_gradient_identities_check(RadialProfile::rational(1), 1, 2.0);
    CHECK(r1.pass);
    CHECK(r1.e1_line == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(r1.e2_line == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r1.warning.empty());

    const auto r2 = radial_gradient_identities_check(RadialProfile::rational(2), 2, 2.0, 1e4);
    CHECK(r2.pass);
    CHECK(r2.s_max == 1e4);
    const auto diverge = radial_gradient_identities_check(RadialProfile::rational(2), 2, 2.0);
    CHECK_FALSE(diverge.warning.empty());

    // Piecewise linear: constant on [0, 1], linear to 0 at 3.
    const auto p1 = radial_gradient_identities_check(RadialProfile::plateau(1.0, 3.0), 1, 2.0);
    CHECK(p1.pass);
    CHECK(p1.e1_line == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(p1.e2_line == doctest::Approx(38.0 / 3.0).epsilon(1e-10));
    const auto p2 = radial_gradient_identities_check(RadialProfile::plateau(1.0, 3.0), 2, 2.0);
    CHECK(p2.pass);
    CHECK(p2.e1_line == doctest::Approx(4.0 * 0.4 * (std::pow(3.0, 2.5) - 1.0)).epsilon(1e-10));
    CHECK(p2.e2_line == doctest::Approx(p2.e1_line + 4.0 * 26.0 / 3.0).epsilon(1e-10));
    for (double p : {1.5, 3.0}) CHECK(radial_gradient_identities_check(RadialProfile::rational(1), 1, p).pass);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "hypball/inequalities.hpp"
#include "hypball/special.hpp"

using namespace hypball;
using namespace hypball::inequalities;

namespace {

const McConfig kCfg{42, 1024, 48};

Polynomial z1_plus_half(int n) {
    Polynomial f = Polynomial::constant(n, 0.5);
    std::vector<int> e(n, 0);
    e[0] = 1;
    f.add_term(MultiIndex(e), 1.0);
    return f;
}

}  // namespace

TEST_CASE("Sobolev constant") {
    for (int n = 1; n <= 3; ++n) {
        CHECK(sobolev_constant(2 * n, 1.0) == 2.0 * n);
        // Continuity at p = 1 from above.
        CHECK(std::abs(sobolev_constant(2 * n, 1.0 + 1e-12) - 2.0 * n) < 1e-8);
        CHECK_THROWS_AS(sobolev_constant(2 * n, 2.0 * n), std::domain_error);
    }
    // The radial extremal attains the constant; compare through an independent quadrature.
    const double S = sobolev_constant(2, 1.5);
    CHECK(S > 0.0);
    CHECK(sobolev_extremal_ratio(2, 1.5) == doctest::Approx(S).epsilon(1e-2));
    CHECK(sobolev_extremal_ratio(2, 1.5) == doctest::Approx(S).epsilon(1e-8));
    CHECK(sobolev_extremal_ratio(4, 3.0) == doctest::Approx(sobolev_constant(4, 3.0)).epsilon(1e-8));
    CHECK(special::beta(1.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("l-integral and sup representation") {
    for (auto [n, p] : {std::pair{1, 4.0}, std::pair{1, 3.0}, std::pair{2, 6.0}, std::pair{2, 10.0}}) {
        CHECK(std::abs(ell_integral_quadrature(n, p) - ell_integral(n, p)) <= 1e-8 * ell_integral(n, p));
    }
    const auto c = sharp_constants(1, 4.0);
    REQUIRE(c.sup_prefactor);
    const double g13 = std::tgamma(1.0 / 3.0);
    CHECK(*c.sup_prefactor == doctest::Approx(g13 * g13 / (2.0 * std::tgamma(2.0 / 3.0))).epsilon(1e-13));
    CHECK(*c.sup_prefactor == doctest::Approx(2.6497).epsilon(1e-4));
    CHECK_THROWS_AS(ell_integral(1, 2.0), std::domain_error);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(0.01, 5.0), A(0.05, 0.95);
    for (int i = 0; i < 50; ++i) {
        const double a = U(rng), b = U(rng), alpha = A(rng);
        CHECK(std::abs(sup_representation(a, b, alpha) - std::pow(a + b, alpha)) <= 1e-10 * std::pow(a + b, alpha));
    }
}

TEST_CASE("isoperimetric checks on geodesic balls") {
    std::vector<double> rho;
    for (int i = 1; i <= 20; ++i) rho.push_back(0.1 * i);
    for (int n = 1; n <= 3; ++n) {
        const auto m = isoperimetric_model_check(rho, n);
        CHECK(m.pass);
        CHECK(m.worst >= 0.0);
        for (std::size_t k = 0; k < rho.size(); ++k) {
            // Relative margin is cosh(rho)^{2n} - 1.
            CHECK(m.margins[k] / m.rhs[k] == doctest::Approx(std::pow(std::cosh(rho[k]), 2.0 * n) - 1.0).epsilon(1e-10));
        }
        const std::vector<double> tiny{1e-4};
        CHECK(isoperimetric_model_check(tiny, n).worst < 1e-7);
        CHECK(isoperimetric_refined_check(rho, n).pass);
    }
    const std::vector<double> one{1.0};
    const auto r1 = isoperimetric_refined_check(one, 1);
    const double s = std::sinh(1.0);
    CHECK(r1.lhs[0] == doctest::Approx(std::pow(std::sinh(2.0), 2)).epsilon(1e-14));
    CHECK(r1.rhs[0] == doctest::Approx(4.0 * (s * s + std::pow(s, 4))).epsilon(1e-14));
    const std::vector<double> r07{0.7};
    CHECK(isoperimetric_refined_check(r07, 3).worst < 1e-12);
    const std::vector<double> zero{0.0};
    CHECK(isoperimetric_refined_check(zero, 2).lhs[0] == 0.0);
    CHECK(isoperimetric_refined_check(zero, 2).rhs[0] == 0.0);
}

TEST_CASE("Sobolev regimes") {
    CHECK(regime_for(1, 1.0) == SobolevRegime::I);
    CHECK(regime_for(1, 1.5) == SobolevRegime::II);
    CHECK(regime_for(2, 3.0) == SobolevRegime::III);
    CHECK(regime_for(1, 4.0) == SobolevRegime::IV);
    CHECK_FALSE(regime_for(1, 2.0).has_value());
    CHECK(parse_regime("III") == SobolevRegime::III);
    const LevelFunction flat1(Polynomial::constant(1, 1.0), 1.0, 1.0);
    CHECK_THROWS_AS(sobolev_check(flat1, 0.2, 2.0, SobolevRegime::III, kCfg), std::invalid_argument);

    // I: (1 - |z|^2 - 0.2)_+ on the disc.
    const auto r1 = sobolev_check(flat1, 0.2, 1.0, SobolevRegime::I, kCfg);
    CHECK_MESSAGE(r1.pass, "margin=" << r1.margin << " tol=" << r1.tolerance);
    // Radial: |grad u| = 2|z|(1-|z|^2)^{...}; the gradient integral has a closed form.
    const double x = std::sqrt(1.0 / 0.2 - 1.0);
    CHECK(r1.gradient.value == doctest::Approx(4.0 * (std::asinh(x) - x / std::sqrt(1.0 + x * x))).epsilon(1e-8));

    const LevelFunction w1(z1_plus_half(1), 2.0, 1.0);
    const LevelFunction w2(z1_plus_half(2), 2.0, 1.0);
    for (const auto* w : {&flat1, &w1}) {
        const double t0 = holo::level_maximum(*w).value;
        const auto r2 = sobolev_check(*w, 0.05 * t0, 1.5, SobolevRegime::II, kCfg);
        CHECK_MESSAGE(r2.pass, "II margin=" << r2.margin << " tol=" << r2.tolerance);
        const auto r4 = sobolev_check(*w, 0.05 * t0, 4.0, SobolevRegime::IV, kCfg);
        CHECK_MESSAGE(r4.pass, "IV margin=" << r4.margin << " tol=" << r4.tolerance);
        CHECK(r4.sup == doctest::Approx(0.95 * t0));
    }
    const LevelFunction flat2(Polynomial::constant(2, 1.0), 1.0, 1.0);
    for (const auto* w : {&flat2, &w2}) {
        const double t0 = holo::level_maximum(*w).value;
        for (double p : {2.0, 3.0}) {
            const auto r3 = sobolev_check(*w, 0.05 * t0, p, SobolevRegime::III, kCfg);
            CHECK_MESSAGE(r3.pass, "III p=" << p << " margin=" << r3.margin << " tol=" << r3.tolerance);
        }
    }
}

TEST_CASE("weighted Hardy inequality") {
    // Indicator of (0, 1), p = 2, eps = 2: tail mass 1 - x, averaged side int_0^1 (1-x)^2 = 1/3.
    const HardyInput box{[](double x) { return x < 1.0 ? 1.0 : 0.0; }, 0.0, 1.0, std::numeric_limits<double>::infinity(), 0.0, "indicator"};
    const auto b = weighted_hardy_check(box, 2.0, 2.0);
    CHECK(b.pass);
    CHECK(b.lhs == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    CHECK(b.rhs == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

    const HardyInput ex{[](double x) { return std::exp(-x); }, 0.0, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0, "exp"};
    const auto e = weighted_hardy_check(ex, 2.0, 1.5);
    CHECK(e.pass);
    CHECK(e.rhs == doctest::Approx(std::tgamma(0.5) / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(e.lhs == doctest::Approx(16.0 * std::tgamma(2.5) / std::pow(2.0, 2.5)).epsilon(1e-9));

    // Near-extremal power on (1, inf).
    const double p = 2.0, eps = 2.0, delta = 1e-3;
    const double beta = (eps + 1.0) / p + delta;
    const HardyInput probe{[beta](double x) { return std::pow(x, -beta); }, 1.0, std::numeric_limits<double>::infinity(), 1.0, beta, "probe"};
    const auto pr = weighted_hardy_check(probe, p, eps);
    CHECK(pr.pass);
    CHECK(pr.ratio > 0.95);
    CHECK(pr.ratio <= 1.0);
    // Closed forms: lhs = 4 / (2 delta), rhs = (1 + 1/(2 delta)) / (beta - 1)^2.
    CHECK(pr.lhs == doctest::Approx(2.0 / delta).epsilon(1e-7));
    CHECK(pr.rhs == doctest::Approx((1.0 + 1.0 / (2.0 * delta)) / ((beta - 1.0) * (beta - 1.0))).epsilon(1e-7));

    // Head form for eps < p - 1: f = indicator of (0, 1), p = 2, eps = 0.5.
    const auto h = weighted_hardy_check(box, 2.0, 0.5, HardyMode::head);
    CHECK(h.pass);
    // int_0^1 x^{0.5} + int_1^inf x^{-1.5} = 2/3 + 2
    CHECK(h.rhs == doctest::Approx(2.0 / 3.0 + 2.0).epsilon(1e-9));
    CHECK_THROWS_AS(weighted_hardy_check(box, 2.0, 0.5), std::domain_error);
    const HardyInput heavy{[](double x) { return std::pow(x, -1.2); }, 1.0, std::numeric_limits<double>::infinity(), 1.0, 1.2, "heavy"};
    CHECK_THROWS_AS(weighted_hardy_check(heavy, 2.0, 2.0), std::domain_error);
}

TEST_CASE("rearrangement lemma on (0, 1)") {
    const auto id = [](double t) { return t; };
    const auto shifted = [](double x) { return x > 1.0 ? x - 1.0 : 0.0; };
    KalajInput flat{shifted, id, [](double) { return 1.0; }, {1.0}, 2.0};
    const auto r0 = kalaj_lemma_check(flat);
    CHECK(r0.scale == 1.0);
    CHECK(r0.margin == 0.0);
    CHECK(r0.pass);

    KalajInput lin{shifted, id, [](double t) { return 1.5 - t; }, {1.0}, 2.0};
    const auto r1 = kalaj_lemma_check(lin);
    CHECK(r1.pass);
    CHECK(std::abs(r1.normalization_residual) < 1e-9);
    CHECK(r1.normalization == doctest::Approx(1.0).epsilon(1e-12));  // int_0^1 (t^{-1/2} - 1)
    CHECK(r1.margin > 0.0);

    // Phi = x^2 needs alpha > 2 for a finite normalization.
    KalajInput sq{[](double x) { return x * x; }, [](double t) { return t * t; }, [](double t) { return 1.2 - 0.4 * t; }, {}, 4.0};
    const auto r2 = kalaj_lemma_check(sq);
    CHECK(r2.pass);
    CHECK(r2.normalization == doctest::Approx(2.0).epsilon(1e-12));
    sq.alpha = 2.0;
    CHECK_THROWS(kalaj_lemma_check(sq));
}

#include <doctest.h>

#include <cmath>

#include "hypball/integrate.hpp"
#include "hypball/rng.hpp"
#include "hypball/special.hpp"
#include "oracles.hpp"

using namespace hypball;

namespace {

ScalarField field(std::function<double(const BallPoint&)> f, double hint = 1.0) { return {std::move(f), {}, hint}; }

McConfig config(int samples = 4096, int nodes = 64, std::uint64_t seed = 42) { return {seed, samples, nodes}; }

}  // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(config(8).validate(), std::invalid_argument);
    CHECK_THROWS_AS(config(64, 4).validate(), std::invalid_argument);
    CHECK_NOTHROW(config(16, 16).validate());
}

TEST_CASE("sphere integrals") {
    const auto one = integrate::integrate_sphere([](std::span<const Complex>) { return 1.0; }, 3, config());
    CHECK(one.value == 1.0);
    CHECK(one.std_error == 0.0);
    const auto m = integrate::integrate_sphere([](std::span<const Complex> z) { return std::norm(z[0]); }, 2, config(20000));
    CHECK(std::abs(m.value - 0.5) < 3 * m.std_error);
    const auto re = integrate::integrate_sphere([](std::span<const Complex> z) { return z[0].real(); }, 2, config(20000));
    CHECK(std::abs(re.value) < 3 * re.std_error);
}

TEST_CASE("exact sphere monomials") {
    CHECK(integrate::exact_sphere_monomial(MultiIndex({0, 0}), MultiIndex({0, 0}), 2) == 1.0);
    CHECK(integrate::exact_sphere_monomial(MultiIndex({1, 0}), MultiIndex({1, 0}), 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(integrate::exact_sphere_monomial(MultiIndex({1}), MultiIndex({2}), 1) == 0.0);
    // a = (2, 1), n = 3: 2! 1! 2! / 5! = 1/30.
    CHECK(integrate::exact_sphere_monomial(MultiIndex({2, 1, 0}), MultiIndex({2, 1, 0}), 3) ==
          doctest::Approx(4.0 / oracle::fact(5)).epsilon(1e-13));
}

TEST_CASE("exact sphere monomials agree with sampling") {
    const auto gen = rng::make(42, rng::Stream::test_points, 9);
    int failures = 0;
    for (std::uint64_t k = 0; k < 50; ++k) {
        const int n = 1 + static_cast<int>(gen.block(k)[0] % 3);
        std::vector<int> ea(n), eb(n);
        const auto bits = gen.block(k + 1000);
        for (int i = 0; i < n; ++i) {
            ea[i] = static_cast<int>((bits[i % 4] >> (3 * i)) % 3);
            eb[i] = (bits[3] >> i & 1) ? ea[i] : static_cast<int>((bits[i % 4] >> (3 * i + 7)) % 3);
        }
        const MultiIndex a(ea), b(eb);
        const double exact = integrate::exact_sphere_monomial(a, b, n);
        const auto est = integrate::integrate_sphere(
            [&](std::span<const Complex> z) {
                Complex m = 1.0;
                for (int i = 0; i < n; ++i) {
                    for (int e = 0; e < ea[i]; ++e) m *= z[i];
                    for (int e = 0; e < eb[i]; ++e) m *= std::conj(z[i]);
                }
                return m.real();
            },
            n, config(20000, 64, 100 + k));
        if (std::abs(est.value - exact) > 4 * est.std_error + 1e-14) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("ball integrals") {
    const auto one = integrate::integrate_ball(field([](const BallPoint&) { return 1.0; }), 2, config());
    CHECK(std::abs(one.value - 1.0) < 1e-12);
    const auto z1n1 = integrate::integrate_ball(field([](const BallPoint& z) { return std::norm(z[0]); }), 1, config());
    CHECK(z1n1.value == doctest::Approx(0.5).epsilon(1e-12));
    const auto z1n2 = integrate::integrate_ball(field([](const BallPoint& z) { return std::norm(z[0]); }), 2, config(20000));
    CHECK(std::abs(z1n2.value - 1.0 / 3.0) < 3 * z1n2.std_error);
}

TEST_CASE("polar form agrees with rejection sampling") {
    const std::vector<std::function<double(const BallPoint&)>> integrands{
        [](const BallPoint& z) { return std::norm(z[0]) + z[0].real(); },
        [](const BallPoint& z) { return std::exp(-z.norm2()) * (1.0 + z[1].imag()); },
        [](const BallPoint& z) { return std::pow(z.defect(), 1.5); },
    };
    for (const auto& g : integrands) {
        const auto polar = integrate::integrate_ball(field(g), 2, config(20000));
        const auto rej = integrate::integrate_ball_rejection(field(g), 2, config(20000));
        const double tol = 3 * std::hypot(polar.std_error, rej.std_error);
        CHECK(std::abs(polar.value - rej.value) <= tol);
    }
}

TEST_CASE("weighted ball integrals") {
    // c_alpha (1 - |z|^2)^{alpha - n - 1} has unit mass for every alpha > n.
    for (int n = 1; n <= 2; ++n) {
        for (double alpha : {n + 0.01, n + 0.5, n + 3.0}) {
            const auto est =
                integrate::integrate_ball_weighted(field([](const BallPoint&) { return 1.0; }), n, alpha - n - 1, config(64));
            CHECK(est.value * special::c_alpha(alpha, n) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    const auto rule = integrate::sphere_cubature(2, 16);
    double mass = 0.0;
    for (double w : rule.weights) mass += w;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
    const auto cub = integrate::integrate_ball_weighted(field([](const BallPoint& z) { return std::norm(z[0]); }), 2, 0.0,
                                                        32, rule);
    CHECK(cub.value == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("hyperbolic integrals") {
    const double rho = 1.0;
    const auto ind = integrate::integrate_ball_hyperbolic(
        field([rho](const BallPoint& z) { return std::atanh(z.norm()) < rho ? 1.0 : 0.0; }, std::tanh(1.01 * rho)), 1,
        config(200000));
    const double exact = std::pow(oracle::sinh_exp(1.0), 2);
    CHECK(std::abs(ind.value - exact) < 3 * ind.std_error);
    CHECK(ind.std_error / ind.value < 1e-3);

    const auto cancel = integrate::integrate_ball_hyperbolic(field([](const BallPoint& z) { return std::pow(z.defect(), 3); }),
                                                             2, config());
    CHECK(cancel.value == doctest::Approx(1.0).epsilon(1e-12));

    const auto bergman = integrate::integrate_ball_hyperbolic(
        field([](const BallPoint& z) { return special::c_alpha(2.0, 1) * z.defect() * z.defect(); }), 1, config());
    CHECK(std::abs(bergman.value - 1.0) < std::max(3 * bergman.std_error, 1e-12));

    const double vol = std::pow(oracle::sinh_exp(0.5), 4);
    const auto ball2 = integrate::integrate_ball_hyperbolic(
        field([](const BallPoint& z) { return std::atanh(z.norm()) < 0.5 ? 1.0 : 0.0; }, std::tanh(0.505)), 2,
        config(200000));
    CHECK(std::abs(ball2.value - vol) < 1e-3 * vol);
}

TEST_CASE("determinism") {
    const auto g = field([](const BallPoint& z) { return std::norm(z[0]) * std::exp(z[1].real()); });
    const auto a = integrate::integrate_ball(g, 2, config(2048, 32, 7));
    const auto b = integrate::integrate_ball(g, 2, config(2048, 32, 7));
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    const auto c = integrate::integrate_ball(g, 2, config(2048, 32, 8));
    CHECK(a.value != c.value);
}

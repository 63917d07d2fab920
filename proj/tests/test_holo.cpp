#include <doctest.h>

#include <cmath>

#include "hypball/holo.hpp"
#include "hypball/rng.hpp"

using namespace hypball;

namespace {

Polynomial two_plus_z1z2() {
    Polynomial f = Polynomial::constant(2, 2.0);
    f.add_term(MultiIndex({1, 1}), 1.0);
    return f;
}

BallPoint random_point(const rng::Philox& gen, std::uint64_t j, int n, double rmax) {
    CVector dir(static_cast<std::size_t>(n));
    rng::sphere_point(gen, j, dir);
    return BallPoint::radial(dir, rmax * gen.uniform2(j * 64 + 63)[0]);
}

}  // namespace

TEST_CASE("polynomial evaluation") {
    const Polynomial one = Polynomial::constant(2, 1.0);
    CHECK(one(BallPoint(CVector{{0.3, 0.1}, {0.2, -0.4}})) == Complex(1.0));
    const Polynomial z1 = Polynomial::coordinate(2, 0);
    CHECK(holo::evaluate(z1, BallPoint(CVector{0.3, {0.0, 0.4}})) == Complex(0.3));
    CHECK(holo::evaluate(two_plus_z1z2(), BallPoint(CVector{0.5, 0.5})) == Complex(2.25));
    CHECK_THROWS_AS(z1(BallPoint(CVector{0.1})), std::invalid_argument);
    CHECK_THROWS_AS(MultiIndex({1, -1}), std::invalid_argument);
}

TEST_CASE("complex partials") {
    Polynomial sq(1);
    sq.add_term(MultiIndex({2}), 1.0);
    const auto d = holo::complex_partials(sq);
    REQUIRE(d.size() == 1);
    Polynomial expect(1);
    expect.add_term(MultiIndex({1}), 2.0);
    CHECK(d[0] == expect);

    for (const auto& p : holo::complex_partials(Polynomial::constant(3, 4.0))) CHECK(p.is_zero());

    Polynomial prod(2);
    prod.add_term(MultiIndex({1, 1}), 1.0);
    const auto dp = holo::complex_partials(prod);
    CHECK(dp[0] == Polynomial::coordinate(2, 1));
    CHECK(dp[1] == Polynomial::coordinate(2, 0));
}

TEST_CASE("polynomial algebra") {
    const Polynomial f = two_plus_z1z2();
    const Polynomial g = f * f;
    const BallPoint z(CVector{{0.2, 0.1}, {-0.3, 0.4}});
    CHECK(std::abs(g(z) - f(z) * f(z)) < 1e-15);
    const Polynomial d = f.dilated(0.5);
    const BallPoint half(CVector{{0.1, 0.05}, {-0.15, 0.2}});
    CHECK(std::abs(d(z) - f(half)) < 1e-15);
    CHECK(f.degree() == 2);
    CHECK(f.coefficient_l1() == doctest::Approx(3.0));
}

TEST_CASE("polynomial json round trip") {
    Polynomial f(2);
    f.add_term(MultiIndex({0, 0}), {0.1, -1.0 / 3.0});
    f.add_term(MultiIndex({3, 1}), {std::sqrt(2.0), 1e-17});
    const Polynomial back = holo::polynomial_from_json(holo::polynomial_to_json(f));
    CHECK(back == f);
    CHECK_THROWS(holo::polynomial_from_json(R"({"n": 2, "terms": [{"exponents": [1], "re": 1}]})"));
}

TEST_CASE("level function values") {
    const LevelFunction u(Polynomial::coordinate(1, 0), 2.0, 1.0);
    CHECK(u(BallPoint(CVector{0.6})) == doctest::Approx(0.2304).epsilon(1e-14));
    const LevelFunction one(Polynomial::constant(2, 1.0), 2.0, 1.0);
    CVector dir{std::sqrt(0.5), {0.0, std::sqrt(0.5)}};
    CHECK(one(BallPoint::radial(dir, 1.0 - 1e-4)) < 2.1e-4);
    CHECK_THROWS_AS(LevelFunction(Polynomial::constant(1, 1.0), 0.0, 1.0), std::domain_error);

    // f = 1, a = 2, b = 1: |grad u| = 2|z|(1 - |z|^2).
    CHECK(LevelFunction(Polynomial::constant(1, 1.0), 2.0, 1.0).gradient_norm(BallPoint(CVector{0.5})) ==
          doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("analytic gradient matches finite differences") {
    const auto family = holo::test_family({"random_poly", 2, 3, 3, 0.5, 7});
    const auto gen = rng::make(42, rng::Stream::test_points, 2);
    for (std::size_t m = 0; m < family.size(); ++m) {
        const LevelFunction u(family[m], 2.0, 1.5);
        const ScalarField plain{[&u](const BallPoint& z) { return u(z); }, {}, 1.0};
        for (std::uint64_t j = 0; j < 1000; ++j) {
            const BallPoint z = random_point(gen, j + 5000 * m, 2, 0.9);
            if (std::abs(u.poly()(z)) < 1e-2) continue;
            const CVector a = u.complex_gradient(z);
            const CVector fd = geometry::finite_difference_gradient(plain, z);
            double num = 0.0;
            double den = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                num += std::norm(a[i] - fd[i]);
                den += std::norm(a[i]);
            }
            CHECK(std::sqrt(num) <= 1e-5 * std::sqrt(den) + 1e-12);
        }
    }
}

TEST_CASE("zero fallback gives a finite gradient") {
    const LevelFunction u(Polynomial::coordinate(1, 0), 2.0, 1.0);
    const CVector g = u.complex_gradient(BallPoint(CVector{0.0}));
    CHECK(std::abs(g[0]) < 1e-6);
}

TEST_CASE("ray restriction agrees with the level function") {
    const auto family = holo::test_family({"random_poly", 2, 2, 2, 0.5, 11});
    CVector zeta{std::polar(0.6, 0.4), std::polar(0.8, -1.1)};
    for (const auto& f : family) {
        const LevelFunction u(f, 2.0, 2.5);
        const auto ray = u.ray(zeta);
        for (double rho : {0.0, 0.3, 1.2, 3.0}) {
            const BallPoint z = BallPoint::radial(zeta, std::tanh(rho));
            CHECK(ray.value(rho) == doctest::Approx(u(z)).epsilon(1e-12));
            const double h = 1e-5;
            const double fd = (ray.value(rho + h) - ray.value(rho - h)) / (2 * h);
            if (rho > 0.0) CHECK(ray.derivative(rho) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("test families") {
    const auto c = holo::test_family({"constants", 3});
    REQUIRE(c.size() == 1);
    CHECK(c[0] == Polynomial::constant(3, 1.0));
    const auto co = holo::test_family({"coordinates", 2});
    REQUIRE(co.size() == 2);
    CHECK(co[0] == Polynomial::coordinate(2, 0));
    CHECK(co[1] == Polynomial::coordinate(2, 1));
    const holo::FamilySpec spec{"random_poly", 2, 3, 4, 0.5, 42};
    const auto a = holo::test_family(spec);
    const auto b = holo::test_family(spec);
    CHECK(a == b);
    for (const auto& f : a) {
        CHECK(f.terms().size() == 10);
        for (const auto& [idx, coef] : f.terms()) CHECK(std::abs(coef) < 1.0);
    }
    const auto d = holo::test_family({"dilates", 2, 3, 4, 0.5, 42});
    CHECK(d[1] == a[1].dilated(0.5));
    CHECK_THROWS_AS(holo::test_family({"bogus", 1}), std::invalid_argument);
}

TEST_CASE("level maximum") {
    const auto m1 = holo::level_maximum(LevelFunction(Polynomial::constant(2, 1.0), 2.0, 1.0));
    CHECK(m1.value == doctest::Approx(1.0).epsilon(1e-12));
    // |z|^2 (1 - |z|^2) peaks at 1/4.
    const auto m2 = holo::level_maximum(LevelFunction(Polynomial::coordinate(1, 0), 2.0, 1.0));
    CHECK(m2.value == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("log u has constant invariant Laplacian") {
    const auto gen = rng::make(42, rng::Stream::test_points, 3);
    for (int n = 1; n <= 2; ++n) {
        const auto family = holo::test_family({"random_poly", n, 3, 3, 0.5, 99});
        for (std::size_t m = 0; m < family.size(); ++m) {
            const double b = 1.0 + 0.5 * m;
            const LevelFunction u(family[m], 1.7, b);
            const ScalarField logu{[&u](const BallPoint& z) { return std::log(u(z)); }, {}, 1.0};
            for (std::uint64_t j = 0; j < 100; ++j) {
                const BallPoint z = random_point(gen, j + 1000 * m + 100000 * n, n, 0.95);
                if (std::abs(u.poly()(z)) < 1e-2) continue;
                CHECK(std::abs(geometry::invariant_laplacian(logu, z) + 4.0 * n * b) < 1e-4);
            }
        }
    }
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypball/quadrature.hpp"
#include "hypball/special.hpp"
#include "oracles.hpp"

using namespace hypball;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    const auto rule = quad::gauss_legendre(10, 0.0, 2.0);
    // Degree 19 monomial: exact up to rounding.
    CHECK(rule.apply([](double x) { return std::pow(x, 19); }) == doctest::Approx(std::pow(2.0, 20) / 20).epsilon(1e-13));
    double sum = 0.0;
    for (double w : quad::gauss_legendre(64).weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("Gauss-Jacobi moments") {
    for (double a : {-0.99, -0.5, 0.0, 1.5}) {
        for (double b : {0.0, 1.0, 2.0}) {
            const auto rule = quad::gauss_jacobi01(20, a, b);
            double mass = 0.0;
            for (double w : rule.weights) mass += w;
            CHECK(mass == doctest::Approx(special::beta(a + 1, b + 1)).epsilon(1e-12));
            // First moment: B(a + 1, b + 2).
            CHECK(rule.apply([](double x) { return x; }) == doctest::Approx(special::beta(a + 1, b + 2)).epsilon(1e-12));
        }
    }
}

TEST_CASE("adaptive integrators") {
    const auto r = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
    const auto t = quad::integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0);
    CHECK(t.value == doctest::Approx(1.0).epsilon(1e-12));
    const auto t2 = quad::integrate_to_infinity([](double x) { return 1.0 / (x * x); }, 2.0);
    CHECK(t2.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("special functions") {
    CHECK(special::beta(1, 1) == 1.0);
    CHECK(special::beta(2, 3) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK_THROWS_AS(special::beta(0.0, 1.0), std::domain_error);
    CHECK(special::euclidean_ball_volume(2) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2).epsilon(1e-14));
    CHECK(special::euclidean_sphere_area(1) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-14));
    for (int n = 1; n <= 3; ++n) {
        for (double alpha = n + 0.05; alpha <= n + 10.0; alpha += 0.37) {
            CHECK(special::k_alpha(alpha, n) == doctest::Approx(alpha * special::c_alpha(alpha, n)).epsilon(1e-12));
        }
    }
    // c_2 = 1 for n = 1.
    CHECK(special::c_alpha(2.0, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("monotone cubic interpolation") {
    std::vector<double> x{0, 1, 2, 3, 4};
    std::vector<double> y{10, 8, 8, 3, 0};
    const quad::Pchip p(x, y);
    for (double s = 0.0; s < 4.0; s += 0.01) {
        CHECK(p.derivative(s) <= 1e-12);
        CHECK(p(s) <= 10.0 + 1e-12);
    }
    CHECK(p(2.0) == doctest::Approx(8.0));
    // Reproduces a straight line.
    const quad::Pchip line({0, 1, 3}, {1, 3, 7});
    CHECK(line(2.2) == doctest::Approx(5.4));
    CHECK(line.derivative(0.7) == doctest::Approx(2.0));
}

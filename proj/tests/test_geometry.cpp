#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hypball/geometry.hpp"
#include "hypball/rng.hpp"
#include "oracles.hpp"

using namespace hypball;

namespace {

// rho is not differentiable at the origin, so radii stay in [0.1, 0.95].
BallPoint random_point(const rng::Philox& gen, std::uint64_t j, int n) {
    CVector dir(static_cast<std::size_t>(n));
    rng::sphere_point(gen, j, dir);
    const double r = 0.1 + 0.85 * gen.uniform2(j * 64 + 63)[0];
    return BallPoint::radial(dir, r);
}

ScalarField rho_field() {
    return {[](const BallPoint& z) { return std::atanh(z.norm()); }, {}, 1.0};
}

}  // namespace

TEST_CASE("geodesic radius") {
    CHECK(geometry::geodesic_radius(BallPoint::origin(3)).rho == 0.0);
    const CVector z1{std::tanh(1.0)};
    CHECK(geometry::geodesic_radius(BallPoint(z1)).rho == doctest::Approx(1.0).epsilon(1e-14));
    const CVector z2{{0.0, 0.5}};
    CHECK(geometry::geodesic_radius(BallPoint(z2)).rho == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(BallPoint(CVector{1.0}), std::domain_error);
    CHECK_THROWS_AS(BallPoint(CVector{{0.8, 0.6}}), std::domain_error);
    CHECK_THROWS_AS(geometry::geodesic_radius_of(1.0), std::domain_error);
}

TEST_CASE("geodesic ball volume and sphere area") {
    CHECK(geometry::geodesic_ball_volume({0.0}, 2) == 0.0);
    CHECK(geometry::geodesic_ball_volume({1.0}, 1) == doctest::Approx(std::pow(oracle::sinh_exp(1.0), 2)).epsilon(1e-13));
    CHECK(geometry::geodesic_ball_volume({1.0}, 1) == doctest::Approx(1.381098).epsilon(1e-6));
    CHECK(geometry::geodesic_ball_volume({0.5}, 2) == doctest::Approx(std::pow(oracle::sinh_exp(0.5), 4)).epsilon(1e-13));
    CHECK(geometry::geodesic_ball_volume({0.5}, 2) == doctest::Approx(0.0737341).epsilon(1e-6));
    CHECK(geometry::geodesic_sphere_area({1.0}, 1) == doctest::Approx(oracle::sinh_exp(2.0)).epsilon(1e-13));
    const double area2 = 4.0 * std::pow(oracle::sinh_exp(0.5), 3) * oracle::cosh_exp(0.5);
    CHECK(geometry::geodesic_sphere_area({0.5}, 2) == doctest::Approx(area2).epsilon(1e-13));
    CHECK(geometry::geodesic_sphere_area({0.5}, 2) == doctest::Approx(0.638229).epsilon(1e-6));
    CHECK_THROWS_AS(geometry::geodesic_sphere_area({0.0}, 1), std::domain_error);
    CHECK_THROWS_AS(geometry::geodesic_ball_volume({400.0}, 2), std::overflow_error);
    CHECK(std::isfinite(geometry::log_geodesic_ball_volume({400.0}, 2)));

    const double h = 1e-5;
    for (int n = 1; n <= 3; ++n) {
        for (double rho : {0.1, 0.7, 1.5, 3.0}) {
            const double fd = (geometry::geodesic_ball_volume({rho + h}, n) - geometry::geodesic_ball_volume({rho - h}, n)) /
                              (2 * h);
            CHECK(geometry::geodesic_sphere_area({rho}, n) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("log-space branch is continuous") {
    for (int n = 1; n <= 3; ++n) {
        const double below = geometry::log_geodesic_ball_volume({300.0 - 1e-9}, n);
        const double above = geometry::log_geodesic_ball_volume({300.0 + 1e-9}, n);
        // d/drho of 2n log sinh is 2n coth = 2n here.
        CHECK(std::abs(above - below - 2.0 * n * 2e-9) < 1e-10);
    }
}

TEST_CASE("geodesic-ball perimeter identity") {
    for (int n = 1; n <= 3; ++n) {
        for (int i = 1; i <= 50; ++i) {
            const double rho = 0.05 * i;
            const double v = geometry::geodesic_ball_volume({rho}, n);
            const double per = geometry::geodesic_sphere_area({rho}, n);
            const double rhs = 4.0 * n * n * (std::pow(v, (2.0 * n - 1.0) / n) + v * v);
            CHECK(std::abs(per * per - rhs) <= 1e-12 * rhs);
        }
    }
}

TEST_CASE("monotonicity of radius and volume") {
    double prev_r = -1.0;
    double prev_v = -1.0;
    for (int i = 0; i < 200; ++i) {
        const double r = 0.00499 * i;
        const double rho = geometry::geodesic_radius_of(r);
        CHECK(rho > prev_r);
        prev_r = rho;
        const double v = geometry::geodesic_ball_volume({rho}, 2);
        CHECK(v > prev_v);
        prev_v = v;
    }
}

TEST_CASE("radius_of_volume inverts the volume") {
    for (int n = 1; n <= 3; ++n) {
        for (double r : {0.1, 0.5, 0.9, 0.99}) {
            const double s = geometry::geodesic_ball_volume({std::atanh(r)}, n);
            CHECK(geometry::radius_of_volume(s, n) == doctest::Approx(r).epsilon(1e-12));
        }
    }
}

TEST_CASE("gradient norm calibration") {
    const auto gen = rng::make(42, rng::Stream::test_points, 1);
    for (int n = 1; n <= 3; ++n) {
        double worst = 0.0;
        for (std::uint64_t j = 0; j < 1000; ++j) {
            BallPoint z = random_point(gen, j + 1000 * n, n);
            worst = std::max(worst, std::abs(geometry::bergman_gradient_norm(rho_field(), z) - 1.0));
        }
        CHECK(worst < 1e-5);
    }
    const ScalarField constant{[](const BallPoint&) { return 3.0; }, {}, 1.0};
    CHECK(geometry::bergman_gradient_norm(constant, BallPoint(CVector{0.3})) == 0.0);

    // u = 1 - |z|^2 with du/dz = -conj(z): 4 (1 - |z|^2)(|z|^2 - |z|^4) = (2|z|(1 - |z|^2))^2.
    const ScalarField quad{[](const BallPoint& z) { return 1.0 - z.norm2(); },
                           [](const BallPoint& z) { return CVector{-std::conj(z[0])}; }, 1.0};
    const BallPoint half(CVector{std::polar(0.5, 0.3)});
    CHECK(geometry::bergman_gradient_norm(quad, half) == doctest::Approx(0.75).epsilon(1e-14));
    const ScalarField quad_fd{quad.eval, {}, 1.0};
    CHECK(geometry::bergman_gradient_norm(quad_fd, half) == doctest::Approx(0.75).epsilon(1e-8));
}

TEST_CASE("invariant Laplacian") {
    const ScalarField logdefect{[](const BallPoint& z) { return std::log(z.defect()); }, {}, 1.0};
    CHECK(std::abs(geometry::invariant_laplacian(logdefect, BallPoint(CVector{0.3})) + 4.0) < 1e-5);

    const ScalarField two{[](const BallPoint& z) {
                              return std::log(std::pow(std::abs(z[0] + 2.0), 2.0) * z.defect());
                          },
                          {}, 1.0};
    const BallPoint p(CVector{{0.1, 0.0}, {0.0, 0.2}});
    CHECK(std::abs(geometry::invariant_laplacian(two, p) + 8.0) < 1e-4);

    const ScalarField constant{[](const BallPoint&) { return 1.5; }, {}, 1.0};
    CHECK(std::abs(geometry::invariant_laplacian(constant, p)) < 1e-8);

    const ScalarField singular{[](const BallPoint& z) { return std::log(std::abs(z[0])); }, {}, 1.0};
    CHECK_THROWS_AS(geometry::invariant_laplacian(singular, BallPoint(CVector{0.0})), std::domain_error);
}

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "chball/quadrature.hpp"

using namespace chball;
using Catch::Approx;

TEST_CASE("integrate_1d closed forms") {
    CHECK(integrate_1d([](double) { return 1.0; }, 0.0, 1.0, 1e-12).value ==
          Approx(1.0).epsilon(1e-14));
    CHECK(integrate_1d([](double t) { return std::sin(t); }, 0.0, kPi, 1e-13).value ==
          Approx(2.0).epsilon(1e-12));
    CHECK(integrate_1d([](double t) { return std::exp(-t); }, 0.0, 30.0, 1e-12).value ==
          Approx(1.0).epsilon(1e-10));
}

TEST_CASE("integrate_1d endpoint singularities") {
    // int_0^X (X-s)^{-1/2} s^{-1/2} ds / 2 = pi/2 for any X
    for (double X : {0.5, 2.0, 13.0}) {
        auto f = [X](double s) { return 0.5 / std::sqrt((X - s) * s); };
        const QuadResult q =
            integrate_1d(f, 0.0, X, 1e-11, EndpointSingularity::inv_sqrt_both);
        CHECK(q.value == Approx(kPi / 2.0).epsilon(1e-10));
    }
    CHECK(integrate_1d([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12,
                       EndpointSingularity::inv_sqrt_left)
              .value == Approx(2.0).epsilon(1e-12));
    CHECK(integrate_1d([](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0.0, 1.0, 1e-12,
                       EndpointSingularity::inv_sqrt_right)
              .value == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("est_error bounds the true error on the closed-form suite") {
    struct Case {
        std::function<double(double)> f;
        double a, b, truth;
        EndpointSingularity sing;
    };
    const std::vector<Case> cases = {
        {[](double t) { return std::sin(t); }, 0.0, kPi, 2.0, EndpointSingularity::none},
        {[](double t) { return t * t * t - 2.0 * t; }, -1.0, 2.0, 0.75,
         EndpointSingularity::none},
        {[](double t) { return std::exp(t); }, 0.0, 2.0, std::exp(2.0) - 1.0,
         EndpointSingularity::none},
        {[](double t) { return 1.0 / std::sqrt(t); }, 0.0, 4.0, 4.0,
         EndpointSingularity::inv_sqrt_left},
        {[](double t) { return std::cos(10.0 * t); }, 0.0, 3.0, std::sin(30.0) / 10.0,
         EndpointSingularity::none},
    };
    for (const Case& c : cases) {
        const QuadResult q = integrate_1d(c.f, c.a, c.b, 1e-10, c.sing);
        CHECK(std::abs(q.value - c.truth) <= q.est_error + 1e-15);
    }
}

TEST_CASE("doubling the subdivision budget does not increase est_error") {
    auto f = [](double t) { return std::cos(3.0 * t) * std::exp(-t); };
    double prev = 1e300;
    for (int budget : {2, 4, 8, 16, 32}) {
        const QuadResult q = integrate_1d(f, 0.0, 5.0, 1e-16, EndpointSingularity::none, budget);
        CHECK(q.est_error <= prev + 1e-16);  // slack for the rounding floor
        prev = q.est_error;
    }
}

TEST_CASE("gauss_legendre is exact on polynomials of degree 2m-1") {
    for (int m : {4, 9, 16}) {
        // int_0^1 t^{2m-1} dt = 1/(2m)
        double acc = 0.0;
        for (auto [t, w] : gauss_legendre_ab(m, 0.0, 1.0)) acc += w * std::pow(t, 2 * m - 1);
        CHECK(acc == Approx(1.0 / (2.0 * m)).epsilon(1e-13));
    }
}

TEST_CASE("integrate_ball reproduces the closed-form volume") {
    for (int n : {1, 2}) {
        for (double T : {0.5, 1.0, 2.0}) {
            const QuadResult q = integrate_ball([](const BallPoint&) { return 1.0; },
                                                BallPoint::origin(n), T, n, 1e-10);
            CHECK(q.value == Approx(volume_ball(n, T)).epsilon(1e-6));
        }
    }
    // n = 3 product rule and n = 4 Monte Carlo direction sampling: constant
    // integrands are radially exact
    const QuadResult q3 = integrate_ball([](const BallPoint&) { return 1.0; },
                                         BallPoint::origin(3), 1.0, 3, 1e-8,
                                         BallQuadOptions{1, 24, 12345});
    CHECK(q3.value == Approx(volume_ball(3, 1.0)).epsilon(1e-8));
    const QuadResult q4 = integrate_ball([](const BallPoint&) { return 1.0; },
                                         BallPoint::origin(4), 1.0, 4, 1e-8,
                                         BallQuadOptions{1, 24, 12345});
    CHECK(q4.value == Approx(volume_ball(4, 1.0)).epsilon(1e-8));
}

TEST_CASE("integrate_ball matches a radial oracle and is translation invariant") {
    const int n = 1;
    auto radial = [](double d) { return 1.0 / (1.0 + d * d); };

    // 1-d polar oracle: 2 pi int f(r) sinh r cosh r dr
    double oracle = 0.0;
    for (auto [r, w] : gauss_legendre_ab(200, 0.0, 1.5))
        oracle += w * radial(r) * std::sinh(r) * std::cosh(r);
    oracle *= 2.0 * kPi;

    const BallPoint c0 = BallPoint::origin(n);
    const QuadResult q0 = integrate_ball(
        [&](const BallPoint& x) { return radial(distance(x, BallPoint::origin(1))); }, c0,
        1.5, n, 1e-9);
    CHECK(q0.value == Approx(oracle).epsilon(1e-8));

    // move the whole configuration by random isometries: the integral is unchanged
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> U(-0.55, 0.55), Uphi(0.0, 2.0 * kPi);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXcd rot = Eigen::MatrixXcd::Identity(1, 1);
        rot(0, 0) = std::polar(1.0, Uphi(rng));
        const Isometry g =
            transvection_to(BallPoint({cxd(U(rng), U(rng))})) * unitary_isometry(rot);
        const BallPoint p = apply_isometry(g, BallPoint::origin(1));
        const QuadResult q1 = integrate_ball(
            [&](const BallPoint& x) { return radial(distance(x, p)); }, p, 1.5, n, 1e-9);
        CHECK(q1.value == Approx(q0.value).epsilon(1e-7));
    }
}

TEST_CASE("integrate_1d input validation") {
    CHECK_THROWS_AS(integrate_1d([](double) { return 0.0; }, 1.0, 1.0, 1e-8),
                    std::invalid_argument);
    // non-integrable interior singularity exhausts the subdivision budget
    CHECK_THROWS_AS(integrate_1d([](double t) { return 1.0 / std::abs(t - 1.0 / kPi); },
                                 0.0, 1.0, 1e-10, EndpointSingularity::none, 50),
                    std::runtime_error);
}

#include <doctest.h>

#include <cmath>

#include "indiff/utility.hpp"

using namespace indiff;

TEST_CASE("exponential closed forms") {
    Utility u = Utility::exponential(1.0);
    CHECK(u.u(0.0) == doctest::Approx(-1.0));
    CHECK(u.u(2.0) == doctest::Approx(-std::exp(-2.0)));
    CHECK(u.beta() == doctest::Approx(1.0));
    CHECK(u.u_infinity() == ExtReal(0.0));

    // Phi(1) = 1 ln 1 - 1 = -1
    CHECK(u.conjugate(1.0).value() == doctest::Approx(-1.0));
    // Phi(0) = u(+inf) = 0 as the limit of y ln y - y
    CHECK(u.conjugate(0.0) == ExtReal(0.0));
    // Phi(beta) = u(0)
    CHECK(u.phi(u.beta()) == doctest::Approx(u.u_zero()));

    Utility u2 = Utility::exponential(2.0);
    CHECK(u2.beta() == doctest::Approx(2.0));
    CHECK(u2.phi(2.0) == doctest::Approx(-1.0));  // (y/g)ln(y/g)-y/g at y=g
}

TEST_CASE("numeric conjugate of a custom utility matches the closed form") {
    Utility ref = Utility::exponential(1.0);
    Utility cu = Utility::custom([](double x) { return -std::exp(-x); });
    Utility cud = Utility::custom([](double x) { return -std::exp(-x); },
                                  [](double x) { return std::exp(-x); });
    for (double y : {0.25, 0.5, 1.0, 2.0, 7.0}) {
        CHECK(cu.conjugate(y).value() ==
              doctest::Approx(ref.phi(y)).epsilon(1e-8));
        CHECK(cud.conjugate(y).value() ==
              doctest::Approx(ref.phi(y)).epsilon(1e-10));
        CHECK(cud.phi_prime(y) == doctest::Approx(ref.phi_prime(y)).epsilon(1e-7));
    }
    CHECK(cu.beta() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(cu.u_infinity().is_finite());
}

TEST_CASE("Fenchel inequality and equality at the maximizer") {
    for (double gamma : {0.5, 1.0, 2.0}) {
        Utility u = Utility::exponential(gamma);
        for (double x = -3.0; x <= 3.0; x += 0.37) {
            for (double y : {0.1, 0.5, 1.0, 3.0, 10.0}) {
                CHECK(u.phi(y) >= u.u(x) - x * y - 1e-12);
            }
        }
        // u(-Phi'(y)) - (-Phi'(y)) y = Phi(y)
        for (double y : {0.05, 0.3, 1.0, 4.0, 20.0}) {
            double xs = -u.phi_prime(y);
            CHECK(u.u(xs) - xs * y == doctest::Approx(u.phi(y)).epsilon(1e-9));
        }
    }
}

TEST_CASE("utility is nondecreasing and concave on a sampled grid") {
    Utility u = Utility::exponential(1.3);
    double prev = u.u(-5.0);
    double prev_slope = 1e300;
    for (double x = -4.9; x <= 5.0; x += 0.1) {
        double v = u.u(x);
        double slope = (v - prev) / 0.1;
        CHECK(v >= prev - 1e-15);
        CHECK(slope <= prev_slope + 1e-12);
        prev = v;
        prev_slope = slope;
    }
}

TEST_CASE("Phi grows superlinearly on a geometric grid") {
    Utility u = Utility::exponential(1.0);
    double prev_ratio = -1e300;
    for (double y = 8.0; y <= 8192.0; y *= 2.0) {
        double ratio = u.phi(y) / y;
        CHECK(ratio > prev_ratio);
        prev_ratio = ratio;
    }
    CHECK(prev_ratio > 1.0);
}

TEST_CASE("Young pair: u_hat properties and the complementary function") {
    Utility u = Utility::exponential(1.0);
    YoungPair yp(u);

    CHECK(yp.u_hat(0.0) == doctest::Approx(0.0));
    for (double x : {0.3, 1.0, 2.5}) {
        CHECK(yp.u_hat(x) == doctest::Approx(yp.u_hat(-x)));          // even
        CHECK(yp.u_hat(x) == doctest::Approx(std::exp(x) - 1.0));     // closed form
    }
    // convex and nondecreasing on the positive axis
    double prev = yp.u_hat(0.0), prev_slope = -1e300;
    for (double x = 0.1; x <= 4.0; x += 0.1) {
        double v = yp.u_hat(x);
        double slope = (v - prev) / 0.1;
        CHECK(v >= prev);
        CHECK(slope >= prev_slope - 1e-12);
        prev = v;
        prev_slope = slope;
    }

    // phi_hat vanishes exactly on [-beta, beta] and is Phi(|y|) - Phi(beta)
    // beyond
    double beta = yp.beta();
    CHECK(yp.phi_hat(beta * (1.0 - 1e-6)) == 0.0);
    CHECK(yp.phi_hat(-beta * (1.0 - 1e-6)) == 0.0);
    CHECK(yp.phi_hat(beta) == 0.0);
    CHECK(yp.phi_hat(beta * (1.0 + 1e-6)) > 0.0);
    CHECK(yp.phi_hat(3.0) == doctest::Approx(u.phi(3.0) - u.phi(beta)));

    // Young inequality |x y| <= u_hat(x) + phi_hat(y)
    for (double x = -3.0; x <= 3.0; x += 0.61)
        for (double y = -5.0; y <= 5.0; y += 0.77)
            CHECK(std::fabs(x * y) <= yp.u_hat(x) + yp.phi_hat(y) + 1e-12);
}

TEST_CASE("conjugate rejects negative arguments") {
    Utility u = Utility::exponential(1.0);
    CHECK_THROWS_AS(u.conjugate(-0.5), std::domain_error);
}

#include <doctest.h>

#include <cmath>

#include "indiff/dual.hpp"
#include "indiff/oracle.hpp"
#include "indiff/primal.hpp"

using namespace indiff;

namespace {

// 2-state market with closed-form optimum:
//   maximize p1 u(x + h a - B1) + p2 u(x - h b - B2)
// for exponential u the stationary point solves
//   p1 a e^{-g(ha - B1)} = p2 b e^{-g(-hb - B2)}.
struct TwoState {
    double p1, a, b, gamma;
    double closed_form_h(double B1, double B2) const {
        double p2 = 1.0 - p1;
        return (std::log(p1 * a / (p2 * b)) + gamma * (B1 - B2)) /
               (gamma * (a + b));
    }
    double value(double h, double x, double B1, double B2) const {
        double p2 = 1.0 - p1;
        return -p1 * std::exp(-gamma * (x + h * a - B1)) -
               p2 * std::exp(-gamma * (x - h * b - B2));
    }
};

}  // namespace

TEST_CASE("grid primal approaches the closed-form two-state value") {
    TwoState ts{0.6, 1.0, 0.8, 1.0};
    Vector p(2);
    p << ts.p1, 1.0 - ts.p1;
    Matrix dS(2, 1);
    dS << ts.a, -ts.b;
    FiniteMarket m(p, dS);
    Utility u = Utility::exponential(ts.gamma);
    Vector B(2);
    B << 0.3, -0.1;

    double h_star = ts.closed_form_h(B[0], B[1]);
    double v_star = ts.value(h_star, 0.0, B[0], B[1]);

    oracle::GridSpec spec;
    spec.refine_rounds = 8;
    double grid = oracle::grid_primal(m, u, B, 0.0, spec);
    CHECK(std::fabs(grid - v_star) <= 1e-9);
    CHECK(grid <= v_star + 1e-12);  // a grid max cannot beat the true sup

    // each refinement round shrinks the error
    double prev_err = 1e300;
    for (int rounds = 1; rounds <= 5; ++rounds) {
        oracle::GridSpec s;
        s.refine_rounds = rounds;
        double err = std::fabs(oracle::grid_primal(m, u, B, 0.0, s) - v_star);
        CHECK(err <= prev_err * 0.5 + 1e-14);
        prev_err = err;
    }

    // agreement with the solver
    CHECK(std::fabs(maximize(m, u, B, 0.0).value - grid) <= 1e-4);
}

TEST_CASE("grid primal finds the replicating strategy region") {
    Vector p(2);
    p << 0.5, 0.5;
    Matrix dS(2, 1);
    dS << 1.0, -1.0;
    FiniteMarket m(p, dS);
    Utility u = Utility::exponential(1.0);
    Vector B = 0.6 * dS.col(0);
    // replicable claim: optimum value equals the zero-claim value
    double v0 = oracle::grid_primal(m, u, Vector::Zero(2), 0.0);
    double vb = oracle::grid_primal(m, u, B, 0.0);
    CHECK(std::fabs(v0 - vb) <= 1e-8);
}

TEST_CASE("grid dual: unique-measure market reduces to the lambda grid") {
    Vector p(2);
    p << 0.5, 0.5;
    Matrix dS(2, 1);
    dS << 1.0, -1.0;
    FiniteMarket m(p, dS);
    Utility u = Utility::exponential(1.0);
    Vector B = Vector::Zero(2);

    auto gd = oracle::grid_dual(m, u, B, 0.0);
    auto ds = minimize_dual(m, u, B, 0.0);
    CHECK(std::fabs(gd.min_value - ds.value) <= 1e-3);
    CHECK(gd.min_value >= ds.value - 1e-12);  // grid min is an upper bound
    CHECK(gd.weak_duality_margin >= -1e-9);
}

TEST_CASE("grid dual on a one-parameter polytope") {
    Vector p(3);
    p << 0.5, 0.3, 0.2;
    Matrix dS(3, 1);
    dS << 1.0, 0.0, -1.0;
    FiniteMarket m(p, dS);
    Utility u = Utility::exponential(1.0);
    Vector B(3);
    B << 0.7, -0.2, 0.1;

    auto gd = oracle::grid_dual(m, u, B, 0.0);
    auto ds = minimize_dual(m, u, B, 0.0);
    auto ps = maximize(m, u, B, 0.0);
    CHECK(std::fabs(gd.min_value - ds.value) <= 1e-3);
    CHECK(gd.weak_duality_margin >= -1e-9);
    CHECK(std::fabs(gd.max_primal_on_grid - ps.value) <= 1e-4);
}

TEST_CASE("oracle preconditions") {
    Vector p(3);
    p << 0.4, 0.3, 0.3;
    Matrix dS(3, 3);
    dS.setZero();
    dS(0, 0) = 1.0;
    dS(1, 0) = -1.0;
    FiniteMarket m(p, dS);
    CHECK_THROWS(oracle::grid_primal(m, Utility::exponential(1.0),
                                     Vector::Zero(3), 0.0));
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "indiff/indifference.hpp"
#include "indiff/primal.hpp"
#include "indiff/testkit.hpp"

using namespace indiff;

namespace {

FiniteMarket three_state() {
    Vector p(3);
    p << 0.5, 0.3, 0.2;
    Matrix dS(3, 1);
    dS << 1.0, 0.0, -1.0;
    return FiniteMarket(p, dS);
}

FiniteMarket complete2() {
    Vector p(2);
    p << 0.5, 0.5;
    Matrix dS(2, 1);
    dS << 1.0, -1.0;
    return FiniteMarket(p, dS);
}

}  // namespace

TEST_CASE("price: zero, constant and replicable claims") {
    FiniteMarket m = three_state();
    Utility u = Utility::exponential(1.0);

    CHECK(price(m, u, Vector::Zero(3), 0.0) == doctest::Approx(0.0).epsilon(1e-10));
    for (double c : {-4.0, 0.25, 6.0})
        CHECK(price(m, u, Vector::Constant(3, c), 0.5) ==
              doctest::Approx(c).epsilon(1e-9));

    Vector B = Vector::Constant(3, 2.0) + 0.7 * m.delta_s().col(0);
    CHECK(price(m, u, B, 0.0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("price_exponential: complete market and route agreement") {
    FiniteMarket m = complete2();
    Vector B(2);
    B << 1.0, 0.0;
    // unique martingale measure (1/2, 1/2): replicable, price = E_Q[B] = 1/2
    for (double gamma : {0.5, 1.0, 2.0, 8.0})
        CHECK(price_exponential(m, gamma, B) ==
              doctest::Approx(0.5).epsilon(1e-9));

    // x-independence and agreement with the generic root-finder
    FiniteMarket m3 = three_state();
    Vector B3(3);
    B3 << 1.0, 0.0, 0.0;
    double p_exp = price_exponential(m3, 1.0, B3);
    CHECK(price(m3, Utility::exponential(1.0), B3, 0.0) ==
          doctest::Approx(p_exp).epsilon(1e-8));
    CHECK(price(m3, Utility::exponential(1.0), B3, 2.5) ==
          doctest::Approx(p_exp).epsilon(1e-8));
}

TEST_CASE("price increases with risk aversion toward the polytope bound") {
    FiniteMarket m = three_state();
    Vector B(3);
    B << 1.0, 0.0, 0.0;
    double upper = polytope_linear_max(m.polytope(), B);
    double prev = -1e300;
    for (double gamma : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        double p = price_exponential(m, gamma, B);
        CHECK(p >= prev - 1e-10);
        CHECK(p <= upper + 1e-9);
        prev = p;
    }
}

TEST_CASE("penalty: zero at the entropy minimizer, entropy formula in general") {
    FiniteMarket m = three_state();
    Utility u = Utility::exponential(1.0);
    auto q_star = minimal_entropy_measure(m, 1.0);
    double h_min = relative_entropy(q_star.q(), m.probs());

    ExtReal a0 = penalty(m, u, q_star.q(), 0.0);
    CHECK(a0.is_finite());
    CHECK(a0.value() <= 1e-9);

    std::uint64_t state = 7;
    for (int k = 0; k < 10; ++k) {
        Vector q = random_polytope_point(m.polytope(), state);
        ExtReal a = penalty(m, u, q, 0.0);
        REQUIRE(a.is_finite());
        CHECK(a.value() >= -1e-12);
        double expect = relative_entropy(q, m.probs()) - h_min;
        CHECK(a.value() == doctest::Approx(expect).epsilon(1e-9));
    }

    // gamma scaling: alpha = (H - H_min)/gamma
    Utility u2 = Utility::exponential(2.0);
    auto q2 = minimal_entropy_measure(m, 2.0);
    double h_min2 = relative_entropy(q2.q(), m.probs());
    state = 13;
    Vector q = random_polytope_point(m.polytope(), state);
    double expect2 = (relative_entropy(q, m.probs()) - h_min2) / 2.0;
    CHECK(penalty(m, u2, q, 0.0).value() == doctest::Approx(expect2).epsilon(1e-9));

    // x cancels
    CHECK(penalty(m, u, q, 1.7).value() ==
          doctest::Approx(penalty(m, u, q, 0.0).value()).epsilon(1e-9));
}

TEST_CASE("dual price representation agrees with root finding") {
    FiniteMarket m = three_state();
    Utility u = Utility::exponential(1.0);

    auto zero = dual_price_representation(m, u, Vector::Zero(3), 0.0);
    CHECK(zero.price == doctest::Approx(0.0).epsilon(1e-8));
    REQUIRE(!zero.maximizer_set.empty());
    // zero-claim maximizers are the zero-penalty measures
    for (const auto& q : zero.maximizer_set)
        CHECK(penalty(m, u, q, 0.0).value() <= 1e-6);

    Vector B(3);
    B << 0.9, -0.2, 0.4;
    auto res = dual_price_representation(m, u, B, 0.0);
    CHECK(std::fabs(res.price - res.primal_route_price) <= 1e-7);

    // constant shift moves the price, not the argmax
    auto shifted = dual_price_representation(
        m, u, Vector(B + Vector::Constant(3, 2.0)), 0.0);
    CHECK(shifted.price == doctest::Approx(res.price + 2.0).epsilon(1e-7));

    // a nonzero endowment must cancel out of the representation
    for (double x : {-1.0, 0.5, 2.0}) {
        auto at_x = dual_price_representation(m, u, B, x);
        CHECK(at_x.price == doctest::Approx(res.price).epsilon(1e-7));
    }
}

TEST_CASE("full price report at a nonzero endowment") {
    FiniteMarket m = three_state();
    Utility u = Utility::exponential(2.0);
    Vector B(3);
    B << 1.0, 0.0, 0.0;
    PriceReport rep = full_price_report(m, u, B, 0.5);
    CHECK(rep.price == doctest::Approx(price(m, u, B, 0.5)).epsilon(1e-8));
    CHECK(rep.lower_bound <= rep.price + 1e-9);
    CHECK(rep.price <= rep.upper_bound.value() + 1e-9);
    for (const auto& e : rep.penalty_at)
        if (e.alpha.is_finite()) CHECK(e.alpha.value() >= -1e-12);
    CHECK_FALSE(rep.replicable);
    CHECK(rep.duality_gap <= 1e-8);
}

TEST_CASE("subdifferential consistency: argmax measures solve the B-problem") {
    FiniteMarket m = three_state();
    Utility u = Utility::exponential(1.0);
    Vector B(3);
    B << 1.0, 0.0, -0.3;
    auto res = dual_price_representation(m, u, B, 0.0);
    double pi = res.primal_route_price;
    for (const auto& q : res.maximizer_set) {
        Vector dens = q.cwiseQuotient(m.probs());
        double lam = lambda_foc(u, dens, m.probs(), pi - q.dot(B));
        CHECK(dual_q_residual(m, u, B, lam, q) <= 1e-7);
    }
}

TEST_CASE("price bounds bracket the price") {
    FiniteMarket m = three_state();
    Utility u = Utility::exponential(1.0);

    Vector B(3);
    B << 1.0, 0.0, 0.0;
    auto pb = price_bounds(m, u, B, 0.0);
    double p = price(m, u, B, 0.0);
    CHECK(pb.lower <= p + 1e-9);
    CHECK(p <= pb.upper.value() + 1e-9);
    // strictly interior for a non-replicable claim at moderate gamma
    CHECK(p > pb.lower + 1e-4);
    CHECK(p < pb.upper.value() - 1e-4);

    // replicable: collapses to the common expectation
    Vector Br = Vector::Constant(3, 1.5) + 0.3 * m.delta_s().col(0);
    auto pbr = price_bounds(m, u, Br, 0.0);
    CHECK(pbr.lower == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(pbr.upper.value() == doctest::Approx(1.5).epsilon(1e-8));

    auto pb0 = price_bounds(m, u, Vector::Zero(3), 0.0);
    CHECK(pb0.lower == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(pb0.upper.value() == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("volume asymptotics") {
    FiniteMarket m = three_state();
    Utility u = Utility::exponential(1.0);

    Vector B(3);
    B << 1.0, 0.0, 0.0;
    auto va = volume_asymptotics(m, u, B, 0.0);
    CHECK(va.slope0_matches);
    CHECK(va.slope_inf_matches);
    // structural references: entropy minimizer at 0, LP vertex bound at inf
    auto q_star = minimal_entropy_measure(m, 1.0);
    CHECK(va.slope0_reference == doctest::Approx(q_star.q().dot(B)).epsilon(1e-6));
    CHECK(va.slope_inf_reference ==
          doctest::Approx(polytope_linear_max(m.polytope(), B)));

    // replicable claims are linear in volume
    Vector Br = Vector::Constant(3, 0.8) + 0.2 * m.delta_s().col(0);
    auto var = volume_asymptotics(m, u, Br, 0.0);
    CHECK(var.slope0 == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(var.slope_inf == doctest::Approx(0.8).epsilon(1e-6));

    auto va0 = volume_asymptotics(m, u, Vector::Zero(3), 0.0);
    CHECK(va0.slope0 == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(va0.slope_inf == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("no-asset market prices by certainty equivalence") {
    // without hedging U_B(x) = E[u(x - B)], so for the exponential utility
    // pi(B) = (1/gamma) log E[e^{gamma B}]
    Vector p(3);
    p << 0.4, 0.35, 0.25;
    Matrix none(3, 0);
    FiniteMarket m(p, none);
    Vector B(3);
    B << 1.0, -0.5, 0.2;
    for (double gamma : {0.5, 1.0, 2.0}) {
        Utility u = Utility::exponential(gamma);
        double expect =
            std::log(p.dot(Vector((gamma * B).array().exp()))) / gamma;
        CHECK(price(m, u, B, 0.0) == doctest::Approx(expect).epsilon(1e-9));
        CHECK(price_exponential(m, gamma, B) ==
              doctest::Approx(expect).epsilon(1e-9));
        auto dual = dual_price_representation(m, u, B, 0.3);
        CHECK(dual.price == doctest::Approx(expect).epsilon(1e-7));
    }
}

TEST_CASE("price of b B is convex in b") {
    FiniteMarket m = three_state();
    Utility u = Utility::exponential(1.0);
    Vector B(3);
    B << 1.0, -0.5, 0.2;
    double prev2 = price(m, u, Vector(-1.0 * B), 0.0);
    double prev1 = price(m, u, Vector(-0.5 * B), 0.0);
    for (double b = 0.0; b <= 2.01; b += 0.5) {
        double cur = price(m, u, Vector(b * B), 0.0);
        CHECK(cur - 2.0 * prev1 + prev2 >= -1e-8);
        prev2 = prev1;
        prev1 = cur;
    }
}

TEST_CASE("risk measure axioms on random pairs") {
    FiniteMarket m = three_state();
    Utility u = Utility::exponential(1.0);
    std::mt19937_64 rng(101);
    std::vector<Vector> claims;
    for (int k = 0; k < 40; ++k)
        claims.push_back(testkit::random_claim(rng, 3));
    auto rep = risk_measure_axioms(m, u, 0.0, claims, 101);
    CHECK(rep.pairs_checked == 20);
    CHECK(rep.convexity_residual <= 1e-8);
    CHECK(rep.monotonicity_residual <= 1e-8);
    CHECK(rep.translation_residual <= 1e-8);
    CHECK(rep.rho_convexity_residual <= 1e-8);
    CHECK(rep.fatou_residual <= 1e-7);
    CHECK(rep.all_pass());
}

TEST_CASE("translation exactness at specific shifts") {
    FiniteMarket m = three_state();
    Utility u = Utility::exponential(1.0);
    Vector B(3);
    B << 0.4, -0.1, 0.6;
    double p0 = price(m, u, B, 0.0);
    for (double c : {-10.0, 0.5, 7.0})
        CHECK(price(m, u, Vector(B + Vector::Constant(3, c)), 0.0) ==
              doctest::Approx(p0 + c).epsilon(1e-9));
}

TEST_CASE("penalty is the conjugate of the price (one-sided minimality)") {
    FiniteMarket m = three_state();
    Utility u = Utility::exponential(1.0);
    std::uint64_t state = 55;
    Vector q = random_polytope_point(m.polytope(), state);
    double alpha = penalty(m, u, q, 0.0).value();

    std::mt19937_64 rng(56);
    double emp = -1e300;
    for (int k = 0; k < 60; ++k) {
        Vector B = testkit::random_claim(rng, 3, 3.0);
        emp = std::max(emp, q.dot(B) - price(m, u, B, 0.0));
    }
    CHECK(alpha >= emp - 1e-6);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "indiff/numeric.hpp"
#include "indiff/orlicz.hpp"

using namespace indiff;

namespace {

DiscreteDistribution dist(std::vector<double> v, std::vector<double> p) {
    return DiscreteDistribution::from_values(v, p);
}

}  // namespace

TEST_CASE("Luxemburg norm basics") {
    YoungPair yp(Utility::exponential(1.0));

    CHECK(luxemburg_norm(dist({0.0, 0.0}, {0.5, 0.5}), yp) == 0.0);

    // constant claim: solve e^{|c|/k} - 1 = 1, i.e. k = |c| / ln 2
    for (double gamma : {0.5, 1.0, 2.0}) {
        YoungPair ypg(Utility::exponential(gamma));
        for (double c : {-3.0, 0.25, 11.0}) {
            double n = luxemburg_norm(dist({c, c, c}, {0.2, 0.3, 0.5}), ypg);
            CHECK(n == doctest::Approx(gamma * std::fabs(c) / std::log(2.0))
                           .epsilon(1e-10));
        }
    }

    // absolute homogeneity
    auto f = dist({1.0, -2.0, 0.5}, {0.3, 0.3, 0.4});
    double base = luxemburg_norm(f, yp);
    for (double t : {0.1, 2.0, 17.0, -3.0}) {
        auto tf = dist({t * 1.0, t * -2.0, t * 0.5}, {0.3, 0.3, 0.4});
        CHECK(luxemburg_norm(tf, yp) ==
              doctest::Approx(std::fabs(t) * base).epsilon(1e-10));
    }
}

TEST_CASE("Luxemburg norm satisfies the triangle inequality on random triples") {
    YoungPair yp(Utility::exponential(1.0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-4.0, 4.0);
    for (int k = 0; k < 100; ++k) {
        std::vector<double> a(4), b(4), s(4), p = {0.1, 0.2, 0.3, 0.4};
        for (int i = 0; i < 4; ++i) {
            a[i] = unif(rng);
            b[i] = unif(rng);
            s[i] = a[i] + b[i];
        }
        double lhs = luxemburg_norm(dist(s, p), yp);
        double rhs = luxemburg_norm(dist(a, p), yp) + luxemburg_norm(dist(b, p), yp);
        CHECK(lhs <= rhs + 1e-9);
    }
}

TEST_CASE("Orlicz dual norm: zero, grid oracle, Hoelder") {
    YoungPair yp(Utility::exponential(1.0));
    CHECK(orlicz_dual_norm(dist({0.0, 0.0}, {0.5, 0.5}), yp) == 0.0);

    // two-point grid oracle: maximize p1 f1 a1 + p2 f2 a2 on the constraint
    // boundary E[u_hat(f)] = 1, resolved for f2 and scanned over f1
    auto g = dist({1.0, 1.0}, {0.5, 0.5});
    double solver = orlicz_dual_norm(g, yp);
    auto boundary_f2 = [&](double f1) {
        double rem = 1.0 - 0.5 * yp.u_hat(f1);
        if (rem < 0.0) return -1.0;
        return std::log(rem / 0.5 + 1.0);  // u_hat^{-1} on the second atom
    };
    double brute = 0.0;
    for (double f1 = 0.0; f1 <= std::log(3.0); f1 += 1e-5) {
        double f2 = boundary_f2(f1);
        if (f2 < 0.0) continue;
        brute = std::max(brute, 0.5 * f1 + 0.5 * f2);
    }
    CHECK(solver == doctest::Approx(brute).epsilon(1e-6));

    // Orlicz-Hoelder with the standard factor 2
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        std::vector<double> fv(3), gv(3), p = {0.25, 0.45, 0.3};
        for (int i = 0; i < 3; ++i) {
            fv[i] = unif(rng);
            gv[i] = unif(rng);
        }
        auto fd = dist(fv, p);
        auto gd = dist(gv, p);
        double e_fg = 0.0;
        for (int i = 0; i < 3; ++i) e_fg += p[i] * std::fabs(fv[i] * gv[i]);
        CHECK(e_fg <=
              2.0 * luxemburg_norm(fd, yp) * orlicz_dual_norm(gd, yp) + 1e-9);
    }
}

TEST_CASE("claim admissibility on a finite space is unconditional") {
    auto B = dist({100.0, -3.0}, {0.5, 0.5});
    auto rep = claim_admissible(B, Utility::exponential(1.0));
    CHECK(rep.gains);
    CHECK(rep.positive_bound);
    CHECK(rep.eps_condition == TriState::yes);
    CHECK(rep.L.is_pos_inf());
    CHECK(rep.l.is_pos_inf());
}

TEST_CASE("claim admissibility for exponential-tail claims") {
    Utility u = Utility::exponential(1.0);

    // B+ = delta Y with delta in (0,1): admissible, L = 1/delta
    for (double delta : {0.1, 0.3, 0.9}) {
        auto rep = claim_admissible(ExpTailClaim{delta, 0.0, 0.0}, u);
        CHECK(rep.positive_bound);
        CHECK(rep.eps_condition == TriState::yes);
        CHECK(rep.L.value() == doctest::Approx(1.0 / delta));
        CHECK(rep.l.is_pos_inf());
    }

    // B+ = Y: E[e^{(1+eps) Y}] = inf for every eps; even the base moment fails
    auto rep1 = claim_admissible(ExpTailClaim{1.0, 0.0, 0.0}, u);
    CHECK_FALSE(rep1.positive_bound);
    CHECK(rep1.eps_condition == TriState::no);
    CHECK(rep1.L.value() == doctest::Approx(1.0));

    // gamma = 2 halves every threshold
    auto rep2 = claim_admissible(ExpTailClaim{0.25, 0.0, 0.0},
                                 Utility::exponential(2.0));
    CHECK(rep2.L.value() == doctest::Approx(2.0));

    // bounded claims pass everything
    auto repb = claim_admissible(ExpTailClaim{0.0, 0.0, 5.0}, u);
    CHECK(repb.eps_condition == TriState::yes);
    CHECK(repb.L.is_pos_inf());
}

TEST_CASE("numeric tail classification for custom utilities") {
    // custom exponential forces the numeric slope rule instead of the closed
    // form; thresholds must land where the closed form puts them
    Utility cu = Utility::custom([](double x) { return -std::exp(-x); },
                                 [](double x) { return std::exp(-x); });
    YoungPair yp(cu);

    CHECK(uhat_exp_tail_finite(yp, [](double y) { return 0.5 * y; }));
    CHECK(uhat_exp_tail_finite(yp, [](double y) { return 0.99 * y; }));
    CHECK_FALSE(uhat_exp_tail_finite(yp, [](double y) { return y; }));
    CHECK_FALSE(uhat_exp_tail_finite(yp, [](double y) { return 1.01 * y; }));
    // subexponential arguments are always integrable
    CHECK(uhat_exp_tail_finite(yp, [](double y) { return 4.0 * std::sqrt(y); }));

    auto rep = claim_admissible(ExpTailClaim{0.3, 0.0, 0.0}, cu);
    CHECK(rep.positive_bound);
    CHECK(rep.eps_condition == TriState::yes);
    REQUIRE(rep.L.is_finite());
    CHECK(rep.L.value() == doctest::Approx(1.0 / 0.3).epsilon(1e-6));
    CHECK(rep.l.is_pos_inf());

    auto bad = claim_admissible(ExpTailClaim{1.0, 0.0, 0.0}, cu);
    CHECK_FALSE(bad.positive_bound);
    CHECK(bad.eps_condition == TriState::no);
}

TEST_CASE("finiteness classifications agree between u_hat and u moments") {
    // E[u_hat(alpha f)] < inf iff E[u(-alpha |f|)] > -inf; for f = delta Y
    // under the exponential utility both reduce to alpha * gamma * delta < 1
    for (double gamma : {0.5, 1.0, 2.0}) {
        Utility u = Utility::exponential(gamma);
        for (double delta : {0.2, 0.5, 0.8}) {
            for (double alpha : {0.3, 1.0, 2.0, 5.0}) {
                bool uhat_finite = alpha * gamma * delta < 1.0;
                auto rep = claim_admissible(
                    ExpTailClaim{alpha * delta, 0.0, 0.0}, u);
                // positive_bound probes exactly E[u(-1 * B+)] with B+ = a d Y
                CHECK(rep.positive_bound == uhat_finite);
            }
        }
    }
}

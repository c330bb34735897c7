#include <doctest.h>

#include <cmath>

#include "indiff/exp_mixture.hpp"
#include "indiff/market.hpp"
#include "indiff/testkit.hpp"

using namespace indiff;

namespace {

FiniteMarket sym2() {
    Vector p(2);
    p << 0.5, 0.5;
    Matrix dS(2, 1);
    dS << 1.0, -1.0;
    return FiniteMarket(p, dS);
}

FiniteMarket three_state() {
    Vector p(3);
    p << 0.5, 0.3, 0.2;
    Matrix dS(3, 1);
    dS << 1.0, 0.0, -1.0;
    return FiniteMarket(p, dS);
}

}  // namespace

TEST_CASE("construction validates probabilities and W") {
    Matrix dS(2, 1);
    dS << 1.0, -1.0;
    Vector bad(2);
    bad << 0.5, 0.4;
    CHECK_THROWS_AS(FiniteMarket(bad, dS), std::invalid_argument);
    Vector p(2);
    p << 0.5, 0.5;
    Vector w_small(2);
    w_small << 0.5, 2.0;
    CHECK_THROWS_AS(FiniteMarket(p, dS, 0.0, w_small), std::invalid_argument);
}

TEST_CASE("arbitrage is rejected at construction") {
    Vector p(2);
    p << 0.5, 0.5;
    Matrix up(2, 1);
    up << 1.0, 2.0;  // strictly positive increment
    CHECK_THROWS_AS(FiniteMarket(p, up), std::invalid_argument);

    // weak arbitrage: dS >= 0 with a zero state still kills strict positivity
    Vector p3(3);
    p3 << 0.4, 0.3, 0.3;
    Matrix weak(3, 1);
    weak << 1.0, 0.0, 2.0;
    CHECK_THROWS_AS(FiniteMarket(p3, weak), std::invalid_argument);
}

TEST_CASE("suitability witnesses") {
    FiniteMarket m = sym2();  // default W = 1 + max |dS| = 2
    auto r = check_suitable(m);
    CHECK(r.suitable);

    Vector p(2);
    p << 0.5, 0.5;
    Matrix dS(2, 1);
    dS << 1.0, -1.0;
    Vector w1 = Vector::Ones(2);
    auto r1 = check_suitable(FiniteMarket(p, dS, 0.0, w1));
    CHECK(r1.suitable);
    CHECK(r1.witness_scale == doctest::Approx(1.0));

    Matrix big(2, 1);
    big << 5.0, -1.0;
    auto r5 = check_suitable(FiniteMarket(p, big, 0.0, w1));
    CHECK_FALSE(r5.suitable);
    CHECK(r5.witness_scale == doctest::Approx(5.0));
}

TEST_CASE("compatibility through the shared interface") {
    CHECK(check_compatible(sym2(), Utility::exponential(1.0)).strong);
    CHECK(check_compatible(sym2(), Utility::exponential(1.0)).weak);

    ExpMixtureMarket ey(ExpMixtureMarket::default_atoms(), 1.0,
                        ExpMixtureMarket::ZeroClaim{},
                        ExpMixtureMarket::LossTag::one_plus_y);
    auto ry = check_compatible(ey, Utility::exponential(1.0));
    CHECK_FALSE(ry.strong);  // E[e^{a(1+Y)}] < inf only for a < 1
    CHECK(ry.weak);

    ExpMixtureMarket es(ExpMixtureMarket::default_atoms(), 1.0,
                        ExpMixtureMarket::ZeroClaim{},
                        ExpMixtureMarket::LossTag::one_plus_sqrt_y);
    auto rs = check_compatible(es, Utility::exponential(1.0));
    CHECK(rs.strong);
    CHECK(rs.weak);

    // custom utility goes through the numeric tail classifier
    Utility cu = Utility::custom([](double x) { return -std::exp(-x); },
                                 [](double x) { return std::exp(-x); });
    auto ryc = check_compatible(ey, cu);
    CHECK_FALSE(ryc.strong);
    CHECK(ryc.weak);
    auto rsc = check_compatible(es, cu);
    CHECK(rsc.strong);
    CHECK(rsc.weak);
}

TEST_CASE("martingale polytope structure") {
    // unique measure
    auto poly2 = sym2().polytope();
    CHECK(poly2.dim == 0);
    REQUIRE(poly2.vertices.size() == 1);
    CHECK(poly2.vertices[0][0] == doctest::Approx(0.5));
    CHECK(poly2.vertices[0][1] == doctest::Approx(0.5));

    // one-parameter family q = (t, 1 - 2t, t)
    auto poly3 = three_state().polytope();
    CHECK(poly3.dim == 1);
    REQUIRE(poly3.vertices.size() == 2);
    for (const auto& v : poly3.vertices) {
        CHECK(v[0] == doctest::Approx(v[2]));
        CHECK(v.sum() == doctest::Approx(1.0));
    }
    CHECK(poly3.interior.minCoeff() > 0.0);

    // no assets: the full simplex
    Vector p(3);
    p << 0.2, 0.3, 0.5;
    Matrix none(3, 0);
    auto polyfull = FiniteMarket(p, none).polytope();
    CHECK(polyfull.vertices.size() == 3);
    CHECK(polyfull.dim == 2);
}

TEST_CASE("polytope vertices satisfy the constraints") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 25; ++k) {
        FiniteMarket m = testkit::random_market(rng);
        for (const auto& v : m.polytope().vertices) {
            CHECK(std::fabs(v.sum() - 1.0) <= 1e-10);
            CHECK(v.minCoeff() >= -1e-10);
            if (m.assets() > 0)
                CHECK((v.transpose() * m.delta_s()).cwiseAbs().maxCoeff() <=
                      1e-10);
        }
        // the certificate is a valid strictly positive measure
        MartingaleMeasure cert(m.no_arbitrage_certificate(), m);
        CHECK(cert.q().minCoeff() > 0.0);
    }
}

TEST_CASE("replication") {
    FiniteMarket m = three_state();

    Vector asset = m.delta_s().col(0);
    auto r1 = replicable(m, asset);
    REQUIRE(r1.has_value());
    CHECK(r1->c == doctest::Approx(0.0));
    CHECK(r1->strategy[0] == doctest::Approx(1.0));

    auto r2 = replicable(m, Vector::Constant(3, 5.0));
    REQUIRE(r2.has_value());
    CHECK(r2->c == doctest::Approx(5.0));
    CHECK(r2->strategy[0] == doctest::Approx(0.0).epsilon(1e-12));

    Vector bad(3);
    bad << 1.0, 0.0, 0.0;
    CHECK_FALSE(replicable(m, bad).has_value());
}

TEST_CASE("replicable claims have a measure-independent expectation") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        FiniteMarket m = testkit::random_market(rng);
        double c = unif(rng);
        Vector h(m.assets());
        for (int j = 0; j < m.assets(); ++j) h[j] = unif(rng);
        Vector B = Vector::Constant(m.states(), c) + m.delta_s() * h;
        for (const auto& v : m.polytope().vertices)
            CHECK(v.dot(B) == doctest::Approx(c).epsilon(1e-9));
        std::uint64_t state = 99 + k;
        for (int t = 0; t < 5; ++t) {
            Vector q = random_polytope_point(m.polytope(), state);
            CHECK(q.dot(B) == doctest::Approx(c).epsilon(1e-9));
        }
    }
}

TEST_CASE("martingale measure validation") {
    FiniteMarket m = sym2();
    Vector good(2);
    good << 0.5, 0.5;
    CHECK_NOTHROW(MartingaleMeasure(good, m));
    Vector off(2);
    off << 0.6, 0.4;  // violates q' dS = 0
    CHECK_THROWS_AS(MartingaleMeasure(off, m), std::invalid_argument);
}

#include "indiff/verify.hpp"

#include <cmath>
#include <random>

#include "indiff/dual.hpp"
#include "indiff/exp_mixture.hpp"
#include "indiff/indifference.hpp"
#include "indiff/oracle.hpp"
#include "indiff/orlicz.hpp"
#include "indiff/primal.hpp"
#include "indiff/testkit.hpp"

namespace indiff {
namespace verify {

namespace {

const double kGammas[3] = {0.5, 1.0, 2.0};

}  // namespace

SuiteResult duality_suite(std::uint64_t seed, int n_markets) {
    SuiteResult r{"duality", {}};
    std::mt19937_64 rng(seed);
    double max_gap = 0.0, max_focl = 0.0, max_focq = 0.0;
    int nonconverged = 0;
    for (int k = 0; k < n_markets; ++k) {
        FiniteMarket m = testkit::random_market(rng);
        Vector B = testkit::random_claim(rng, m.states());
        Utility u = Utility::exponential(kGammas[k % 3]);
        PrimalSolution ps = maximize(m, u, B, 0.0);
        DualSolution ds = minimize_dual(m, u, B, 0.0);
        max_gap = std::max(max_gap, std::fabs(ps.value - ds.value));
        max_focl = std::max(max_focl, ds.foc_lambda_residual);
        max_focq = std::max(max_focq, ds.foc_q_residual);
        if (!ds.converged || !ps.converged) ++nonconverged;
    }
    r.checks.push_back({"max_duality_gap", max_gap, 1e-7});
    r.checks.push_back({"max_lambda_foc_residual", max_focl, 1e-9});
    r.checks.push_back({"max_q_variational_residual", max_focq, 1e-8});
    r.checks.push_back({"nonconverged_solves", double(nonconverged), 0.0});
    return r;
}

SuiteResult oracle_suite(std::uint64_t seed, int n_markets) {
    SuiteResult r{"oracle", {}};
    std::mt19937_64 rng(seed);
    double max_pdiff = 0.0, max_ddiff = 0.0, worst_margin = 0.0;
    double max_focl = 0.0, max_focq = 0.0;
    Utility u = Utility::exponential(1.0);
    int done = 0;
    while (done < n_markets) {
        FiniteMarket m = testkit::random_market(rng);
        Vector B = testkit::random_claim(rng, m.states());
        if (m.polytope().dim > 2) continue;
        PrimalSolution ps = maximize(m, u, B, 0.0);
        DualSolution ds = minimize_dual(m, u, B, 0.0);
        double gp = oracle::grid_primal(m, u, B, 0.0);
        auto gd = oracle::grid_dual(m, u, B, 0.0);
        max_pdiff = std::max(max_pdiff, std::fabs(ps.value - gp));
        max_ddiff = std::max(max_ddiff, std::fabs(ds.value - gd.min_value));
        worst_margin = std::max(worst_margin, -gd.weak_duality_margin);
        max_focl = std::max(max_focl, ds.foc_lambda_residual);
        max_focq = std::max(max_focq, ds.foc_q_residual);
        ++done;
    }
    r.checks.push_back({"max_primal_vs_grid", max_pdiff, 1e-4});
    r.checks.push_back({"max_dual_vs_grid", max_ddiff, 1e-3});
    r.checks.push_back({"weak_duality_violation", worst_margin, 1e-9});
    r.checks.push_back({"max_lambda_foc_residual", max_focl, 1e-9});
    r.checks.push_back({"max_q_variational_residual", max_focq, 1e-8});
    return r;
}

SuiteResult price_route_suite(std::uint64_t seed, int n_instances) {
    SuiteResult r{"prices", {}};
    std::mt19937_64 rng(seed);
    double max_route = 0.0, max_repl = 0.0;
    for (int k = 0; k < n_instances; ++k) {
        FiniteMarket m = testkit::random_market(rng);
        Vector B = testkit::random_claim(rng, m.states());
        double gamma = kGammas[k % 3];
        Utility u = Utility::exponential(gamma);
        double p_root = price(m, u, B, 0.0);
        double p_exp = price_exponential(m, gamma, B);
        DualPriceResult dual = dual_price_representation(m, u, B, 0.0);
        max_route = std::max({max_route, std::fabs(p_root - p_exp),
                              std::fabs(p_root - dual.price),
                              std::fabs(p_exp - dual.price)});

        // replicable claim: c + h . dS must price at c
        std::uniform_real_distribution<double> unif(-2.0, 2.0);
        double c = unif(rng);
        Vector h(m.assets());
        for (int j = 0; j < m.assets(); ++j) h[j] = unif(rng);
        Vector Br = Vector::Constant(m.states(), c) + m.delta_s() * h;
        max_repl = std::max(max_repl, std::fabs(price(m, u, Br, 0.0) - c));
    }
    r.checks.push_back({"max_route_disagreement", max_route, 1e-7});
    r.checks.push_back({"max_replicable_price_error", max_repl, 1e-9});
    return r;
}

namespace {

FiniteMarket axiom_market() {
    Vector p(4);
    p << 0.4, 0.3, 0.2, 0.1;
    Matrix dS(4, 2);
    dS << 1.0, 0.5, 0.2, -0.6, -0.5, 0.4, -0.9, -0.3;
    return FiniteMarket(p, dS);
}

}  // namespace

SuiteResult axiom_suite(std::uint64_t seed, int n_pairs) {
    SuiteResult r{"axioms", {}};
    std::mt19937_64 rng(seed);
    FiniteMarket m = axiom_market();
    Utility u = Utility::exponential(1.0);
    std::vector<Vector> claims;
    for (int k = 0; k < 2 * n_pairs; ++k)
        claims.push_back(testkit::random_claim(rng, m.states()));
    AxiomReport rep = risk_measure_axioms(m, u, 0.0, claims, seed);
    r.checks.push_back({"convexity_residual", rep.convexity_residual, 1e-8});
    r.checks.push_back(
        {"monotonicity_residual", rep.monotonicity_residual, 1e-8});
    r.checks.push_back(
        {"translation_residual", rep.translation_residual, 1e-8});
    r.checks.push_back(
        {"rho_convexity_residual", rep.rho_convexity_residual, 1e-8});
    return r;
}

SuiteResult fatou_suite(std::uint64_t seed) {
    SuiteResult r{"fatou", {}};
    std::mt19937_64 rng(seed);
    FiniteMarket m = axiom_market();
    Utility u = Utility::exponential(1.0);
    std::vector<Vector> claims;
    claims.push_back(testkit::random_claim(rng, m.states(), 5.0));
    AxiomReport rep = risk_measure_axioms(m, u, 0.0, claims, seed);
    r.checks.push_back({"fatou_residual", rep.fatou_residual, 1e-7});
    return r;
}

SuiteResult volume_suite(std::uint64_t seed, int n_instances) {
    SuiteResult r{"volume", {}};
    std::mt19937_64 rng(seed);
    Utility u = Utility::exponential(1.0);
    double worst0 = 0.0, worst_inf = 0.0;
    for (int k = 0; k < n_instances; ++k) {
        FiniteMarket m = testkit::random_market(rng);
        Vector B = testkit::random_claim(rng, m.states());
        VolumeAsymptotics va = volume_asymptotics(m, u, B, 0.0);
        worst0 = std::max(worst0, std::fabs(va.slope0 - va.slope0_reference));
        worst_inf = std::max(
            worst_inf, std::fabs(va.slope_inf - va.slope_inf_reference));
    }
    r.checks.push_back({"slope0_error", worst0, 1e-4});
    r.checks.push_back({"slope_inf_error", worst_inf, 1e-3});
    return r;
}

SuiteResult norm_suite(std::uint64_t seed) {
    SuiteResult r{"norms", {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);

    double const_err = 0.0;
    for (double gamma : kGammas) {
        YoungPair yp(Utility::exponential(gamma));
        for (double c : {-3.0, 0.7, 42.0}) {
            auto f = DiscreteDistribution::from_values({c, c}, {0.5, 0.5});
            const_err =
                std::max(const_err, std::fabs(luxemburg_norm(f, yp) -
                                              gamma * std::fabs(c) / std::log(2.0)));
        }
    }
    r.checks.push_back({"constant_norm_error", const_err, 1e-10});

    YoungPair yp(Utility::exponential(1.0));
    double tri = 0.0, hom = 0.0;
    for (int k = 0; k < 50; ++k) {
        std::vector<double> fv(3), gv(3);
        for (auto& v : fv) v = unif(rng);
        for (auto& v : gv) v = unif(rng);
        std::vector<double> pr = {0.2, 0.5, 0.3};
        auto f = DiscreteDistribution::from_values(fv, pr);
        auto g = DiscreteDistribution::from_values(gv, pr);
        std::vector<double> sv(3);
        for (int i = 0; i < 3; ++i) sv[i] = fv[i] + gv[i];
        auto s = DiscreteDistribution::from_values(sv, pr);
        tri = std::max(tri, luxemburg_norm(s, yp) - luxemburg_norm(f, yp) -
                                luxemburg_norm(g, yp));
        double t = std::fabs(unif(rng)) + 0.1;
        std::vector<double> tv(3);
        for (int i = 0; i < 3; ++i) tv[i] = t * fv[i];
        auto tf = DiscreteDistribution::from_values(tv, pr);
        hom = std::max(hom, std::fabs(luxemburg_norm(tf, yp) -
                                      t * luxemburg_norm(f, yp)));
    }
    r.checks.push_back({"triangle_inequality_violation", tri, 1e-9});
    r.checks.push_back({"homogeneity_error", hom, 1e-9});

    // phi_hat vanishes exactly on [-beta, beta]
    double beta = yp.beta();
    double inside = std::max(yp.phi_hat(beta * (1.0 - 1e-6)),
                             yp.phi_hat(-beta * (1.0 - 1e-6)));
    double outside = yp.phi_hat(beta * (1.0 + 1e-6));
    r.checks.push_back({"phi_hat_inside_band", inside, 0.0});
    r.checks.push_back({"phi_hat_outside_positive", outside > 0.0 ? 0.0 : 1.0, 0.0});
    return r;
}

SuiteResult example2_suite() {
    SuiteResult r{"example2", {}};
    const double delta = 0.3;
    ExpMixtureMarket ex2(ExpMixtureMarket::default_atoms(), 1.0,
                         ExpMixtureMarket::DeltaYClaim{delta});
    ExpMixtureMarket ex0(ExpMixtureMarket::default_atoms(), 1.0,
                         ExpMixtureMarket::ZeroClaim{});
    auto oh = ex2.optimal_h();
    r.checks.push_back(
        {"h_star_error", std::fabs(oh.h_star - (1.0 - delta)), 0.0});
    r.checks.push_back(
        {"boundary_attained", oh.attained_at_boundary ? 0.0 : 1.0, 0.0});
    ExtReal gppos = ex2.g_prime(oh.h_star);
    r.checks.push_back(
        {"g_prime_positive_at_h_star",
         gppos.is_finite() && gppos.value() > 0.0 ? 0.0 : 1.0, 0.0});
    auto sm = ex2.singular_mass();
    r.checks.push_back({"singular_mass_positive", -sm.value(), -1e-12});
    r.checks.push_back(
        {"singular_mass_route_reldiff",
         std::fabs(sm.closed_form - sm.quadrature) / std::fabs(sm.closed_form),
         1e-8});
    r.checks.push_back(
        {"excess_hedge_error",
         std::fabs(hedging_delta(ex2, ex0) - (-delta)), 1e-12});
    // covariance sign contrast: Cov(B, S1) = delta E[Z] Var[Y] > 0 while the
    // excess hedge is negative
    double ez = 0.0;
    for (const auto& a : ex2.atoms()) ez += a.p * a.z;
    r.checks.push_back({"covariance_positive", -(delta * ez), -1e-12});
    return r;
}

SuiteResult example1_suite() {
    SuiteResult r{"example1", {}};
    auto mk = [](ExpMixtureMarket::Claim c) {
        return ExpMixtureMarket(ExpMixtureMarket::default_atoms(), 1.0,
                                std::move(c));
    };
    ExpMixtureMarket ex0 = mk(ExpMixtureMarket::ZeroClaim{});
    ExpMixtureMarket ex_zero_alpha = mk(ExpMixtureMarket::BoundedAlphaClaim{
        [](double, double) { return 0.0; }, 0.0});
    ExpMixtureMarket ex_alpha = mk(ExpMixtureMarket::BoundedAlphaClaim{
        [](double y, double z) { return 0.2 / (1.0 + y) + 0.05 * z; }, 0.25});

    int idx = 0;
    for (const ExpMixtureMarket* ex : {&ex_zero_alpha, &ex_alpha}) {
        std::string tag = idx++ == 0 ? "alpha0_" : "alpha_";
        auto oh = ex->optimal_h();
        r.checks.push_back({tag + "h_star_error", std::fabs(oh.h_star - 1.0), 0.0});
        r.checks.push_back(
            {tag + "hedge_error", std::fabs(hedging_delta(*ex, ex0)), 1e-10});
        auto sm = ex->singular_mass();
        r.checks.push_back({tag + "singular_mass_positive", -sm.value(), -1e-12});
        r.checks.push_back(
            {tag + "mass_route_reldiff",
             std::fabs(sm.closed_form - sm.quadrature) /
                 std::fabs(sm.closed_form),
             1e-8});
        auto sb = ex->singular_bounds();
        // bounded claim lies in M^uhat: both singular bounds collapse to 0
        bool zero_action = sb.claim_in_m_uhat && sb.lower_coeff == 0.0 &&
                           sb.upper_coeff == ExtReal(0.0);
        r.checks.push_back({tag + "qs_action_zero", zero_action ? 0.0 : 1.0, 0.0});
    }
    return r;
}

std::vector<SuiteResult> run_all(std::uint64_t seed, int fuzz_markets) {
    std::vector<SuiteResult> all;
    all.push_back(duality_suite(seed, fuzz_markets));
    all.push_back(oracle_suite(seed));
    all.push_back(example2_suite());
    all.push_back(example1_suite());
    all.push_back(price_route_suite(seed + 2));
    all.push_back(axiom_suite(seed + 3));
    all.push_back(fatou_suite(seed + 4));
    all.push_back(volume_suite(seed + 5));
    all.push_back(norm_suite(seed + 6));
    return all;
}

}  // namespace verify
}  // namespace indiff

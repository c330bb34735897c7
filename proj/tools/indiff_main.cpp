// indiff: batch front end for the one-period indifference-pricing library.
//
// Subcommands: price, maximize, dual, example, verify, norm.
// Exit codes: 0 ok, 1 suite failure, 2 validation error, 3 non-convergence.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "indiff/dual.hpp"
#include "indiff/exp_mixture.hpp"
#include "indiff/indifference.hpp"
#include "indiff/io.hpp"
#include "indiff/orlicz.hpp"
#include "indiff/primal.hpp"
#include "indiff/verify.hpp"

using nlohmann::json;
using namespace indiff;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSuiteFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(12) << v;
    return ss.str();
}

json vec_to_json(const Vector& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        out << text;
    }
}

struct UtilityFlags {
    std::string kind = "exponential";
    double gamma = 1.0;
    std::string spec_path;

    Utility build() const {
        if (kind == "exponential") return Utility::exponential(gamma);
        if (kind == "custom") {
            if (spec_path.empty())
                throw ValidationError("bad-schema",
                                      "--utility custom requires --spec FILE");
            return load_utility_file(spec_path);
        }
        throw ValidationError("bad-schema", "unknown utility kind: " + kind);
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--utility", kind, "utility kind: exponential | custom")
            ->default_val("exponential");
        cmd->add_option("--gamma", gamma, "risk aversion (exponential)")
            ->default_val(1.0);
        cmd->add_option("--spec", spec_path, "custom utility spec file");
    }
};

struct ClaimFlags {
    std::string claim_path;
    double claim_const = 0.0;
    bool has_const = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--claim", claim_path, "claim file (array/values/constant)");
        cmd->add_option("--claim-const", claim_const, "constant claim value")
            ->each([this](const std::string&) { has_const = true; });
    }

    Vector resolve(const LoadedMarket& lm) const {
        if (!claim_path.empty())
            return load_claim_file(claim_path, lm.market.states());
        if (has_const)
            return Vector::Constant(lm.market.states(), claim_const);
        if (lm.claim) return *lm.claim;
        return Vector::Zero(lm.market.states());
    }
};

int cmd_price(const std::string& market_path, const UtilityFlags& uf,
              const ClaimFlags& cf, double x0, bool as_json,
              const std::string& out_path) {
    LoadedMarket lm = load_market_file(market_path);
    const FiniteMarket& m = lm.market;
    Utility u = uf.build();
    Vector B = cf.resolve(lm);
    PriceReport rep = full_price_report(m, u, B, x0);

    json penalties = json::array();
    for (const auto& e : rep.penalty_at)
        penalties.push_back(
            {{"measure", e.measure},
             {"E_Q_B", e.expectation},
             {"alpha",
              e.alpha.is_finite() ? json(e.alpha.value()) : json("+inf")}});
    json argmax = json::array();
    for (const auto& q : rep.argmax_measures) argmax.push_back(vec_to_json(q));

    json j{{"price", rep.price},
           {"replicable", rep.replicable},
           {"bounds",
            {{"lower", rep.lower_bound},
             {"upper", rep.upper_bound.as_double()}}},
           {"slopes",
            {{"at_zero", rep.slope_at_zero},
             {"at_infinity", rep.slope_at_infinity.as_double()}}},
           {"penalties", penalties},
           {"argmax_measures", argmax},
           {"residuals",
            {{"duality_gap", rep.duality_gap},
             {"lambda_foc", rep.lambda_foc_residual},
             {"q_variational", rep.q_variational_residual}}},
           {"x0", x0}};
    if (rep.replicable)
        j["replication"] = {{"c", rep.replication_constant},
                            {"h", vec_to_json(rep.replication_strategy)}};

    if (as_json) {
        emit(j.dump(2) + "\n", out_path);
    } else {
        std::ostringstream t;
        t << "indifference price report\n"
          << "  market: " << market_path << " (n=" << m.states()
          << ", d=" << m.assets() << ")\n"
          << "  price: " << fmt(rep.price) << "\n"
          << "  replicable: "
          << (rep.replicable ? "yes (c=" + fmt(rep.replication_constant) + ")"
                             : "no")
          << "\n"
          << "  bounds: [" << fmt(rep.lower_bound) << ", "
          << fmt(rep.upper_bound.as_double()) << "]\n"
          << "  slope at 0: " << fmt(rep.slope_at_zero) << "\n"
          << "  slope at inf: " << fmt(rep.slope_at_infinity.as_double()) << "\n"
          << "  residuals: gap=" << fmt(rep.duality_gap)
          << " lambda_foc=" << fmt(rep.lambda_foc_residual)
          << " q_var=" << fmt(rep.q_variational_residual) << "\n"
          << "  dual argmax measures: " << rep.argmax_measures.size() << "\n"
          << "  penalty table (" << rep.penalty_at.size() << " measures):\n";
        for (const auto& e : rep.penalty_at)
            t << "    " << e.measure << ": E_Q[B]=" << fmt(e.expectation)
              << " alpha="
              << (e.alpha.is_finite() ? fmt(e.alpha.value()) : "+inf") << "\n";
        emit(t.str(), out_path);
    }
    return kExitOk;
}

int cmd_maximize(const std::string& market_path, const UtilityFlags& uf,
                 const ClaimFlags& cf, double x0, bool as_json,
                 const std::string& out_path) {
    LoadedMarket lm = load_market_file(market_path);
    Utility u = uf.build();
    Vector B = cf.resolve(lm);
    PrimalSolution ps = maximize(lm.market, u, B, x0);
    if (!ps.converged) return kExitNonConvergence;
    json j{{"value", ps.value},
           {"h_star", vec_to_json(ps.h_star)},
           {"f_B", vec_to_json(ps.f_B)},
           {"gradient_residual", ps.gradient_residual},
           {"unique", ps.unique},
           {"dropped_assets", ps.dropped_assets},
           {"admissibility_scale", ps.admissibility_scale}};
    if (as_json) {
        emit(j.dump(2) + "\n", out_path);
    } else {
        std::ostringstream t;
        t << "primal maximization report\n"
          << "  value: " << fmt(ps.value) << "\n  h*:";
        for (int k = 0; k < ps.h_star.size(); ++k) t << " " << fmt(ps.h_star[k]);
        t << "\n  gradient residual: " << fmt(ps.gradient_residual)
          << "\n  admissibility scale (min c with h.dS >= -cW): "
          << fmt(ps.admissibility_scale) << "\n";
        if (!ps.dropped_assets.empty()) {
            t << "  warning: dropped degenerate assets:";
            for (int a : ps.dropped_assets) t << " " << a;
            t << "\n";
        }
        emit(t.str(), out_path);
    }
    return kExitOk;
}

int cmd_dual(const std::string& market_path, const UtilityFlags& uf,
             const ClaimFlags& cf, double x0, bool as_json,
             const std::string& out_path) {
    LoadedMarket lm = load_market_file(market_path);
    Utility u = uf.build();
    Vector B = cf.resolve(lm);
    DualSolution ds = minimize_dual(lm.market, u, B, x0);
    PrimalSolution ps = maximize(lm.market, u, B, x0);
    if (!ds.converged) return kExitNonConvergence;
    json j{{"value", ds.value},
           {"lambda_star", ds.lambda_star},
           {"q_star", vec_to_json(ds.q_star)},
           {"foc_lambda_residual", ds.foc_lambda_residual},
           {"foc_q_residual", ds.foc_q_residual},
           {"f_B_recovered", vec_to_json(ds.f_B_recovered)},
           {"duality_gap", std::fabs(ps.value - ds.value)},
           {"iterations", ds.iterations}};
    if (as_json) {
        emit(j.dump(2) + "\n", out_path);
    } else {
        std::ostringstream t;
        t << "dual minimization report\n"
          << "  value: " << fmt(ds.value) << "\n"
          << "  lambda*: " << fmt(ds.lambda_star) << "\n  q*:";
        for (int k = 0; k < ds.q_star.size(); ++k) t << " " << fmt(ds.q_star[k]);
        t << "\n  residuals: lambda_foc=" << fmt(ds.foc_lambda_residual)
          << " q_var=" << fmt(ds.foc_q_residual) << "\n"
          << "  duality gap vs primal: " << fmt(std::fabs(ps.value - ds.value))
          << "\n";
        emit(t.str(), out_path);
    }
    return kExitOk;
}

int cmd_example(int which, double delta, double p1, double ratio, int N,
                double gamma, bool as_json, const std::string& out_path) {
    auto atoms = ExpMixtureMarket::default_atoms(N, p1, ratio);
    ExpMixtureMarket::Claim claim =
        which == 2
            ? ExpMixtureMarket::Claim(ExpMixtureMarket::DeltaYClaim{delta})
            : ExpMixtureMarket::Claim(ExpMixtureMarket::BoundedAlphaClaim{
                  [](double, double) { return 0.0; }, 0.0});

    ExpMixtureMarket ex(atoms, gamma, claim);
    ExpMixtureMarket ex0(atoms, gamma, ExpMixtureMarket::ZeroClaim{});

    auto oh = ex.optimal_h();
    auto rd = ex.dual_regular_density();
    auto sm = ex.singular_mass();
    auto sb = ex.singular_bounds();
    double hedge = hedging_delta(ex, ex0);
    CompatibilityReport comp =
        check_compatible(ex, Utility::exponential(gamma));
    SuitabilityReport suit = check_suitable(ex);
    AdmissibilityReport adm =
        claim_admissible(ex.claim_descriptor(), Utility::exponential(gamma));

    double expected_h = which == 2 ? (1.0 - gamma * delta) / gamma : 1.0 / gamma;
    double expected_hedge = which == 2 ? -delta : 0.0;
    double route_reldiff = std::fabs(sm.closed_form - sm.quadrature) /
                           std::max(std::fabs(sm.closed_form), 1e-300);
    double ez = 0.0;
    for (const auto& a : ex.atoms()) ez += a.p * a.z;

    struct Assertion {
        std::string name;
        bool pass;
    };
    std::vector<Assertion> asserts = {
        {"h_star_at_boundary", oh.attained_at_boundary &&
                                   std::fabs(oh.h_star - expected_h) <= 1e-12},
        {"singular_mass_positive", sm.value() > 0.0},
        {"singular_mass_routes_agree", route_reldiff <= 1e-8},
        {"excess_hedge",
         std::fabs(hedge - expected_hedge) <= (which == 2 ? 1e-12 : 1e-10)},
    };
    if (which == 2)
        asserts.push_back({"covariance_positive_hedge_negative",
                           delta * ez > 0.0 && hedge < 0.0});
    else
        asserts.push_back({"bounded_claim_zero_singular_action",
                           sb.claim_in_m_uhat});

    bool all_pass = true;
    for (const auto& a : asserts) all_pass = all_pass && a.pass;

    json j{{"which", which},
           {"gamma", gamma},
           {"h_star", oh.h_star},
           {"attained_at_boundary", oh.attained_at_boundary},
           {"f_B", "h_star * S1"},
           {"normalizer", rd.normalizer},
           {"entropy_regular_part", rd.entropy},
           {"singular_mass",
            {{"closed_form", sm.closed_form},
             {"quadrature", sm.quadrature},
             {"relative_difference", route_reldiff}}},
           {"hedging_delta", hedge},
           {"bounds",
            {{"L", sb.L.as_double()},
             {"l", sb.l.is_pos_inf() ? json("+inf") : json(sb.l.as_double())},
             {"lower_coeff", sb.lower_coeff},
             {"upper_coeff", sb.upper_coeff.as_double()}}},
           {"loss_variable",
            {{"suitable", suit.suitable},
             {"strongly_compatible", comp.strong},
             {"compatible", comp.weak}}},
           {"claim_admissibility",
            {{"gains", adm.gains},
             {"positive_bound", adm.positive_bound},
             {"eps_condition", adm.eps_condition == TriState::yes}}},
           {"covariance_B_S1", which == 2 ? delta * ez : 0.0}};
    json ja = json::array();
    for (const auto& a : asserts) ja.push_back({{a.name, a.pass ? "PASS" : "FAIL"}});
    j["assertions"] = ja;

    if (as_json) {
        emit(j.dump(2) + "\n", out_path);
    } else {
        std::ostringstream t;
        t << "example " << which << " (gamma=" << fmt(gamma);
        if (which == 2) t << ", delta=" << fmt(delta);
        t << ", N=" << N << ", p1=" << fmt(p1) << ", r=" << fmt(ratio) << ")\n"
          << "  h*: " << fmt(oh.h_star)
          << (oh.attained_at_boundary ? " (boundary)" : " (interior)") << "\n"
          << "  optimal claim: f_B = " << fmt(oh.h_star) << " * S1\n"
          << "  normalizer E[e^{-gamma(h* S1 - B)}]: " << fmt(rd.normalizer)
          << "\n"
          << "  H(Q^r | P): " << fmt(rd.entropy) << "\n"
          << "  singular mass Q^s(-B) + ||Q^s||: closed=" << fmt(sm.closed_form)
          << " quadrature=" << fmt(sm.quadrature) << " reldiff="
          << fmt(route_reldiff) << "\n"
          << "  excess hedge h*_B - h*_0: " << fmt(hedge) << "\n"
          << "  tail exponents: L=" << fmt(sb.L.as_double()) << " l="
          << (sb.l.is_pos_inf() ? "+inf" : fmt(sb.l.as_double())) << "\n"
          << "  singular action per unit norm in [" << fmt(sb.lower_coeff)
          << ", " << fmt(sb.upper_coeff.as_double()) << "]\n"
          << "  W: suitable=" << (suit.suitable ? "yes" : "no")
          << " strongly_compatible=" << (comp.strong ? "yes" : "no")
          << " compatible=" << (comp.weak ? "yes" : "no") << "\n";
        if (which == 2)
            t << "  Cov(B, S1) = delta E[Z] Var[Y] = " << fmt(delta * ez)
              << " (positive while the excess hedge is negative)\n";
        for (const auto& a : asserts)
            t << "  [" << (a.pass ? "PASS" : "FAIL") << "] " << a.name << "\n";
        emit(t.str(), out_path);
    }
    return all_pass ? kExitOk : kExitSuiteFailure;
}

int cmd_verify(std::uint64_t seed, int fuzz, const std::string& only_suite,
               const std::vector<std::string>& tol_overrides, bool as_json,
               const std::string& out_path) {
    std::vector<verify::SuiteResult> results;
    if (only_suite.empty()) {
        results = verify::run_all(seed, fuzz);
    } else if (only_suite == "duality") {
        results.push_back(verify::duality_suite(seed, fuzz));
    } else if (only_suite == "oracle") {
        results.push_back(verify::oracle_suite(seed));
    } else if (only_suite == "example2") {
        results.push_back(verify::example2_suite());
    } else if (only_suite == "example1") {
        results.push_back(verify::example1_suite());
    } else if (only_suite == "prices") {
        results.push_back(verify::price_route_suite(seed + 2));
    } else if (only_suite == "axioms") {
        results.push_back(verify::axiom_suite(seed + 3));
    } else if (only_suite == "fatou") {
        results.push_back(verify::fatou_suite(seed + 4));
    } else if (only_suite == "volume") {
        results.push_back(verify::volume_suite(seed + 5));
    } else if (only_suite == "norms") {
        results.push_back(verify::norm_suite(seed + 6));
    } else {
        std::cerr << "unknown suite: " << only_suite << "\n";
        return kExitValidation;
    }

    // reviewer knobs: retarget individual check bounds, e.g.
    // --tol max_duality_gap=1e-9
    for (const std::string& ov : tol_overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos) {
            std::cerr << "bad --tol override (want name=value): " << ov << "\n";
            return kExitValidation;
        }
        std::string name = ov.substr(0, eq);
        double bound = std::strtod(ov.c_str() + eq + 1, nullptr);
        bool found = false;
        for (auto& s : results)
            for (auto& c : s.checks)
                if (c.name == name) {
                    c.bound = bound;
                    found = true;
                }
        if (!found) {
            std::cerr << "unknown check in --tol override: " << name << "\n";
            return kExitValidation;
        }
    }

    bool all_pass = true;
    if (as_json) {
        json j = json::array();
        for (const auto& s : results) {
            json checks = json::array();
            for (const auto& c : s.checks)
                checks.push_back({{"name", c.name},
                                  {"value", c.value},
                                  {"bound", c.bound},
                                  {"pass", c.pass()}});
            j.push_back({{"suite", s.name}, {"pass", s.pass()}, {"checks", checks}});
            all_pass = all_pass && s.pass();
        }
        emit(j.dump(2) + "\n", out_path);
    } else {
        std::ostringstream t;
        t << "verification suites (seed=" << seed << ")\n";
        for (const auto& s : results) {
            all_pass = all_pass && s.pass();
            t << "  suite " << s.name << ": " << (s.pass() ? "PASS" : "FAIL")
              << "\n";
            for (const auto& c : s.checks)
                t << "    " << (c.pass() ? "ok  " : "FAIL") << " " << c.name
                  << " = " << fmt(c.value) << " (bound " << fmt(c.bound)
                  << ")\n";
        }
        t << (all_pass ? "ALL SUITES PASS\n" : "SUITE FAILURES PRESENT\n");
        emit(t.str(), out_path);
    }
    return all_pass ? kExitOk : kExitSuiteFailure;
}

int cmd_norm(const std::string& market_path, const UtilityFlags& uf,
             const ClaimFlags& cf, bool as_json, const std::string& out_path) {
    LoadedMarket lm = load_market_file(market_path);
    Utility u = uf.build();
    Vector B = cf.resolve(lm);
    YoungPair yp(u);
    std::vector<double> vals(B.size()), probs(B.size());
    for (int i = 0; i < B.size(); ++i) {
        vals[i] = B[i];
        probs[i] = lm.market.probs()[i];
    }
    auto dist = DiscreteDistribution::from_values(vals, probs);
    double lux = luxemburg_norm(dist, yp);
    double dual = orlicz_dual_norm(dist, yp);
    json j{{"luxemburg_norm", lux},
           {"orlicz_dual_norm", dual},
           {"beta", yp.beta()}};
    if (as_json) {
        emit(j.dump(2) + "\n", out_path);
    } else {
        std::ostringstream t;
        t << "Orlicz norm report\n"
          << "  Luxemburg norm N(f): " << fmt(lux) << "\n"
          << "  Orlicz dual norm ||f||: " << fmt(dual) << "\n"
          << "  beta (kink of the Young pair): " << fmt(yp.beta()) << "\n";
        emit(t.str(), out_path);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-period utility indifference pricing in Orlicz duality"};
    app.require_subcommand(1);

    std::string market_path, out_path, claim_spec, only_suite;
    bool as_json = false;
    double x0 = 0.0;

    std::uint64_t seed = 42;
    if (const char* env = std::getenv("ORLICZ_INDIFF_SEED"))
        seed = std::strtoull(env, nullptr, 10);

    UtilityFlags uf_price, uf_max, uf_dual, uf_norm;
    ClaimFlags cf_price, cf_max, cf_dual, cf_norm;

    auto add_common = [&](CLI::App* cmd, UtilityFlags& uf, ClaimFlags& cf,
                          bool with_x0) {
        cmd->add_option("--market", market_path, "market file (JSON)")
            ->required();
        uf.attach(cmd);
        cf.attach(cmd);
        if (with_x0) cmd->add_option("--x0", x0, "initial endowment");
        cmd->add_flag("--json", as_json, "machine-readable output");
        cmd->add_option("--out", out_path, "write the report to a file");
    };

    CLI::App* price_cmd = app.add_subcommand("price", "indifference price report");
    add_common(price_cmd, uf_price, cf_price, true);

    CLI::App* max_cmd = app.add_subcommand("maximize", "primal utility maximization");
    add_common(max_cmd, uf_max, cf_max, true);

    CLI::App* dual_cmd = app.add_subcommand("dual", "dual minimization");
    add_common(dual_cmd, uf_dual, cf_dual, true);

    int which = 2, N = 50;
    double delta = 0.3, p1 = 0.99, ratio = 0.1, ex_gamma = 1.0;
    CLI::App* ex_cmd = app.add_subcommand("example", "mixture-family examples");
    ex_cmd->add_option("--which", which, "1 (bounded claim) or 2 (delta Y)")
        ->check(CLI::IsMember({1, 2}));
    ex_cmd->add_option("--delta", delta, "delta for example 2");
    ex_cmd->add_option("--p1", p1, "weight of the z = 1 atom");
    ex_cmd->add_option("--r", ratio, "geometric ratio of the tail weights");
    ex_cmd->add_option("--N", N, "number of Z atoms");
    ex_cmd->add_option("--gamma", ex_gamma, "risk aversion");
    ex_cmd->add_flag("--json", as_json, "machine-readable output");
    ex_cmd->add_option("--out", out_path, "write the report to a file");

    int fuzz = 100;
    std::vector<std::string> tol_overrides;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the verification suites");
    verify_cmd->add_option("--seeds", fuzz, "number of fuzzed markets");
    verify_cmd->add_option("--seed", seed, "base RNG seed");
    verify_cmd->add_option("--suite", only_suite,
                           "run one suite: duality|oracle|example1|example2|"
                           "prices|axioms|fatou|volume|norms");
    verify_cmd->add_option("--tol", tol_overrides,
                           "override a check bound, e.g. max_duality_gap=1e-9");
    verify_cmd->add_flag("--json", as_json, "machine-readable output");
    verify_cmd->add_option("--out", out_path, "write the report to a file");

    CLI::App* norm_cmd = app.add_subcommand("norm", "Luxemburg/Orlicz norms of a claim");
    add_common(norm_cmd, uf_norm, cf_norm, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (price_cmd->parsed())
            return cmd_price(market_path, uf_price, cf_price, x0, as_json, out_path);
        if (max_cmd->parsed())
            return cmd_maximize(market_path, uf_max, cf_max, x0, as_json, out_path);
        if (dual_cmd->parsed())
            return cmd_dual(market_path, uf_dual, cf_dual, x0, as_json, out_path);
        if (ex_cmd->parsed())
            return cmd_example(which, delta, p1, ratio, N, ex_gamma, as_json, out_path);
        if (verify_cmd->parsed())
            return cmd_verify(seed, fuzz, only_suite, tol_overrides, as_json,
                              out_path);
        if (norm_cmd->parsed())
            return cmd_norm(market_path, uf_norm, cf_norm, as_json, out_path);
    } catch (const ValidationError& e) {
        std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
        return kExitValidation;
    } catch (const MonotonicityError& e) {
        std::cerr << "error [monotonicity]: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const DualError& e) {
        std::cerr << "error [dual]: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error [validation]: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    }
    return kExitOk;
}

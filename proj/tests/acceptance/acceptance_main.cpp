// Acceptance gate: runs every verification suite at its pinned tolerance and
// prints one PASS/FAIL line per criterion, with the wall-clock budget each
// criterion must respect. Exit code 0 iff everything passes.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "indiff/verify.hpp"

using indiff::verify::Check;
using indiff::verify::SuiteResult;

namespace {

struct Criterion {
    std::string label;
    bool pass = true;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    std::string detail;
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string worst_check(const SuiteResult& s) {
    const Check* worst = nullptr;
    for (const auto& c : s.checks)
        if (!worst || c.value - c.bound > worst->value - worst->bound)
            worst = &c;
    if (!worst) return "no checks";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s = %.3e (bound %.3e)",
                  worst->name.c_str(), worst->value, worst->bound);
    return buf;
}

}  // namespace

int main() {
    const std::uint64_t seed = 42;
    std::vector<Criterion> criteria;

    auto timed = [&](const std::string& label, double budget,
                     auto&& fn) -> SuiteResult {
        double t0 = now_seconds();
        SuiteResult s = fn();
        double dt = now_seconds() - t0;
        Criterion c;
        c.label = label;
        c.pass = s.pass() && dt <= budget;
        c.seconds = dt;
        c.budget_seconds = budget;
        c.detail = worst_check(s);
        if (dt > budget) c.detail += " [over time budget]";
        criteria.push_back(c);
        return s;
    };

    // 1. strong duality on 100 seeded random markets, gamma in {0.5, 1, 2}
    SuiteResult duality = timed("criterion 1: finite-state strong duality", 10.0,
                                [&] { return indiff::verify::duality_suite(seed, 100); });

    // 2. oracle agreement and exhaustive weak duality on 10 markets
    SuiteResult oracle = timed("criterion 2: oracle agreement", 30.0,
                               [&] { return indiff::verify::oracle_suite(seed, 10); });

    // 3. delta-claim example reproduction (delta = 0.3, default weights)
    timed("criterion 3: example 2 reproduction", 1.0,
          [&] { return indiff::verify::example2_suite(); });

    // 4. bounded-claim example reproduction (alpha == 0 and a varying alpha)
    timed("criterion 4: example 1 reproduction", 2.0,
          [&] { return indiff::verify::example1_suite(); });

    // 5. three price routes agree; replicable claims price at c
    timed("criterion 5: price-route agreement", 10.0,
          [&] { return indiff::verify::price_route_suite(seed + 2, 50); });

    // 6. risk-measure axioms plus continuity from below
    {
        double t0 = now_seconds();
        SuiteResult ax = indiff::verify::axiom_suite(seed + 3, 100);
        SuiteResult fa = indiff::verify::fatou_suite(seed + 4);
        double dt = now_seconds() - t0;
        Criterion c;
        c.label = "criterion 6: risk-measure axiom suite";
        c.pass = ax.pass() && fa.pass() && dt <= 10.0;
        c.seconds = dt;
        c.budget_seconds = 10.0;
        c.detail = worst_check(ax) + "; fatou " + worst_check(fa);
        criteria.push_back(c);
    }

    // 7. volume asymptotics on 10 instances
    timed("criterion 7: volume asymptotics", 10.0,
          [&] { return indiff::verify::volume_suite(seed + 5, 10); });

    // 8. Orlicz machinery
    timed("criterion 8: Orlicz norm machinery", 1.0,
          [&] { return indiff::verify::norm_suite(seed + 6); });

    // 9. first-order conditions at every converged dual solution above
    {
        Criterion c;
        c.label = "criterion 9: dual first-order conditions";
        c.budget_seconds = 0.0;
        c.seconds = 0.0;
        double focl = 0.0, focq = 0.0;
        for (const SuiteResult* s : {&duality, &oracle})
            for (const auto& ch : s->checks) {
                if (ch.name == "max_lambda_foc_residual")
                    focl = std::max(focl, ch.value);
                if (ch.name == "max_q_variational_residual")
                    focq = std::max(focq, ch.value);
            }
        c.pass = focl <= 1e-9 && focq <= 1e-8;
        char buf[120];
        std::snprintf(buf, sizeof(buf),
                      "lambda foc = %.3e (bound 1e-9), q residual = %.3e (bound 1e-8)",
                      focl, focq);
        c.detail = buf;
        criteria.push_back(c);
    }

    bool all = true;
    for (const auto& c : criteria) {
        all = all && c.pass;
        if (c.budget_seconds > 0.0)
            std::printf("[%s] %s: %s (%.2fs <= %.0fs)\n",
                        c.pass ? "PASS" : "FAIL", c.label.c_str(),
                        c.detail.c_str(), c.seconds, c.budget_seconds);
        else
            std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL",
                        c.label.c_str(), c.detail.c_str());
    }
    std::printf("%s\n", all ? "ACCEPTANCE: ALL CRITERIA PASS"
                            : "ACCEPTANCE: FAILURES PRESENT");
    return all ? 0 : 1;
}

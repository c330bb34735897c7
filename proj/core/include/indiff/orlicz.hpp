#pragma once

#include "indiff/distribution.hpp"
#include "indiff/extended.hpp"
#include "indiff/utility.hpp"

namespace indiff {

/// Luxemburg norm N(f) = inf{ c > 0 : E[u_hat(f/c)] <= 1 } on a finite
/// distribution. Bisection over a doubling bracket; 0 iff f == 0 a.s.
double luxemburg_norm(const DiscreteDistribution& f, const YoungPair& yp);

/// Orlicz (dual) norm on a finite distribution:
///   ||g|| = sup{ E[|f g|] : E[u_hat(f)] <= 1 }.
/// Solved through the KKT system a_i = mu * u_hat'(f_i) with the constraint
/// active, mu located by bisection; projected ascent fallback if the
/// multiplier cannot be bracketed.
double orlicz_dual_norm(const DiscreteDistribution& g, const YoungPair& yp);

enum class TriState { yes, no, inconclusive };

/// Integrability report for a claim B against a utility u:
///   gains:          E[u(f - B)] < +inf for test f
///   positive_bound: E[u(-B+)] > -inf
///   eps_condition:  E[u(-(1+eps) B+)] > -inf for some eps > 0
///   L = sup{ beta : E[u_hat(beta B+)] < inf },  l analogously for B-.
struct AdmissibilityReport {
    bool gains = false;
    bool positive_bound = false;
    TriState eps_condition = TriState::no;
    ExtReal L;
    ExtReal l;
    bool divergent_integrals = false;
};

/// Finite distributions: every moment is finite, so everything passes and
/// L = l = +inf.
AdmissibilityReport claim_admissible(const DiscreteDistribution& B,
                                     const Utility& u);

/// Semi-analytic claim against Y ~ Exp(1): B = pos_coeff * Y - neg_coeff * Y
/// up to a bounded remainder. Covers the delta-claims (pos_coeff = delta) and
/// bounded claims (both coefficients zero) of the mixture family.
struct ExpTailClaim {
    double pos_coeff = 0.0;   // linear growth rate of B+ in Y
    double neg_coeff = 0.0;   // linear growth rate of B- in Y
    double bound = 0.0;       // sup of the bounded remainder
};

AdmissibilityReport claim_admissible(const ExpTailClaim& B, const Utility& u);

/// Numeric tail classification of E[u_hat(g(Y))] for Y ~ Exp(1): finite iff
/// log u_hat(g(y)) - y keeps falling along a geometric grid (slope rule; the
/// closed forms of the exponential family bypass this).
bool uhat_exp_tail_finite(const YoungPair& yp,
                          const std::function<double(double)>& g);

}  // namespace indiff

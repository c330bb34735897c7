#pragma once

#include <stdexcept>

#include "indiff/market.hpp"
#include "indiff/utility.hpp"

namespace indiff {

class DualError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DualSolution {
    double lambda_star = 0.0;
    Vector q_star;             // regular part: a martingale measure
    double value = 0.0;        // dual objective at the minimizer
    double foc_lambda_residual = 0.0;
    double foc_q_residual = 0.0;   // variational-inequality residual
    Vector f_B_recovered;      // -Phi'(lambda q/p) + B on {q > 0}
    bool converged = false;
    int iterations = 0;
};

/// Unique positive root of E[(dQ/dP) Phi'(lambda dQ/dP)] + c = 0, located by
/// safeguarded Newton/bisection on [1e-12, 1e12]. Throws DualError
/// ("lambda-bracket-failure") when the root cannot be bracketed there.
double lambda_foc(const Utility& u, const Vector& q_density, const Vector& p,
                  double c);

/// Closed form of the same root for u(x) = -exp(-gamma x):
///   lambda = gamma * exp(-gamma c - H(Q|P)).
/// Kept as an independent cross-check of the generic root-find.
double exp_lambda_foc_closed_form(double gamma, const Vector& q_density,
                                  const Vector& p, double c);

/// Relative entropy H(Q|P) = E[(dQ/dP) log(dQ/dP)] on a finite space.
double relative_entropy(const Vector& q, const Vector& p);

/// Minimizes lambda (x - E_Q[B]) + E[Phi(lambda dQ/dP)] over lambda > 0 and
/// the martingale polytope. Alternating scheme: exact lambda root per step,
/// projected-gradient updates for Q kept strictly interior, stopping on the
/// first-order residuals (lambda FOC and the variational inequality).
DualSolution minimize_dual(const FiniteMarket& m, const Utility& u,
                           const Vector& B, double x);

/// argmin H(Q|P) over the polytope, via the primal-dual link
/// dQ/dP ~ exp(-gamma h . dS) with h from the zero-claim primal problem.
MartingaleMeasure minimal_entropy_measure(const FiniteMarket& m, double gamma);

/// |primal value - dual value|; strong duality makes the exact value 0.
double duality_gap(const FiniteMarket& m, const Utility& u, const Vector& B,
                   double x);

/// Variational-inequality residual of (lambda, q) for the claim problem:
/// E_q[Phi'(lambda q/p) - B] minus its minimum over the polytope.
double dual_q_residual(const FiniteMarket& m, const Utility& u, const Vector& B,
                       double lambda, const Vector& q);

}  // namespace indiff

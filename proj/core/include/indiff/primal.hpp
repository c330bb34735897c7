#pragma once

#include <vector>

#include "indiff/market.hpp"
#include "indiff/utility.hpp"

namespace indiff {

struct PrimalSolution {
    Vector h_star;             // optimal strategy (zeros on dropped assets)
    double value = 0.0;        // U_B^W(x)
    Vector f_B;                // terminal wealth x + h* . dS
    double gradient_residual = 0.0;
    bool converged = false;
    bool unique = true;        // false when the Hessian is singular at the end
    std::vector<int> dropped_assets;  // columns with dS == 0
    /// minimal c with h* . dS >= -c W (diagnostic; never binds on finite spaces)
    double admissibility_scale = 0.0;
};

/// Maximizes E[u(x + h . dS - B)] over h by damped Newton with Armijo
/// backtracking from h = 0. The objective is smooth and concave; strictly
/// concave along the span of dS under no-arbitrage.
PrimalSolution maximize(const FiniteMarket& m, const Utility& u,
                        const Vector& B, double x);

/// log(-U_B(x)) for the exponential utility, computed in the log domain:
///   log E[exp(-gamma (x + h . dS - B))] minimized over h.
/// Stable for claims scaled by large volumes. Also returns the minimizer.
double exp_log_primal(const FiniteMarket& m, double gamma, const Vector& B,
                      double x, Vector* h_out = nullptr);

}  // namespace indiff

#pragma once

#include "indiff/market.hpp"
#include "indiff/utility.hpp"

namespace indiff {
namespace oracle {

/// Brute-force verifiers. They re-derive everything from the definitions and
/// share nothing with the solvers beyond the type definitions, on purpose.

struct GridSpec {
    double half_width = 4.0;  // initial strategy box half-width
    int steps = 33;           // points per axis
    int refine_rounds = 8;    // zoom-ins around the best cell
    int lambda_steps = 121;   // log-spaced lambda grid in [1e-4, 1e4]
    int q_steps = 41;         // grid per polytope tangent direction
};

/// Grid maximum of E[u(x + h . dS - B)] over strategies, with adaptive
/// refinement around the best cell (d <= 2).
double grid_primal(const FiniteMarket& m, const Utility& u, const Vector& B,
                   double x, const GridSpec& spec = {});

struct GridDualResult {
    double min_value = 0.0;        // grid minimum of the dual objective
    double max_primal_on_grid = 0.0;
    /// min over dual grid minus max over primal grid; weak duality makes
    /// this nonnegative up to evaluation noise.
    double weak_duality_margin = 0.0;
};

/// Grid minimum of lambda (x - E_Q[B]) + E[Phi(lambda dQ/dP)] over a
/// lambda log-grid and a grid on the polytope (dimension <= 2), plus the
/// exhaustive weak-duality comparison against the primal grid.
GridDualResult grid_dual(const FiniteMarket& m, const Utility& u,
                         const Vector& B, double x, const GridSpec& spec = {});

}  // namespace oracle
}  // namespace indiff

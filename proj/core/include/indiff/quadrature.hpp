#pragma once

#include <functional>

namespace indiff {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int intervals = 0;
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f on [a, b].
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double rel_tol = 1e-12,
                              double abs_tol = 1e-15, int max_intervals = 4000);

/// Integral of f(y) over [0, inf) where |f(y)| <= amplitude * exp(-rate * y)
/// eventually, with rate > 0. The tail beyond y_max is cut once the remainder
/// bound amplitude * exp(-rate * y_max) / rate drops below tail_bound.
QuadResult integrate_exponential_tail(const std::function<double(double)>& f,
                                      double rate, double log_amplitude = 0.0,
                                      double tail_bound = 1e-16,
                                      double rel_tol = 1e-12);

}  // namespace indiff

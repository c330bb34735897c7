#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace indiff {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Bisection on a bracketing interval [lo, hi] with f(lo), f(hi) of opposite
/// sign (or zero). Stops at relative width rel_tol or max_iter.
inline RootResult bisect(const std::function<double(double)>& f, double lo,
                         double hi, double rel_tol = 1e-14,
                         int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    RootResult r;
    if (flo == 0.0) { r = {lo, 0.0, 0, true}; return r; }
    if (fhi == 0.0) { r = {hi, 0.0, 0, true}; return r; }
    if ((flo > 0) == (fhi > 0))
        throw std::invalid_argument("bisect: interval does not bracket a root");
    int it = 0;
    for (; it < max_iter; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm > 0) == (fhi > 0)) { hi = mid; fhi = fm; }
        else { lo = mid; flo = fm; }
        if (hi - lo <= rel_tol * (std::fabs(lo) + std::fabs(hi) + 1e-300)) break;
    }
    r.x = 0.5 * (lo + hi);
    r.fx = f(r.x);
    r.iterations = it;
    r.converged = true;
    return r;
}

/// Safeguarded Newton for a monotone f on a bracket [lo, hi]: falls back to a
/// bisection step whenever the Newton step leaves the current bracket.
inline RootResult newton_bisect(const std::function<double(double)>& f,
                                const std::function<double(double)>& df,
                                double lo, double hi, double x0,
                                double f_tol = 1e-14, int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0, true};
    if (fhi == 0.0) return {hi, 0.0, 0, true};
    if ((flo > 0) == (fhi > 0))
        throw std::invalid_argument("newton_bisect: no sign change on bracket");
    double x = std::min(std::max(x0, lo), hi);
    RootResult r;
    for (int it = 0; it < max_iter; ++it) {
        double fx = f(x);
        r = {x, fx, it + 1, true};
        if (std::fabs(fx) <= f_tol) return r;
        if ((fx > 0) == (fhi > 0)) { hi = x; fhi = fx; }
        else { lo = x; flo = fx; }
        double d = df(x);
        double x_new = (d != 0.0) ? x - fx / d : lo - 1.0;
        if (!(x_new > lo && x_new < hi)) x_new = 0.5 * (lo + hi);
        if (hi - lo <= 1e-16 * (std::fabs(lo) + std::fabs(hi) + 1e-300)) {
            r.x = x_new; r.fx = f(x_new);
            return r;
        }
        x = x_new;
    }
    r.converged = std::fabs(r.fx) <= 1e3 * f_tol;
    return r;
}

/// Expands a bracket on (0, inf) multiplicatively around [lo, hi] until f
/// changes sign; returns false if no sign change within [lo_cap, hi_cap].
inline bool bracket_positive(const std::function<double(double)>& f,
                             double& lo, double& hi, double lo_cap = 1e-12,
                             double hi_cap = 1e12) {
    double flo = f(lo), fhi = f(hi);
    while ((flo > 0) == (fhi > 0)) {
        bool moved = false;
        if (lo > lo_cap) { lo *= 0.25; flo = f(lo); moved = true; }
        if ((flo > 0) == (fhi > 0) && hi < hi_cap) {
            hi *= 4.0; fhi = f(hi); moved = true;
        }
        if (!moved) return false;
    }
    return true;
}

/// Maximizes a concave 1-D function by golden-section search on [lo, hi].
inline double golden_max(const std::function<double(double)>& f, double lo,
                         double hi, double x_tol = 1e-12, int max_iter = 300) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
        if (fc > fd) { b = d; d = c; fd = fc; c = b - invphi * (b - a); fc = f(c); }
        else { a = c; c = d; fc = fd; d = a + invphi * (b - a); fd = f(d); }
    }
    return 0.5 * (a + b);
}

/// Expands an interval around x0 (additive doubling) until the maximum of a
/// concave f is interior: f(mid) >= max(f(lo), f(hi)).
inline void expand_concave_bracket(const std::function<double(double)>& f,
                                   double x0, double& lo, double& hi,
                                   int max_rounds = 200) {
    double w = 1.0;
    lo = x0 - w; hi = x0 + w;
    for (int it = 0; it < max_rounds; ++it) {
        double fm = f(0.5 * (lo + hi));
        double flo = f(lo), fhi = f(hi);
        if (fm >= flo && fm >= fhi) return;
        if (fhi > fm) { hi += w; }
        if (flo > fm) { lo -= w; }
        w *= 2.0;
    }
}

inline bool nearly_equal(double a, double b, double tol) {
    return std::fabs(a - b) <= tol;
}

}  // namespace indiff

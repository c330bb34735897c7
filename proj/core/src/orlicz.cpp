#include "indiff/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "indiff/numeric.hpp"
#include "indiff/quadrature.hpp"

namespace indiff {

namespace {

// E[u_hat(f/c)], with the exponential overflow guarded: once a single term
// already exceeds the level-1 test, the exact value no longer matters.
double uhat_moment(const DiscreteDistribution& f, const YoungPair& yp,
                   double c) {
    double s = 0.0;
    for (const auto& a : f.atoms()) {
        double v = yp.u_hat(a.value / c);
        if (!std::isfinite(v) || a.prob * v > 4.0) return 4.0;
        s += a.prob * v;
        if (s > 4.0) return 4.0;
    }
    return s;
}

}  // namespace

double luxemburg_norm(const DiscreteDistribution& f, const YoungPair& yp) {
    if (f.is_zero()) return 0.0;
    auto excess = [&](double c) { return uhat_moment(f, yp, c) - 1.0; };
    double lo = f.max_abs_value() * 1e-3 + 1e-300, hi = lo;
    while (excess(hi) > 0.0 && hi < 1e300) hi *= 2.0;
    while (excess(lo) <= 0.0 && lo > 1e-300) lo *= 0.5;
    // norm is the root of E[u_hat(f/c)] = 1 (u_hat finite and continuous)
    auto r = bisect(excess, lo, hi, 1e-12, 200);
    return r.x;
}

namespace {

// f_i(mu) = argmax_{t >= 0} { a t - mu u_hat(t) }: inverse of u_hat' at
// a/mu, clipped at zero when a <= mu * u_hat'(0+) = mu * beta.
double kkt_coordinate(const YoungPair& yp, double a, double mu) {
    if (a <= mu * yp.beta() * (1.0 + 1e-15)) return 0.0;
    const Utility& u = yp.utility();
    if (u.is_exponential()) {
        double g = u.gamma();
        return std::log(a / (mu * g)) / g;  // u_hat'(t) = g e^{g t}
    }
    auto h = [&](double t) { return yp.u_hat_prime(t) - a / mu; };
    double hi = 1.0;
    int rounds = 0;
    while (h(hi) < 0 && rounds++ < 400) hi *= 2.0;
    return bisect(h, 0.0, hi, 1e-13, 200).x;
}

double orlicz_dual_norm_kkt(const DiscreteDistribution& g, const YoungPair& yp,
                            bool& ok) {
    std::vector<double> a(g.size()), p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        a[i] = std::fabs(g.atoms()[i].value);
        p[i] = g.atoms()[i].prob;
    }
    auto moment = [&](double mu) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double v = yp.u_hat(kkt_coordinate(yp, a[i], mu));
            if (!std::isfinite(v) || p[i] * v > 4.0) return 4.0;
            s += p[i] * v;
            if (s > 4.0) return 4.0;
        }
        return s;
    };
    auto excess = [&](double mu) { return moment(mu) - 1.0; };
    double a_max = *std::max_element(a.begin(), a.end());
    double lo = a_max * 1e-6 + 1e-300, hi = a_max + 1.0;
    ok = bracket_positive(excess, lo, hi, 1e-300, 1e306);
    if (!ok) return 0.0;
    double mu = bisect(excess, lo, hi, 1e-13, 200).x;
    double norm = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        norm += p[i] * a[i] * kkt_coordinate(yp, a[i], mu);
    return norm;
}

// Fallback: ascent of the linear objective along the active constraint
// surface, coordinates rescaled to keep E[u_hat(f)] = 1.
double orlicz_dual_norm_ascent(const DiscreteDistribution& g,
                               const YoungPair& yp) {
    std::size_t n = g.size();
    std::vector<double> a(n), p(n), f(n, 0.1);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = std::fabs(g.atoms()[i].value);
        p[i] = g.atoms()[i].prob;
    }
    auto rescale = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i] * yp.u_hat(f[i]);
        if (s <= 0.0) return;
        // one-dimensional scaling onto the constraint surface
        auto excess = [&](double c) {
            double t = 0.0;
            for (std::size_t i = 0; i < n; ++i) t += p[i] * yp.u_hat(f[i] * c);
            return t - 1.0;
        };
        double lo = 1e-8, hi = 1.0;
        while (excess(hi) < 0 && hi < 1e8) hi *= 2.0;
        double c = bisect(excess, lo, hi, 1e-13, 200).x;
        for (auto& v : f) v *= c;
    };
    rescale();
    double value = 0.0;
    for (int it = 0; it < 5000; ++it) {
        double step = 0.05 / (1.0 + it * 0.01);
        for (std::size_t i = 0; i < n; ++i)
            f[i] = std::max(0.0, f[i] + step * a[i]);
        rescale();
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += p[i] * a[i] * f[i];
        if (std::fabs(v - value) < 1e-12 * (1.0 + std::fabs(v)) && it > 100)
            break;
        value = v;
    }
    return value;
}

}  // namespace

double orlicz_dual_norm(const DiscreteDistribution& g, const YoungPair& yp) {
    if (g.is_zero()) return 0.0;
    bool ok = false;
    double v = orlicz_dual_norm_kkt(g, yp, ok);
    if (ok) return v;
    return orlicz_dual_norm_ascent(g, yp);
}

AdmissibilityReport claim_admissible(const DiscreteDistribution&,
                                     const Utility&) {
    AdmissibilityReport r;
    r.gains = true;
    r.positive_bound = true;
    r.eps_condition = TriState::yes;
    r.L = ExtReal::pos_inf();
    r.l = ExtReal::pos_inf();
    return r;
}

bool uhat_exp_tail_finite(const YoungPair& yp,
                          const std::function<double(double)>& g) {
    // v(y) = log u_hat(g(y)) - y; the integral converges iff v keeps falling
    // below zero along a doubling grid. u_hat is a black box that can
    // overflow, so the decision rests on the last finite pair; an overflow
    // before any usable pair is classified divergent (conservative).
    double prev = std::numeric_limits<double>::quiet_NaN();
    double last = prev, slope = 1.0;
    for (double y = 128.0; y <= 65536.0; y *= 2.0) {
        double uh = yp.u_hat(g(y));
        if (!std::isfinite(uh)) break;
        double v = std::log(std::max(uh, 1e-300)) - y;
        if (std::isfinite(prev)) slope = v - prev;
        prev = v;
        last = v;
    }
    if (!std::isfinite(last)) return false;  // not evaluable
    return last < 0.0 && slope < 0.0;
}

namespace {

// Is E[u_hat(s Y)] finite for Y ~ Exp(1)?  Closed form for exponential
// utilities (s gamma < 1); otherwise the numeric slope rule.
bool uhat_exp_moment_finite(const Utility& u, const YoungPair& yp, double s,
                            bool& divergent_flag) {
    if (s <= 0.0) return true;
    if (u.is_exponential()) return s * u.gamma() < 1.0;
    bool finite = uhat_exp_tail_finite(yp, [s](double y) { return s * y; });
    if (!finite) divergent_flag = true;
    return finite;
}

}  // namespace

AdmissibilityReport claim_admissible(const ExpTailClaim& B, const Utility& u) {
    AdmissibilityReport r;
    YoungPair yp(u);

    // gains: automatic when u is bounded above (exponential); for unbounded u,
    // B- <= neg_coeff * Y + bound is integrable, so the Jensen bound applies.
    r.gains = true;

    auto finite = [&](double s) {
        return uhat_exp_moment_finite(u, yp, s, r.divergent_integrals);
    };

    // E[u(-t B+)] > -inf <=> E[u_hat(t B+)] < inf; B+ grows like pos_coeff*Y.
    r.positive_bound = finite(B.pos_coeff);

    if (B.pos_coeff == 0.0) {
        r.eps_condition = TriState::yes;
    } else if (!r.positive_bound) {
        r.eps_condition = TriState::no;
    } else {
        r.eps_condition = TriState::inconclusive;
        for (int k = 0; k <= 40; ++k) {
            double eps = std::ldexp(1.0, -k);
            if (finite((1.0 + eps) * B.pos_coeff)) {
                r.eps_condition = TriState::yes;
                break;
            }
        }
    }

    // L = sup{ beta : E[u_hat(beta B+)] < inf }, by bisection on the
    // finite/infinite classifier; closed form 1/(gamma * coeff) when
    // exponential.
    auto tail_sup = [&](double coeff) -> ExtReal {
        if (coeff == 0.0) return ExtReal::pos_inf();
        if (u.is_exponential()) return ExtReal(1.0 / (u.gamma() * coeff));
        double lo = 1e-8, hi = 1.0;
        if (!finite(lo * coeff)) return ExtReal(0.0);
        while (finite(hi * coeff) && hi < 1e12) hi *= 2.0;
        if (hi >= 1e12) return ExtReal::pos_inf();
        for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
            double mid = 0.5 * (lo + hi);
            (finite(mid * coeff) ? lo : hi) = mid;
        }
        return ExtReal(0.5 * (lo + hi));
    };
    r.L = tail_sup(B.pos_coeff);
    r.l = tail_sup(B.neg_coeff);
    return r;
}

}  // namespace indiff

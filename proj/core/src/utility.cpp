#include "indiff/utility.hpp"

#include <cmath>
#include <stdexcept>

#include "indiff/numeric.hpp"

namespace indiff {

namespace {

// argmax_x { u(x) - x y } for concave u and y > 0. Uses the derivative root
// u'(x) = y when a derivative is available, golden section otherwise.
double conjugate_argmax(const Utility::Fn& u, const Utility::Fn* du, double y) {
    if (du) {
        auto g = [&](double x) { return (*du)(x)-y; };  // decreasing in x
        double lo = -1.0, hi = 1.0;
        int rounds = 0;
        while (g(lo) < 0 && rounds < 400) { lo = lo * 2 - 1; ++rounds; }
        rounds = 0;
        while (g(hi) > 0 && rounds < 400) { hi = hi * 2 + 1; ++rounds; }
        if (g(lo) < 0 || g(hi) > 0)
            throw std::runtime_error("conjugate: could not bracket u'(x) = y");
        auto r = bisect(g, lo, hi, 1e-15, 200);
        return r.x;
    }
    auto m = [&](double x) { return u(x) - x * y; };
    double lo, hi;
    expand_concave_bracket(m, 0.0, lo, hi);
    return golden_max(m, lo, hi, 1e-13);
}

}  // namespace

Utility Utility::exponential(double gamma) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("Utility::exponential: gamma must be > 0");
    Utility r;
    r.kind_ = Kind::exponential;
    r.gamma_ = gamma;
    r.u_ = [gamma](double x) { return -std::exp(-gamma * x); };
    r.u_prime_ = [gamma](double x) { return gamma * std::exp(-gamma * x); };
    r.u_dd_ = [gamma](double x) { return -gamma * gamma * std::exp(-gamma * x); };
    r.phi_ = [gamma](double y) {
        if (y == 0.0) return 0.0;  // y log y -> 0
        double t = y / gamma;
        return t * std::log(t) - t;
    };
    r.phi_prime_ = [gamma](double y) { return std::log(y / gamma) / gamma; };
    r.phi_dd_ = [gamma](double y) { return 1.0 / (gamma * y); };
    r.beta_ = gamma;          // u'(0)
    r.u_zero_ = -1.0;
    r.u_inf_ = ExtReal(0.0);  // bounded above
    r.u_inf_finite_ = true;
    return r;
}

Utility Utility::custom(Fn u, std::optional<Fn> u_prime) {
    Utility r;
    r.kind_ = Kind::custom;
    r.u_ = std::move(u);
    if (u_prime) {
        r.u_prime_ = *u_prime;
    } else {
        auto base = r.u_;
        r.u_prime_ = [base](double x) {
            const double h = 1e-6 * (1.0 + std::fabs(x));
            return (base(x + h) - base(x - h)) / (2.0 * h);
        };
    }
    {
        auto dp = r.u_prime_;
        r.u_dd_ = [dp](double x) {
            const double h = 1e-5 * (1.0 + std::fabs(x));
            return (dp(x + h) - dp(x - h)) / (2.0 * h);
        };
    }
    r.u_zero_ = r.u_(0.0);
    // beta = D^- u(0)
    {
        const double h = 1e-7;
        r.beta_ = (r.u_(0.0) - r.u_(-h)) / h;
    }
    // u(+inf): probe growth on a geometric grid; finite-limit detection.
    {
        double prev = r.u_(1.0);
        bool bounded = true;
        double x = 2.0, last = prev;
        for (int i = 0; i < 60; ++i, x *= 2.0) {
            last = r.u_(x);
            if (last > 1e12) { bounded = false; break; }
            if (last - prev < 1e-13 * (1.0 + std::fabs(last))) break;
            prev = last;
        }
        if (bounded) {
            r.u_inf_ = ExtReal(last);
            r.u_inf_finite_ = true;
        } else {
            r.u_inf_ = ExtReal::pos_inf();
            r.u_inf_finite_ = false;
        }
    }
    // numeric conjugate: Phi(y) via the sup, Phi'(y) = -argmax (envelope)
    {
        auto base_u = r.u_;
        auto base_du = u_prime ? std::optional<Fn>(r.u_prime_) : std::nullopt;
        r.phi_ = [base_u, base_du](double y) {
            if (!(y > 0.0))
                throw std::domain_error("custom Utility: phi(y) needs y > 0");
            double xs = conjugate_argmax(base_u, base_du ? &*base_du : nullptr, y);
            return base_u(xs) - xs * y;
        };
        r.phi_prime_ = [base_u, base_du](double y) {
            double xs = conjugate_argmax(base_u, base_du ? &*base_du : nullptr, y);
            return -xs;
        };
        auto pp = r.phi_prime_;
        r.phi_dd_ = [pp](double y) {
            const double h = 1e-6 * (1.0 + std::fabs(y));
            double lo = std::max(y - h, 1e-300);
            return (pp(y + h) - pp(lo)) / (y + h - lo);
        };
    }
    return r;
}

ExtReal Utility::conjugate(double y) const {
    if (y < 0.0)
        throw std::domain_error("Utility::conjugate: y must be >= 0");
    if (y == 0.0) return u_inf_;  // Phi(0) = u(+inf)
    return ExtReal(phi_(y));
}

double Utility::phi(double y) const {
    if (y == 0.0) {
        if (u_inf_finite_) return u_inf_.value();
        throw std::domain_error("Utility::phi: Phi(0) = +inf for this utility");
    }
    return phi_(y);
}

double Utility::phi_prime(double y) const { return phi_prime_(y); }
double Utility::phi_double_prime(double y) const { return phi_dd_(y); }

YoungPair::YoungPair(const Utility& u)
    : u_(std::make_shared<Utility>(u)), beta_(u.beta()) {
    phi_beta_ = u_->phi(beta_);  // = u(0) by conjugacy
}

double YoungPair::u_hat(double x) const {
    return -u_->u(-std::fabs(x)) + u_->u_zero();
}

double YoungPair::phi_hat(double y) const {
    double a = std::fabs(y);
    if (a <= beta_) return 0.0;
    return u_->phi(a) - phi_beta_;
}

double YoungPair::u_hat_prime(double x) const {
    if (x < 0.0) throw std::domain_error("u_hat_prime: x must be >= 0");
    return u_->u_prime(-x);
}

}  // namespace indiff

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "indiff/extended.hpp"

namespace indiff {

/// Utility function u: R -> R, increasing and concave with u(-inf) = -inf,
/// together with its convex conjugate Phi(y) = sup_x { u(x) - x y } and the
/// derivative data the solvers need. The exponential family carries closed
/// forms; custom utilities fall back to numerics.
class Utility {
public:
    enum class Kind { exponential, custom };

    using Fn = std::function<double(double)>;

    /// u(x) = -exp(-gamma x), gamma > 0. Closed forms:
    ///   Phi(y)  = (y/gamma) log(y/gamma) - y/gamma,  Phi(0) = 0
    ///   Phi'(y) = (1/gamma) log(y/gamma)
    ///   u_hat(x) = exp(gamma |x|) - 1, beta = gamma, u(+inf) = 0
    static Utility exponential(double gamma);

    /// Custom utility from a callable (optionally with derivative). The
    /// conjugate and its derivative are computed by 1-D concave maximization.
    static Utility custom(Fn u, std::optional<Fn> u_prime = std::nullopt);

    Kind kind() const { return kind_; }
    bool is_exponential() const { return kind_ == Kind::exponential; }
    /// Risk aversion parameter; only meaningful for the exponential kind.
    double gamma() const { return gamma_; }

    double u(double x) const { return u_(x); }
    double u_prime(double x) const { return u_prime_(x); }
    double u_double_prime(double x) const { return u_dd_(x); }

    /// Phi(y) = sup_x { u(x) - x y }, y >= 0; +inf is a legitimate value.
    ExtReal conjugate(double y) const;
    /// Phi as a plain double on y > 0 (where the exponential family and every
    /// custom utility with u(+inf) finite are finite-valued).
    double phi(double y) const;
    /// Phi'(y), strictly increasing on y > 0.
    double phi_prime(double y) const;
    /// Phi''(y), used by the scalar Newton solves.
    double phi_double_prime(double y) const;

    /// beta = D^- u(0): the kink parameter of the Young function pair.
    double beta() const { return beta_; }
    /// u(+inf) as an extended real.
    ExtReal u_infinity() const { return u_inf_; }
    /// u(0)
    double u_zero() const { return u_zero_; }

private:
    Utility() = default;

    Kind kind_ = Kind::custom;
    double gamma_ = 0.0;
    Fn u_, u_prime_, u_dd_;
    Fn phi_, phi_prime_, phi_dd_;
    double beta_ = 0.0;
    double u_zero_ = 0.0;
    ExtReal u_inf_;
    bool u_inf_finite_ = false;
};

/// Complementary Young pair induced by a utility:
///   u_hat(x)   = -u(-|x|) + u(0)
///   phi_hat(y) = 0 on |y| <= beta, Phi(|y|) - Phi(beta) beyond,
/// with Phi(beta) = u(0).
class YoungPair {
public:
    explicit YoungPair(const Utility& u);

    double u_hat(double x) const;
    double phi_hat(double y) const;
    double beta() const { return beta_; }
    const Utility& utility() const { return *u_; }

    /// Derivative of u_hat on x > 0 (numeric for custom utilities).
    double u_hat_prime(double x) const;

private:
    std::shared_ptr<const Utility> u_;
    double beta_;
    double phi_beta_;
};

}  // namespace indiff

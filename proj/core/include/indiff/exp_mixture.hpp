#pragma once

#include <functional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "indiff/extended.hpp"
#include "indiff/market.hpp"
#include "indiff/orlicz.hpp"
#include "indiff/utility.hpp"

namespace indiff {

/// Construction-time failure of the g' > 0 invariant: the negative-z weights
/// do not vanish fast enough for the boundary optimum to exist.
class MonotonicityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One-period market S1 = Y Z with Y ~ Exp(1) independent of a discrete Z
/// supported on (-1, 1] with z_1 = 1, under exponential utility. The dual
/// optimizer of this family carries a strictly positive singular mass, which
/// is computable in closed form through the budget identity.
class ExpMixtureMarket {
public:
    struct ZAtom {
        double z;
        double p;
    };

    struct ZeroClaim {};
    struct DeltaYClaim {
        double delta;  // B = delta * Y, 0 < gamma*delta < 1
    };
    struct BoundedAlphaClaim {
        std::function<double(double /*y*/, double /*z*/)> alpha;
        double bound;  // certified |alpha| <= bound (spot-checked on a grid)
    };
    using Claim = std::variant<ZeroClaim, DeltaYClaim, BoundedAlphaClaim>;

    enum class LossTag { one_plus_y, one_plus_sqrt_y };

    /// z_1 = 1, z_n = 1/n - 1, p_1 given, geometric tail weights with ratio r
    /// truncated at N atoms; the residual tail mass is folded into atom N so
    /// the weights sum to one exactly.
    static std::vector<ZAtom> default_atoms(int N = 50, double p1 = 0.99,
                                            double r = 0.1);

    ExpMixtureMarket(std::vector<ZAtom> atoms, double gamma, Claim claim,
                     LossTag loss = LossTag::one_plus_y,
                     bool allow_nonmonotone = false);

    const std::vector<ZAtom>& atoms() const { return atoms_; }
    double gamma() const { return gamma_; }
    const Claim& claim() const { return claim_; }
    LossTag loss_tag() const { return loss_; }
    bool monotone_certified() const { return monotone_; }

    /// Admissible exposure interval (h_min, h_max], determined by the full
    /// (untruncated) support of Z: (-(1-gamma*delta)/gamma, (1-gamma*delta)/gamma]
    /// for the delta claim and (-1/gamma, 1/gamma] otherwise.
    double h_min() const { return -h_max_; }
    double h_max() const { return h_max_; }

    /// g(h) = E[-exp(-gamma (h S1 - B))]; -inf tag outside (h_min, h_max].
    ExtReal g(double h) const;
    /// dg/dh = gamma E[S1 exp(-gamma (h S1 - B))]; divergence tag outside.
    ExtReal g_prime(double h) const;

    struct OptimalExposure {
        double h_star = 0.0;
        bool attained_at_boundary = false;
    };
    /// h* = h_max with boundary attainment when g' > 0 is certified; with the
    /// check overridden, an interior root of g' is located instead.
    OptimalExposure optimal_h() const;

    /// Regular part of the dual optimizer, dQ^r/dP = e^{-gamma(h* S1 - B)}/Z.
    struct RegularDensity {
        double normalizer = 0.0;           // Z = E[e^{-gamma (h* S1 - B)}]
        std::vector<double> atom_mass;     // Q^r(Z = z_n), sums to 1
        double entropy = 0.0;              // H(Q^r | P)
        double h_star = 0.0;
        double expected_s1 = 0.0;          // E_{Q^r}[S1]
    };
    RegularDensity dual_regular_density() const;

    /// Combined singular contribution Q^s(-B) + ||Q^s|| = E_{Q^r}[f_B] with
    /// f_B = h* S1, evaluated along two independent routes.
    struct SingularMass {
        double closed_form = 0.0;   // per-atom analytic formulas
        double quadrature = 0.0;    // adaptive quadrature of E_{Q^r}[h* S1]
        double value() const { return closed_form; }
    };
    SingularMass singular_mass() const;

    /// A-priori bounds on the singular action, per unit of ||Q^s||:
    ///   -||Q^s||/L <= Q^s(-B) <= ||Q^s||/l.
    struct SingularBounds {
        double lower_coeff = 0.0;   // -1/L
        ExtReal upper_coeff;        // 1/l (0 when l = +inf)
        ExtReal L;
        ExtReal l;
        bool claim_in_m_uhat = false;  // then Q^s(B) = 0 outright
    };
    SingularBounds singular_bounds() const;

    /// Tail descriptor of the claim for the admissibility machinery.
    ExpTailClaim claim_descriptor() const;

    /// Exponential moment scale of the loss variable: E[u_hat(a W)] < inf
    /// iff a < threshold (+inf when every moment is finite).
    ExtReal loss_moment_threshold() const;

private:
    std::vector<ZAtom> atoms_;
    double gamma_ = 1.0;
    Claim claim_;
    LossTag loss_ = LossTag::one_plus_y;
    double h_max_ = 0.0;
    double delta_eff_ = 0.0;  // gamma * delta for the delta claim, else 0
    bool monotone_ = false;

    double atom_rate(double h, double z) const;  // 1 + gamma h z - delta_eff
    // per-atom integrals of e^{-rate y + gamma alpha} and y e^{...}
    double atom_i(double h, int n) const;
    double atom_j(double h, int n) const;
    double atom_i_quad(double h, int n) const;
    double atom_j_quad(double h, int n) const;
    bool has_closed_form() const;
};

/// h*_B - h*_0: the excess exposure induced by the claim ( -delta for the
/// delta claim, 0 for bounded claims with a boundary optimum).
double hedging_delta(const ExpMixtureMarket& with_claim,
                     const ExpMixtureMarket& without_claim);

/// Compatibility of the loss variable with a utility through the shared
/// interface: closed-form thresholds for the exponential family.
CompatibilityReport check_compatible(const ExpMixtureMarket& m,
                                     const Utility& u);

/// |S1| <= Y <= W holds pathwise for W = 1 + Y; fails for W = 1 + sqrt(Y).
SuitabilityReport check_suitable(const ExpMixtureMarket& m);

}  // namespace indiff

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "indiff/distribution.hpp"
#include "indiff/utility.hpp"

namespace indiff {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class FiniteMarket;

/// Probability q on the states with q' * delta_s = 0 per asset.
class MartingaleMeasure {
public:
    MartingaleMeasure(Vector q, const FiniteMarket& m);
    const Vector& q() const { return q_; }
    /// dQ/dP coordinatewise (probs are strictly positive by construction).
    Vector density(const FiniteMarket& m) const;

private:
    Vector q_;
};

/// Affine description of {q >= 0, sum q = 1, q' delta_s = 0} together with a
/// strictly positive interior point, the vertex list and an orthonormal basis
/// of the tangent space.
struct MartingalePolytope {
    Matrix equalities;        // (1 + d) x n, first row all ones
    Vector rhs;               // e_1
    Vector interior;          // strictly positive point (vertex centroid)
    std::vector<Vector> vertices;
    Matrix tangent_basis;     // n x dim, orthonormal columns spanning ker
    int dim = 0;
};

/// One-period market on a finite state space: strictly positive probs, price
/// increments per state and asset, a loss variable W >= 1 and an initial
/// endowment. Construction requires a no-arbitrage certificate (a strictly
/// positive martingale measure); it throws otherwise.
class FiniteMarket {
public:
    FiniteMarket(Vector probs, Matrix delta_s, double x0 = 0.0,
                 std::optional<Vector> loss_variable = std::nullopt);

    int states() const { return static_cast<int>(probs_.size()); }
    int assets() const { return static_cast<int>(delta_s_.cols()); }
    const Vector& probs() const { return probs_; }
    const Matrix& delta_s() const { return delta_s_; }
    const Vector& loss_variable() const { return w_; }
    double x0() const { return x0_; }

    const MartingalePolytope& polytope() const { return polytope_; }

    /// Certificate produced at construction.
    const Vector& no_arbitrage_certificate() const { return polytope_.interior; }

private:
    Vector probs_;
    Matrix delta_s_;
    Vector w_;
    double x0_ = 0.0;
    MartingalePolytope polytope_;
};

struct SuitabilityReport {
    bool suitable = false;
    /// max_i,j |dS_ij| / W_i: the minimal multiple of W that makes the unit
    /// strategies admissible. suitable iff <= 1.
    double witness_scale = 0.0;
};

SuitabilityReport check_suitable(const FiniteMarket& m);

struct CompatibilityReport {
    bool strong = false;
    bool weak = false;
};

/// On a finite state space both conditions are free; the overload exists so
/// the same interface covers the semi-analytic family.
CompatibilityReport check_compatible(const FiniteMarket& m, const Utility& u);

/// Builds the polytope description; throws if the no-arbitrage certificate
/// is absent.
MartingalePolytope martingale_polytope(const Vector& probs,
                                       const Matrix& delta_s);

struct Replication {
    double c = 0.0;
    Vector strategy;
};

/// B = c + h . dS exactly (residual <= 1e-10) when consistent, nullopt
/// otherwise.
std::optional<Replication> replicable(const FiniteMarket& m, const Vector& B);

/// Linear sup/inf of q -> q' * B over the polytope (vertex enumeration).
double polytope_linear_max(const MartingalePolytope& poly, const Vector& B);
double polytope_linear_min(const MartingalePolytope& poly, const Vector& B);

/// Uniformly random point of the polytope (convex combination of vertices
/// with Dirichlet-ish weights); deterministic in the generator state.
Vector random_polytope_point(const MartingalePolytope& poly,
                             std::uint64_t& rng_state);

}  // namespace indiff

#include "indiff/market.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace indiff {

namespace {

// next lexicographic k-combination of {0..n-1}; false when exhausted
bool next_combination(std::vector<int>& idx, int n) {
    int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<Vector> enumerate_vertices(const Matrix& A, const Vector& b) {
    const int n = static_cast<int>(A.cols());
    Eigen::ColPivHouseholderQR<Matrix> qr(A);
    qr.setThreshold(1e-10);
    const int r = static_cast<int>(qr.rank());
    std::vector<Vector> verts;
    if (r == 0) return verts;

    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i) idx[i] = i;
    do {
        Matrix As(A.rows(), r);
        for (int j = 0; j < r; ++j) As.col(j) = A.col(idx[j]);
        Eigen::ColPivHouseholderQR<Matrix> sub(As);
        sub.setThreshold(1e-10);
        if (sub.rank() < r) continue;
        Vector xs = sub.solve(b);
        if ((As * xs - b).lpNorm<Eigen::Infinity>() > 1e-9) continue;
        if (xs.minCoeff() < -1e-9) continue;
        Vector v = Vector::Zero(n);
        for (int j = 0; j < r; ++j) v[idx[j]] = std::max(xs[j], 0.0);
        bool dup = false;
        for (const auto& w : verts)
            if ((w - v).lpNorm<Eigen::Infinity>() < 1e-9) { dup = true; break; }
        if (!dup) verts.push_back(std::move(v));
    } while (next_combination(idx, n));
    return verts;
}

}  // namespace

MartingalePolytope martingale_polytope(const Vector& probs,
                                       const Matrix& delta_s) {
    const int n = static_cast<int>(probs.size());
    const int d = static_cast<int>(delta_s.cols());
    MartingalePolytope poly;
    poly.equalities = Matrix(1 + d, n);
    poly.equalities.row(0).setOnes();
    for (int j = 0; j < d; ++j) poly.equalities.row(1 + j) = delta_s.col(j).transpose();
    poly.rhs = Vector::Zero(1 + d);
    poly.rhs[0] = 1.0;

    poly.vertices = enumerate_vertices(poly.equalities, poly.rhs);
    if (poly.vertices.empty())
        throw std::invalid_argument(
            "martingale_polytope: no martingale measure exists (arbitrage)");

    Vector centroid = Vector::Zero(n);
    for (const auto& v : poly.vertices) centroid += v;
    centroid /= static_cast<double>(poly.vertices.size());
    if (centroid.minCoeff() <= 1e-12)
        throw std::invalid_argument(
            "martingale_polytope: no strictly positive martingale measure "
            "(arbitrage)");
    poly.interior = centroid;

    Eigen::FullPivLU<Matrix> lu(poly.equalities);
    lu.setThreshold(1e-10);
    Matrix kernel = lu.kernel();
    if (kernel.cols() == 1 && kernel.norm() < 1e-12) {
        poly.tangent_basis = Matrix(n, 0);
    } else {
        Eigen::HouseholderQR<Matrix> kq(kernel);
        Matrix Q = kq.householderQ() * Matrix::Identity(n, kernel.cols());
        poly.tangent_basis = Q;
    }
    poly.dim = static_cast<int>(poly.tangent_basis.cols());
    return poly;
}

FiniteMarket::FiniteMarket(Vector probs, Matrix delta_s, double x0,
                           std::optional<Vector> loss_variable)
    : probs_(std::move(probs)), delta_s_(std::move(delta_s)), x0_(x0) {
    const int n = states();
    if (n < 2) throw std::invalid_argument("FiniteMarket: need >= 2 states");
    if (delta_s_.rows() != n)
        throw std::invalid_argument("FiniteMarket: delta_s rows != states");
    if (probs_.minCoeff() <= 0.0)
        throw std::invalid_argument("FiniteMarket: probabilities must be positive");
    if (std::fabs(probs_.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("FiniteMarket: probabilities must sum to 1");

    if (loss_variable) {
        w_ = std::move(*loss_variable);
        if (w_.size() != n)
            throw std::invalid_argument("FiniteMarket: W length != states");
        if (w_.minCoeff() < 1.0)
            throw std::invalid_argument("FiniteMarket: W must be >= 1");
    } else {
        double m = delta_s_.size() > 0 ? delta_s_.cwiseAbs().maxCoeff() : 0.0;
        w_ = Vector::Constant(n, 1.0 + m);
    }

    polytope_ = martingale_polytope(probs_, delta_s_);
}

MartingaleMeasure::MartingaleMeasure(Vector q, const FiniteMarket& m)
    : q_(std::move(q)) {
    if (q_.size() != m.states())
        throw std::invalid_argument("MartingaleMeasure: wrong length");
    if (q_.minCoeff() < -1e-10 || std::fabs(q_.sum() - 1.0) > 1e-10)
        throw std::invalid_argument("MartingaleMeasure: not a probability");
    if (m.assets() > 0 &&
        (q_.transpose() * m.delta_s()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("MartingaleMeasure: martingale constraint violated");
}

Vector MartingaleMeasure::density(const FiniteMarket& m) const {
    return q_.cwiseQuotient(m.probs());
}

SuitabilityReport check_suitable(const FiniteMarket& m) {
    SuitabilityReport r;
    double scale = 0.0;
    for (int i = 0; i < m.states(); ++i)
        for (int j = 0; j < m.assets(); ++j)
            scale = std::max(scale,
                             std::fabs(m.delta_s()(i, j)) / m.loss_variable()[i]);
    r.witness_scale = scale;
    r.suitable = scale <= 1.0;
    return r;
}

CompatibilityReport check_compatible(const FiniteMarket&, const Utility&) {
    // finite expectations: E[u(-alpha W)] is a finite sum for every alpha
    return {true, true};
}

std::optional<Replication> replicable(const FiniteMarket& m, const Vector& B) {
    const int n = m.states(), d = m.assets();
    Matrix A(n, 1 + d);
    A.col(0).setOnes();
    if (d > 0) A.rightCols(d) = m.delta_s();
    Vector sol = A.colPivHouseholderQr().solve(B);
    if ((A * sol - B).lpNorm<Eigen::Infinity>() > 1e-10) return std::nullopt;
    Replication rep;
    rep.c = sol[0];
    rep.strategy = sol.tail(d);
    return rep;
}

double polytope_linear_max(const MartingalePolytope& poly, const Vector& B) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : poly.vertices) best = std::max(best, v.dot(B));
    return best;
}

double polytope_linear_min(const MartingalePolytope& poly, const Vector& B) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : poly.vertices) best = std::min(best, v.dot(B));
    return best;
}

Vector random_polytope_point(const MartingalePolytope& poly,
                             std::uint64_t& rng_state) {
    auto next = [&rng_state]() {
        // xorshift64*, plenty for sampling test points
        rng_state ^= rng_state >> 12;
        rng_state ^= rng_state << 25;
        rng_state ^= rng_state >> 27;
        return static_cast<double>((rng_state * 2685821657736338717ULL) >> 11) /
               9007199254740992.0;
    };
    Vector w(poly.vertices.size());
    for (int i = 0; i < w.size(); ++i) w[i] = -std::log(next() + 1e-300);
    w /= w.sum();
    Vector p = Vector::Zero(poly.interior.size());
    for (std::size_t i = 0; i < poly.vertices.size(); ++i)
        p += w[static_cast<int>(i)] * poly.vertices[i];
    return p;
}

}  // namespace indiff

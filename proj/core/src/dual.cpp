#include "indiff/dual.hpp"

#include <cmath>

#include "indiff/numeric.hpp"
#include "indiff/primal.hpp"

namespace indiff {

namespace {

constexpr double kDensityFloor = 1e-14;

double foc_value(const Utility& u, const Vector& rho, const Vector& p,
                 double lambda, double c) {
    double s = c;
    for (int i = 0; i < rho.size(); ++i) {
        if (rho[i] <= 0.0) continue;  // y Phi'(y) -> 0 as y -> 0
        s += p[i] * rho[i] * u.phi_prime(lambda * rho[i]);
    }
    return s;
}

double foc_slope(const Utility& u, const Vector& rho, const Vector& p,
                 double lambda) {
    double s = 0.0;
    for (int i = 0; i < rho.size(); ++i) {
        if (rho[i] <= 0.0) continue;
        s += p[i] * rho[i] * rho[i] * u.phi_double_prime(lambda * rho[i]);
    }
    return s;
}

}  // namespace

double lambda_foc(const Utility& u, const Vector& q_density, const Vector& p,
                  double c) {
    auto f = [&](double lam) { return foc_value(u, q_density, p, lam, c); };
    double lo = 1.0, hi = 1.0;
    if (u.is_exponential())
        lo = hi = exp_lambda_foc_closed_form(u.gamma(), q_density, p, c);
    if (!bracket_positive(f, lo, hi, 1e-12, 1e12))
        throw DualError("lambda-bracket-failure: ill-scaled inputs");
    auto df = [&](double lam) { return foc_slope(u, q_density, p, lam); };
    auto r = newton_bisect(f, df, lo, hi, 0.5 * (lo + hi), 1e-15, 200);
    return r.x;
}

double exp_lambda_foc_closed_form(double gamma, const Vector& q_density,
                                  const Vector& p, double c) {
    double H = 0.0;
    for (int i = 0; i < q_density.size(); ++i)
        if (q_density[i] > 0.0)
            H += p[i] * q_density[i] * std::log(q_density[i]);
    return gamma * std::exp(-gamma * c - H);
}

double relative_entropy(const Vector& q, const Vector& p) {
    double H = 0.0;
    for (int i = 0; i < q.size(); ++i)
        if (q[i] > 0.0) H += q[i] * std::log(q[i] / p[i]);
    return H;
}

namespace {

struct ReducedObjective {
    const FiniteMarket& m;
    const Utility& u;
    const Vector& B;
    double x;

    // min over lambda of the dual objective at fixed q; also reports the
    // minimizing lambda
    double eval(const Vector& q, double& lambda) const {
        double c = x - q.dot(B);
        Vector rho = q.cwiseQuotient(m.probs());
        lambda = lambda_foc(u, rho, m.probs(), c);
        double s = lambda * c;
        for (int i = 0; i < q.size(); ++i) {
            double y = lambda * rho[i];
            s += m.probs()[i] * (y > 0.0 ? u.phi(y) : u.phi(0.0));
        }
        return s;
    }

    // envelope gradient: d/dq_i = lambda (Phi'(lambda q_i/p_i) - B_i)
    Vector gradient(const Vector& q, double lambda) const {
        Vector g(q.size());
        for (int i = 0; i < q.size(); ++i) {
            double y = lambda * std::max(q[i], kDensityFloor) / m.probs()[i];
            g[i] = lambda * (u.phi_prime(y) - B[i]);
        }
        return g;
    }
};

}  // namespace

double dual_q_residual(const FiniteMarket& m, const Utility& u, const Vector& B,
                       double lambda, const Vector& q) {
    Vector phi_p(q.size());
    for (int i = 0; i < q.size(); ++i) {
        double y = lambda * std::max(q[i], kDensityFloor) / m.probs()[i];
        phi_p[i] = u.phi_prime(y);
    }
    Vector r = phi_p - B;
    return q.dot(r) - polytope_linear_min(m.polytope(), r);
}

DualSolution minimize_dual(const FiniteMarket& m, const Utility& u,
                           const Vector& B, double x) {
    const int n = m.states();
    if (B.size() != n)
        throw DualError("no-claim-evaluation: claim length != states");
    const MartingalePolytope& poly = m.polytope();
    const Matrix& T = poly.tangent_basis;

    ReducedObjective obj{m, u, B, x};
    Vector q = poly.interior;
    double lambda = 0.0;
    double fval = obj.eval(q, lambda);

    DualSolution sol;
    double step = 1.0;
    Vector g_prev, q_prev;
    const int max_iter = 20000;
    int it = 0;
    for (; it < max_iter; ++it) {
        Vector g = obj.gradient(q, lambda);
        Vector pg = T.cols() > 0 ? Vector(T * (T.transpose() * g))
                                 : Vector::Zero(n);
        double res = dual_q_residual(m, u, B, lambda, q);
        if (res <= 1e-10 || pg.lpNorm<Eigen::Infinity>() < 1e-15) break;

        // Barzilai-Borwein step length, reset to 1 when degenerate
        if (it > 0) {
            Vector dq = q - q_prev, dg = g - g_prev;
            double denom = dq.dot(dg);
            step = denom > 1e-300 ? dq.squaredNorm() / denom : 1.0;
            step = std::clamp(step, 1e-12, 1e6);
        }
        q_prev = q;
        g_prev = g;

        // fraction-to-boundary: keep iterates at or above the density floor
        Vector dir = -pg;
        double smax = step;
        for (int i = 0; i < n; ++i)
            if (dir[i] < 0.0)
                smax = std::min(smax, (kDensityFloor - q[i]) / dir[i]);
        if (smax <= 1e-18) {
            // blocked at the floor: nudge toward the interior and retry
            q += 1e-10 * (poly.interior - q);
            fval = obj.eval(q, lambda);
            continue;
        }

        double t = smax;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            Vector cand = q + t * dir;
            double lam_c = lambda;
            double f_c = obj.eval(cand, lam_c);
            if (f_c <= fval - 1e-4 * t * pg.squaredNorm()) {
                q = cand;
                lambda = lam_c;
                fval = f_c;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break;
    }

    // second-order polish: near the optimum the Armijo decreases drop below
    // double resolution while the variational residual can still sit around
    // 1e-7. Damped Newton on the fixed-lambda subproblem in tangent
    // coordinates, alternated with the exact scalar root, pushes the residual
    // to the 1e-10 target.
    if (T.cols() > 0) {
        double res = dual_q_residual(m, u, B, lambda, q);
        for (int polish = 0; polish < 100 && res > 1e-11; ++polish) {
            Vector g = obj.gradient(q, lambda);
            Vector diag(n);
            for (int i = 0; i < n; ++i) {
                double qi = std::max(q[i], kDensityFloor);
                diag[i] = lambda * lambda *
                          u.phi_double_prime(lambda * qi / m.probs()[i]) /
                          m.probs()[i];
            }
            Matrix Ht = T.transpose() * diag.asDiagonal() * T;
            Vector gt = T.transpose() * g;
            Eigen::LDLT<Matrix> ldlt(Ht);
            if (ldlt.info() != Eigen::Success) break;
            Vector dq = T * Vector(-ldlt.solve(gt));
            if (!dq.allFinite()) break;
            double t = 1.0;
            for (int i = 0; i < n; ++i)
                if (dq[i] < 0.0)
                    t = std::min(t, 0.995 * (kDensityFloor - q[i]) / dq[i]);
            Vector cand = q + t * dq;
            double lam_c = lambda;
            double f_c = obj.eval(cand, lam_c);
            double res_c = dual_q_residual(m, u, B, lam_c, cand);
            if (res_c >= res && f_c >= fval) break;
            q = cand;
            lambda = lam_c;
            fval = f_c;
            res = res_c;
        }
    }

    // tie-break for merely concave utilities: if the final linearization has
    // several optimal vertices and the objective is flat across them, return
    // the minimum-norm point of that face (deterministic choice). The
    // exponential family is strictly convex in the density, so its minimizer
    // is already unique.
    if (!u.is_exponential()) {
        Vector r(n);
        for (int i = 0; i < n; ++i)
            r[i] = u.phi_prime(lambda * std::max(q[i], kDensityFloor) /
                               m.probs()[i]) -
                   B[i];
        double lin_min = polytope_linear_min(poly, r);
        std::vector<Vector> tied;
        for (const auto& v : poly.vertices)
            if (v.dot(r) <= lin_min + 1e-12) tied.push_back(v);
        if (tied.size() >= 2) {
            Vector centroid = Vector::Zero(n);
            for (const auto& v : tied) centroid += v;
            centroid /= static_cast<double>(tied.size());
            double lam_c = lambda;
            double f_c = obj.eval(centroid, lam_c);
            if (std::fabs(f_c - fval) <= 1e-12 * (1.0 + std::fabs(fval))) {
                // min-norm convex combination of the tied vertices
                Vector w = Vector::Constant(tied.size(), 1.0 / tied.size());
                Matrix V(n, tied.size());
                for (std::size_t j = 0; j < tied.size(); ++j) V.col(j) = tied[j];
                for (int pass = 0; pass < 500; ++pass) {
                    Vector grad = V.transpose() * (V * w);
                    grad.array() -= grad.mean();
                    w -= 0.05 * grad;
                    for (int j = 0; j < w.size(); ++j) w[j] = std::max(w[j], 0.0);
                    double s = w.sum();
                    if (s <= 0) { w.setConstant(1.0 / w.size()); break; }
                    w /= s;
                }
                Vector q_tb = V * w;
                double lam_tb = lambda;
                double f_tb = obj.eval(q_tb, lam_tb);
                if (f_tb <= fval + 1e-12 * (1.0 + std::fabs(fval))) {
                    q = q_tb;
                    lambda = lam_tb;
                    fval = f_tb;
                }
            }
        }
    }

    sol.iterations = it;
    sol.lambda_star = lambda;
    sol.q_star = q;
    sol.value = fval;
    sol.foc_lambda_residual = std::fabs(
        foc_value(u, Vector(q.cwiseQuotient(m.probs())), m.probs(), lambda,
                  x - q.dot(B)));
    sol.foc_q_residual = dual_q_residual(m, u, B, lambda, q);
    sol.converged =
        sol.foc_lambda_residual <= 1e-9 && sol.foc_q_residual <= 1e-9;

    sol.f_B_recovered = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (q[i] > kDensityFloor)
            sol.f_B_recovered[i] =
                -u.phi_prime(lambda * q[i] / m.probs()[i]) + B[i];
    }
    return sol;
}

MartingaleMeasure minimal_entropy_measure(const FiniteMarket& m, double gamma) {
    Vector h;
    exp_log_primal(m, gamma, Vector::Zero(m.states()), 0.0, &h);
    Vector e = -gamma * (m.delta_s() * h);
    double mx = e.maxCoeff();
    Vector q = m.probs().cwiseProduct((e.array() - mx).exp().matrix());
    q /= q.sum();
    // the Newton polish bottoms out near double resolution; an exact affine
    // projection onto the constraints removes the leftover O(1e-10) drift
    const Matrix& A = m.polytope().equalities;
    Vector resid = A * q - m.polytope().rhs;
    if (resid.lpNorm<Eigen::Infinity>() > 0.0)
        q -= A.completeOrthogonalDecomposition().solve(resid);
    return MartingaleMeasure(q, m);
}

double duality_gap(const FiniteMarket& m, const Utility& u, const Vector& B,
                   double x) {
    PrimalSolution ps = maximize(m, u, B, x);
    DualSolution ds = minimize_dual(m, u, B, x);
    return std::fabs(ps.value - ds.value);
}

}  // namespace indiff

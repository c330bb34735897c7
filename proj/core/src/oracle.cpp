#include "indiff/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace indiff {
namespace oracle {

namespace {

double primal_at(const FiniteMarket& m, const Utility& u, const Vector& B,
                 double x, const Vector& h) {
    double s = 0.0;
    for (int i = 0; i < m.states(); ++i) {
        double wealth = x - B[i];
        for (int j = 0; j < m.assets(); ++j) wealth += h[j] * m.delta_s()(i, j);
        s += m.probs()[i] * u.u(wealth);
    }
    return s;
}

double dual_at(const FiniteMarket& m, const Utility& u, const Vector& B,
               double x, double lambda, const Vector& q) {
    double s = lambda * (x - q.dot(B));
    for (int i = 0; i < m.states(); ++i) {
        double y = lambda * q[i] / m.probs()[i];
        if (y <= 0.0) {
            ExtReal phi0 = u.u_infinity();
            if (!phi0.is_finite()) return std::numeric_limits<double>::infinity();
            s += m.probs()[i] * phi0.value();
        } else {
            s += m.probs()[i] * u.phi(y);
        }
    }
    return s;
}

}  // namespace

double grid_primal(const FiniteMarket& m, const Utility& u, const Vector& B,
                   double x, const GridSpec& spec) {
    const int d = m.assets();
    if (d > 2) throw std::invalid_argument("grid_primal: d <= 2 only");
    if (d == 0) return primal_at(m, u, B, x, Vector());

    Vector center = Vector::Zero(d);
    double width = spec.half_width;
    double best = -std::numeric_limits<double>::infinity();
    Vector best_h = center;

    for (int round = 0; round < spec.refine_rounds; ++round) {
        bool on_boundary = false;
        const int K = spec.steps;
        std::vector<int> idx(d, 0);
        for (;;) {
            Vector h(d);
            for (int j = 0; j < d; ++j)
                h[j] = center[j] - width + 2.0 * width * idx[j] / (K - 1);
            double v = primal_at(m, u, B, x, h);
            if (v > best) {
                best = v;
                best_h = h;
                on_boundary = false;
                for (int j = 0; j < d; ++j)
                    if (idx[j] == 0 || idx[j] == K - 1) on_boundary = true;
            }
            int j = 0;
            while (j < d && ++idx[j] == K) idx[j++] = 0;
            if (j == d) break;
        }
        center = best_h;
        if (on_boundary) width *= 2.0;       // optimum escaped: widen
        else width = 4.0 * width / (K - 1);  // zoom into the best cell
    }
    return best;
}

namespace {

// tangent-space grid points of the polytope within [tlo, thi], clipped onto
// the simplex; polytope vertices appended
std::vector<Vector> polytope_grid(const MartingalePolytope& poly,
                                  const Vector& tlo, const Vector& thi, int K,
                                  bool with_vertices) {
    std::vector<Vector> qs;
    if (poly.dim == 0) {
        qs.push_back(poly.interior);
        return qs;
    }
    const Matrix& T = poly.tangent_basis;
    std::vector<int> idx(poly.dim, 0);
    for (;;) {
        Vector t(poly.dim);
        for (int j = 0; j < poly.dim; ++j)
            t[j] = tlo[j] + (thi[j] - tlo[j]) * idx[j] / (K - 1);
        Vector q = poly.interior + T * t;
        if (q.minCoeff() >= -1e-12) {
            for (int i = 0; i < q.size(); ++i) q[i] = std::max(q[i], 0.0);
            q /= q.sum();
            qs.push_back(q);
        }
        int j = 0;
        while (j < poly.dim && ++idx[j] == K) idx[j++] = 0;
        if (j == poly.dim) break;
    }
    if (with_vertices)
        for (const auto& v : poly.vertices) qs.push_back(v);
    return qs;
}

}  // namespace

GridDualResult grid_dual(const FiniteMarket& m, const Utility& u,
                         const Vector& B, double x, const GridSpec& spec) {
    const MartingalePolytope& poly = m.polytope();
    if (poly.dim > 2)
        throw std::invalid_argument("grid_dual: polytope dimension <= 2 only");
    const Matrix& T = poly.tangent_basis;

    Vector tlo = Vector::Constant(std::max(poly.dim, 1), 1e300);
    Vector thi = Vector::Constant(std::max(poly.dim, 1), -1e300);
    for (const auto& v : poly.vertices) {
        Vector t = T.transpose() * (v - poly.interior);
        for (int j = 0; j < poly.dim; ++j) {
            tlo[j] = std::min(tlo[j], t[j]);
            thi[j] = std::max(thi[j], t[j]);
        }
    }

    GridDualResult out;
    out.min_value = std::numeric_limits<double>::infinity();
    double best_lambda = 1.0;
    Vector best_q = poly.interior;

    auto sweep = [&](double log_lo, double log_hi, const Vector& lo,
                     const Vector& hi, bool with_vertices) {
        std::vector<Vector> qs =
            polytope_grid(poly, lo, hi, spec.q_steps, with_vertices);
        for (int k = 0; k < spec.lambda_steps; ++k) {
            double lambda = std::exp(
                log_lo + (log_hi - log_lo) * k / (spec.lambda_steps - 1));
            for (const auto& q : qs) {
                double v = dual_at(m, u, B, x, lambda, q);
                if (v < out.min_value) {
                    out.min_value = v;
                    best_lambda = lambda;
                    best_q = q;
                }
            }
        }
    };

    // coarse product grid, then two zooms around the running minimizer: every
    // evaluated point stays feasible, so the weak-duality comparison remains
    // exhaustive over everything touched
    sweep(std::log(1e-4), std::log(1e4), tlo, thi, true);
    double lstep = (std::log(1e4) - std::log(1e-4)) / (spec.lambda_steps - 1);
    double tstep = 0.0;
    for (int j = 0; j < poly.dim; ++j)
        tstep = std::max(tstep, (thi[j] - tlo[j]) / (spec.q_steps - 1));
    for (int zoom = 0; zoom < 2; ++zoom) {
        Vector tc = poly.dim > 0
                        ? Vector(T.transpose() * (best_q - poly.interior))
                        : Vector();
        Vector zlo(std::max(poly.dim, 1)), zhi(std::max(poly.dim, 1));
        for (int j = 0; j < poly.dim; ++j) {
            zlo[j] = std::max(tlo[j], tc[j] - 2.0 * tstep);
            zhi[j] = std::min(thi[j], tc[j] + 2.0 * tstep);
        }
        sweep(std::log(best_lambda) - 2.0 * lstep,
              std::log(best_lambda) + 2.0 * lstep, zlo, zhi, false);
        lstep *= 4.0 / (spec.lambda_steps - 1);
        tstep *= 4.0 / (spec.q_steps - 1);
    }

    out.max_primal_on_grid = grid_primal(m, u, B, x, spec);
    out.weak_duality_margin = out.min_value - out.max_primal_on_grid;
    return out;
}

}  // namespace oracle
}  // namespace indiff

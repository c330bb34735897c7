#include "indiff/indifference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "indiff/numeric.hpp"
#include "indiff/primal.hpp"

namespace indiff {

namespace {

constexpr double kFloor = 1e-14;

double primal_value(const FiniteMarket& m, const Utility& u, const Vector& B,
                    double x) {
    return maximize(m, u, B, x).value;
}

}  // namespace

double price(const FiniteMarket& m, const Utility& u, const Vector& B,
             double x) {
    const Vector zero = Vector::Zero(m.states());
    const double target = primal_value(m, u, zero, x);
    if (!(u.u_infinity().as_double() > target))
        throw std::runtime_error("price: U_0(x) must stay below u(+inf)");

    auto F = [&](double p) { return primal_value(m, u, B, x + p); };

    // bracket the target by doubling in both directions
    double lo = 0.0, hi = 0.0, flo = F(0.0), fhi = flo;
    double w = 1.0;
    for (int it = 0; flo > target && it < 200; ++it, w *= 2.0) {
        lo -= w;
        flo = F(lo);
    }
    w = 1.0;
    for (int it = 0; fhi < target && it < 200; ++it, w *= 2.0) {
        hi += w;
        fhi = F(hi);
        if (u.u_infinity().is_finite() &&
            u.u_infinity().value() - fhi < 1e-300 && fhi < target)
            throw std::runtime_error("price: utility-saturation before match");
    }
    if (flo > target || fhi < target)
        throw std::runtime_error("price: could not bracket the indifference point");

    // Illinois-damped regula falsi on the increasing map F, with the utility
    // residual rescaled by the local slope
    double a = lo, b = hi, fa = flo - target, fb = fhi - target;
    double p = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        double denom = fb - fa;
        p = (std::fabs(denom) > 1e-300) ? a - fa * (b - a) / denom
                                        : 0.5 * (a + b);
        if (!(p > a && p < b)) p = 0.5 * (a + b);
        double fp = F(p) - target;
        double slope = std::fabs(denom) / std::max(b - a, 1e-300);
        if (std::fabs(fp) <= 1e-10 * std::max(slope, 1e-300) ||
            (b - a) <= 1e-14 * (1.0 + std::fabs(a) + std::fabs(b)))
            return p;
        if (fp > 0) {
            b = p; fb = fp;
            fa *= 0.5;  // Illinois damping keeps both ends moving
        } else {
            a = p; fa = fp;
            fb *= 0.5;
        }
    }
    return p;
}

double price_exponential(const FiniteMarket& m, double gamma, const Vector& B,
                         double /*x*/) {
    // route 1: exponential factorization in the log domain, x cancels
    double log_ub = exp_log_primal(m, gamma, B, 0.0);
    double log_u0 = exp_log_primal(m, gamma, Vector::Zero(m.states()), 0.0);
    double route1 = (log_ub - log_u0) / gamma;

    // route 2: max_Q { E_Q[B] - (H(Q|P) - H_min)/gamma } by projected ascent
    const MartingalePolytope& poly = m.polytope();
    double h_min_entropy =
        relative_entropy(minimal_entropy_measure(m, gamma).q(), m.probs());
    auto value = [&](const Vector& q) {
        return q.dot(B) - (relative_entropy(q, m.probs()) - h_min_entropy) / gamma;
    };
    auto grad = [&](const Vector& q) {
        Vector g(q.size());
        for (int i = 0; i < q.size(); ++i)
            g[i] = B[i] -
                   (std::log(std::max(q[i], kFloor) / m.probs()[i]) + 1.0) / gamma;
        return g;
    };
    const Matrix& T = poly.tangent_basis;
    Vector q = poly.interior;
    double fv = value(q);
    for (int it = 0; it < 5000; ++it) {
        Vector g = grad(q);
        Vector pg = T.cols() > 0 ? Vector(T * (T.transpose() * g))
                                 : Vector::Zero(q.size());
        if (pg.lpNorm<Eigen::Infinity>() < 1e-13) break;
        double smax = 1.0;
        for (int i = 0; i < q.size(); ++i)
            if (pg[i] < 0.0) smax = std::min(smax, (kFloor - q[i]) / pg[i]);
        if (smax <= 1e-18) break;
        double t = smax;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            Vector cand = q + t * pg;
            double fc = value(cand);
            if (fc >= fv + 1e-4 * t * pg.squaredNorm()) {
                q = cand; fv = fc; moved = true; break;
            }
            t *= 0.5;
        }
        if (!moved) break;
    }
    double route2 = fv;

    if (std::fabs(route1 - route2) > 1e-8 * (1.0 + std::fabs(route1)))
        throw std::runtime_error(
            "price_exponential: factorized and dual routes disagree");
    return route1;
}

namespace {

// scalar machinery for alpha(Q): the inf over l > 0 of (A(l) - u0)/l with
// A(l) = E[Phi(l q/p)] is attained at the root of r(l) = l A'(l) - A(l) + u0,
// which is increasing with slope r'(l) = l A''(l). Safeguarded Newton from a
// warm start; the warm start is carried across calls by the polytope ascent.
struct PenaltyScalar {
    const FiniteMarket& m;
    const Utility& u;

    double A(const Vector& q, double l) const {
        double s = 0.0;
        for (int i = 0; i < q.size(); ++i)
            s += m.probs()[i] *
                 (q[i] > 0.0 ? u.phi(l * q[i] / m.probs()[i]) : u.phi(0.0));
        return s;
    }
    double Ap(const Vector& q, double l) const {
        double s = 0.0;
        for (int i = 0; i < q.size(); ++i)
            if (q[i] > 0.0) s += q[i] * u.phi_prime(l * q[i] / m.probs()[i]);
        return s;
    }
    double App(const Vector& q, double l) const {
        double s = 0.0;
        for (int i = 0; i < q.size(); ++i)
            if (q[i] > 0.0) {
                double d = q[i] / m.probs()[i];
                s += q[i] * d * u.phi_double_prime(l * d);
            }
        return s;
    }

    // returns l*; l_warm is updated in place
    double solve(const Vector& q, double u0_value, double& l_warm) const {
        auto r = [&](double l) { return l * Ap(q, l) - A(q, l) + u0_value; };
        auto dr = [&](double l) { return l * App(q, l); };
        double lo = std::max(l_warm, 1e-12), hi = lo;
        if (!bracket_positive(r, lo, hi, 1e-12, 1e12))
            throw std::runtime_error("penalty: could not bracket the scalar root");
        auto rr = newton_bisect(r, dr, lo, hi, 0.5 * (lo + hi),
                                1e-13 * (1.0 + std::fabs(u0_value)), 200);
        l_warm = rr.x;
        return rr.x;
    }
};

ExtReal penalty_inf(const FiniteMarket& m, const Utility& u, const Vector& q,
                    double u0_value) {
    bool unbounded_above = !u.u_infinity().is_finite();
    for (int i = 0; i < q.size(); ++i)
        if (q[i] <= 0.0 && unbounded_above) return ExtReal::pos_inf();
    PenaltyScalar ps{m, u};
    double l_warm = 1.0;
    double l_star = ps.solve(q, u0_value, l_warm);
    return ExtReal((ps.A(q, l_star) - u0_value) / l_star);
}

}  // namespace

ExtReal penalty(const FiniteMarket& m, const Utility& u, const Vector& q,
                double x, double u0_value) {
    ExtReal inf_part = penalty_inf(m, u, q, u0_value);
    if (!inf_part.is_finite()) return inf_part;
    // x + inf_l {...}; roundoff can leave a ~1e-12 negative at the argmin
    double a = x + inf_part.value();
    if (a < 0.0 && a > -1e-9) a = 0.0;
    return ExtReal(a);
}

ExtReal penalty(const FiniteMarket& m, const Utility& u, const Vector& q,
                double x) {
    double u0 = primal_value(m, u, Vector::Zero(m.states()), x);
    return penalty(m, u, q, x, u0);
}

namespace {

// projected ascent of q -> q.B - alpha(q) from a given start; the warm
// scalar root is carried across iterations and the vertex gap
// max_v grad . (v - q) certifies optimality of the concave objective
Vector ascend_price_objective(const FiniteMarket& m, const Utility& u,
                              const Vector& B, double x, double u0,
                              Vector q, double& value_out) {
    const MartingalePolytope& poly = m.polytope();
    const Matrix& T = poly.tangent_basis;
    PenaltyScalar scalar{m, u};
    double l_warm = 1.0;

    // alpha(q) = x + inf_l (A(l) - u0)/l; the x offset cancels against the
    // x-dependence of u0 but must not be dropped from the objective
    auto value = [&](const Vector& qq) -> double {
        if (qq.minCoeff() <= 0.0 && !u.u_infinity().is_finite()) return -1e300;
        double l_star = scalar.solve(qq, u0, l_warm);
        return qq.dot(B) - x - (scalar.A(qq, l_star) - u0) / l_star;
    };
    // envelope: d alpha / d q_i = Phi'(l* q_i / p_i) at the last solved l*
    auto grad = [&](const Vector& qq) {
        Vector g(qq.size());
        for (int i = 0; i < qq.size(); ++i)
            g[i] = B[i] - u.phi_prime(l_warm * std::max(qq[i], kFloor) /
                                      m.probs()[i]);
        return g;
    };

    double fv = value(q);
    double step = 1.0;
    Vector q_prev, g_prev;
    for (int it = 0; it < 400; ++it) {
        Vector g = grad(q);
        Vector pg = T.cols() > 0 ? Vector(T * (T.transpose() * g))
                                 : Vector::Zero(q.size());
        // optimality gap of the linearization over the polytope
        double gap = polytope_linear_max(poly, g) - q.dot(g);
        if (gap <= 1e-8 || pg.lpNorm<Eigen::Infinity>() < 1e-14) break;

        if (it > 0) {
            Vector dq = q - q_prev, dg = g - g_prev;
            double denom = -dq.dot(dg);  // ascent: curvature is negative
            step = denom > 1e-300 ? dq.squaredNorm() / denom : 1.0;
            step = std::clamp(step, 1e-12, 1e6);
        }
        q_prev = q;
        g_prev = g;

        double smax = step;
        for (int i = 0; i < q.size(); ++i)
            if (pg[i] < 0.0) smax = std::min(smax, (kFloor - q[i]) / pg[i]);
        if (smax <= 1e-18) break;
        double t = smax;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            Vector cand = q + t * pg;
            double fc = value(cand);
            if (fc >= fv + 1e-4 * t * pg.squaredNorm()) {
                q = cand; fv = fc; moved = true; break;
            }
            t *= 0.5;
        }
        if (!moved) break;
    }

    // Newton polish: the envelope Hessian of alpha is
    //   l (D - v v' / A'') with D = diag(Phi''_i / p_i), v_i = (q_i/p_i)
    //   Phi''_i, A'' = v . q, positive definite on the tangent space
    if (T.cols() > 0) {
        const int n = static_cast<int>(q.size());
        for (int polish = 0; polish < 60; ++polish) {
            Vector g = grad(q);
            double gap = polytope_linear_max(poly, g) - q.dot(g);
            if (gap <= 1e-11) break;
            double l = l_warm;
            Vector D(n), v(n);
            for (int i = 0; i < n; ++i) {
                double qi = std::max(q[i], kFloor);
                double pdd = u.phi_double_prime(l * qi / m.probs()[i]);
                D[i] = pdd / m.probs()[i];
                v[i] = qi / m.probs()[i] * pdd;
            }
            double App = v.dot(q);
            Matrix H = l * (Matrix(D.asDiagonal()) -
                            (v * v.transpose()) / std::max(App, 1e-300));
            Matrix Ht = T.transpose() * H * T;
            Eigen::LDLT<Matrix> ldlt(Ht);
            if (ldlt.info() != Eigen::Success) break;
            Vector dq = T * Vector(ldlt.solve(T.transpose() * g));
            if (!dq.allFinite()) break;
            double t = 1.0;
            for (int i = 0; i < n; ++i)
                if (dq[i] < 0.0)
                    t = std::min(t, 0.995 * (kFloor - q[i]) / dq[i]);
            Vector cand = q + t * dq;
            double fc = value(cand);
            Vector gc = grad(cand);
            double gap_c = polytope_linear_max(poly, gc) - cand.dot(gc);
            if (gap_c >= gap && fc <= fv) break;
            q = cand;
            fv = fc;
        }
    }
    value_out = fv;
    return q;
}

}  // namespace

DualPriceResult dual_price_representation(const FiniteMarket& m,
                                          const Utility& u, const Vector& B,
                                          double x) {
    DualPriceResult out;
    const MartingalePolytope& poly = m.polytope();
    double u0 = primal_value(m, u, Vector::Zero(m.states()), x);

    std::vector<Vector> finals;
    std::vector<double> values;
    std::uint64_t rng = 0x9e3779b97f4a7c15ULL;
    for (int restart = 0; restart < 20; ++restart) {
        Vector start = restart == 0 ? poly.interior
                                    : random_polytope_point(poly, rng);
        // keep starts strictly interior
        start = 0.95 * start + 0.05 * poly.interior;
        double val = 0.0;
        Vector q = ascend_price_objective(m, u, B, x, u0, start, val);
        finals.push_back(q);
        values.push_back(val);
    }
    double best = *std::max_element(values.begin(), values.end());

    // candidate argmax set: converged points and vertices within 1e-7
    for (const auto& v : poly.vertices) {
        ExtReal a = penalty(m, u, v, x, u0);
        if (!a.is_finite()) continue;
        double val = v.dot(B) - a.value();
        finals.push_back(v);
        values.push_back(val);
        best = std::max(best, val);
    }
    for (std::size_t i = 0; i < finals.size(); ++i) {
        if (values[i] < best - 1e-7) continue;
        bool dup = false;
        for (const auto& w : out.maximizer_set)
            if ((w - finals[i]).lpNorm<Eigen::Infinity>() < 1e-6) {
                dup = true;
                break;
            }
        if (!dup) out.maximizer_set.push_back(finals[i]);
    }
    out.price = best;
    out.primal_route_price = price(m, u, B, x);
    if (std::fabs(out.price - out.primal_route_price) > 1e-7)
        throw std::runtime_error(
            "dual_price_representation: dual and root-finding prices disagree");
    return out;
}

std::vector<Vector> zero_penalty_set(const FiniteMarket& m, const Utility& u,
                                     double x) {
    return dual_price_representation(m, u, Vector::Zero(m.states()), x)
        .maximizer_set;
}

PriceBounds price_bounds(const FiniteMarket& m, const Utility& u,
                         const Vector& B, double x) {
    PriceBounds pb;
    double lower = -std::numeric_limits<double>::infinity();
    for (const auto& q : zero_penalty_set(m, u, x))
        lower = std::max(lower, q.dot(B));
    pb.lower = lower;
    pb.upper = ExtReal(polytope_linear_max(m.polytope(), B));
    double p = price(m, u, B, x);
    if (!(pb.lower <= p + 1e-9 && p <= pb.upper.value() + 1e-9))
        throw std::runtime_error("price_bounds: price escaped its bounds");
    return pb;
}

VolumeAsymptotics volume_asymptotics(const FiniteMarket& m, const Utility& u,
                                     const Vector& B, double x) {
    VolumeAsymptotics va;
    auto pi = [&](double b) -> double {
        if (u.is_exponential() && b > 1.0) {
            double g = u.gamma();
            return (exp_log_primal(m, g, Vector(b * B), 0.0) -
                    exp_log_primal(m, g, Vector::Zero(m.states()), 0.0)) /
                   g;
        }
        return price(m, u, Vector(b * B), x);
    };
    // two-level Richardson with grid ratio 10 (error linear in b resp. 1/b)
    auto extrap = [](double s_coarse, double s_fine) {
        return (10.0 * s_fine - s_coarse) / 9.0;
    };
    {
        double s2 = pi(1e-2) / 1e-2, s3 = pi(1e-3) / 1e-3, s4 = pi(1e-4) / 1e-4;
        va.slope0 = extrap(extrap(s2, s3), extrap(s3, s4));
    }
    {
        double s2 = pi(1e2) / 1e2, s3 = pi(1e3) / 1e3, s4 = pi(1e4) / 1e4;
        va.slope_inf = extrap(extrap(s2, s3), extrap(s3, s4));
    }
    double ref0 = -std::numeric_limits<double>::infinity();
    for (const auto& q : zero_penalty_set(m, u, x))
        ref0 = std::max(ref0, q.dot(B));
    va.slope0_reference = ref0;
    va.slope_inf_reference = polytope_linear_max(m.polytope(), B);
    va.slope0_matches = std::fabs(va.slope0 - va.slope0_reference) <= 1e-4;
    va.slope_inf_matches =
        std::fabs(va.slope_inf - va.slope_inf_reference) <= 1e-3;
    return va;
}

PriceReport full_price_report(const FiniteMarket& m, const Utility& u,
                              const Vector& B, double x) {
    PriceReport rep;
    DualPriceResult dual = dual_price_representation(m, u, B, x);
    rep.price = dual.primal_route_price;
    rep.argmax_measures = dual.maximizer_set;

    if (auto r = replicable(m, B)) {
        rep.replicable = true;
        rep.replication_constant = r->c;
        rep.replication_strategy = r->strategy;
    }

    PriceBounds pb = price_bounds(m, u, B, x);
    rep.lower_bound = pb.lower;
    rep.upper_bound = pb.upper;
    VolumeAsymptotics va = volume_asymptotics(m, u, B, x);
    rep.slope_at_zero = va.slope0;
    rep.slope_at_infinity = ExtReal(va.slope_inf);

    double u0 = primal_value(m, u, Vector::Zero(m.states()), x);
    double min_alpha = 1e300;
    auto add_entry = [&](const std::string& name, const Vector& q) {
        PriceReport::PenaltyEntry e;
        e.measure = name;
        e.q = q;
        e.expectation = q.dot(B);
        e.alpha = penalty(m, u, q, x, u0);
        if (e.alpha.is_finite()) {
            if (e.alpha.value() < -1e-9)
                throw std::runtime_error("full_price_report: negative penalty");
            min_alpha = std::min(min_alpha, e.alpha.value());
        }
        rep.penalty_at.push_back(std::move(e));
    };
    for (std::size_t k = 0; k < m.polytope().vertices.size(); ++k)
        add_entry("vertex_" + std::to_string(k), m.polytope().vertices[k]);

    DualSolution ds = minimize_dual(m, u, B, x + rep.price);
    add_entry("dual_optimizer", ds.q_star);
    PrimalSolution ps = maximize(m, u, B, x + rep.price);
    rep.duality_gap = std::fabs(ps.value - ds.value);
    rep.lambda_foc_residual = ds.foc_lambda_residual;
    rep.q_variational_residual = ds.foc_q_residual;

    // the sampled minimum must sit at (numerical) zero somewhere near the
    // zero-penalty set; the B-problem optimizer at x + pi(B) realizes it
    ExtReal alpha_star = penalty(m, u, minimize_dual(m, u, Vector::Zero(m.states()), x).q_star, x, u0);
    if (alpha_star.is_finite() && alpha_star.value() > 1e-6)
        throw std::runtime_error(
            "full_price_report: zero-penalty measure has nonzero penalty");
    return rep;
}

AxiomReport risk_measure_axioms(const FiniteMarket& m, const Utility& u,
                                double x, const std::vector<Vector>& claims,
                                std::uint64_t seed) {
    AxiomReport rep;
    if (claims.empty()) return rep;
    std::uint64_t s = seed ? seed : 1;
    auto nextu = [&s]() {
        s ^= s >> 12; s ^= s << 25; s ^= s >> 27;
        return static_cast<double>((s * 2685821657736338717ULL) >> 11) /
               9007199254740992.0;
    };
    auto pi = [&](const Vector& B) { return price(m, u, B, x); };

    const int n = m.states();
    const std::size_t k = claims.size();
    for (std::size_t pair = 0; pair + 1 < k; pair += 2) {
        const Vector& B1 = claims[pair];
        const Vector& B2 = claims[pair + 1];
        double t = 0.1 + 0.8 * nextu();
        double p1 = pi(B1), p2 = pi(B2);

        // convexity
        double mix = pi(t * B1 + (1.0 - t) * B2);
        rep.convexity_residual = std::max(
            rep.convexity_residual, mix - (t * p1 + (1.0 - t) * p2));

        // rho(B) = pi(-B) convexity restatement
        double rho_mix = pi(-(t * B1 + (1.0 - t) * B2));
        double rho1 = pi(-B1), rho2 = pi(-B2);
        rep.rho_convexity_residual = std::max(
            rep.rho_convexity_residual, rho_mix - (t * rho1 + (1.0 - t) * rho2));

        // monotonicity: B1 <= B1 + |noise|
        Vector bump(n);
        for (int i = 0; i < n; ++i) bump[i] = nextu();
        double p_up = pi(B1 + bump);
        rep.monotonicity_residual =
            std::max(rep.monotonicity_residual, p1 - p_up);

        // translation invariance
        for (double c : {-10.0, 0.5, 7.0}) {
            double shifted = pi(B1 + Vector::Constant(n, c));
            rep.translation_residual = std::max(
                rep.translation_residual, std::fabs(shifted - (p1 + c)));
        }
        ++rep.pairs_checked;
    }

    // continuity from below: B_n = B /\ level, doubling until B is reached
    {
        const Vector& B = claims.front();
        double pB = pi(B);
        double level = 1.0;
        double prev = -std::numeric_limits<double>::infinity();
        for (int it = 0; it < 64; ++it) {
            Vector Bn = B.cwiseMin(level);
            double pn = pi(Bn);
            rep.fatou_residual = std::max(rep.fatou_residual, prev - pn);
            prev = pn;
            if (level >= B.maxCoeff()) {
                rep.fatou_residual =
                    std::max(rep.fatou_residual, std::fabs(pn - pB));
                break;
            }
            level *= 2.0;
        }
    }
    return rep;
}

}  // namespace indiff

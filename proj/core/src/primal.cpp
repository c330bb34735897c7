#include "indiff/primal.hpp"

#include <cmath>
#include <stdexcept>

namespace indiff {

namespace {

// active columns after dropping dS^j == 0 (flat directions carry no content
// and stall the Newton iteration)
std::vector<int> active_columns(const Matrix& dS, std::vector<int>& dropped) {
    std::vector<int> act;
    for (int j = 0; j < dS.cols(); ++j) {
        if (dS.col(j).cwiseAbs().maxCoeff() < 1e-14) dropped.push_back(j);
        else act.push_back(j);
    }
    return act;
}

}  // namespace

PrimalSolution maximize(const FiniteMarket& m, const Utility& u,
                        const Vector& B, double x) {
    const int n = m.states();
    if (B.size() != n)
        throw std::invalid_argument("primal::maximize: claim length != states");

    PrimalSolution sol;
    std::vector<int> act = active_columns(m.delta_s(), sol.dropped_assets);
    const int da = static_cast<int>(act.size());
    Matrix dS(n, da);
    for (int j = 0; j < da; ++j) dS.col(j) = m.delta_s().col(act[j]);

    const Vector& p = m.probs();
    auto objective = [&](const Vector& h) {
        Vector wealth = (Vector::Constant(n, x) + dS * h - B);
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += p[i] * u.u(wealth[i]);
        return s;
    };

    Vector h = Vector::Zero(da);
    double fval = objective(h);
    double grad_norm = 0.0;
    bool hessian_singular = false;

    for (int it = 0; it < 500; ++it) {
        Vector wealth = Vector::Constant(n, x) + dS * h - B;
        Vector up(n), udd(n);
        for (int i = 0; i < n; ++i) {
            up[i] = u.u_prime(wealth[i]);
            udd[i] = u.u_double_prime(wealth[i]);
        }
        Vector grad = dS.transpose() * (p.cwiseProduct(up));
        grad_norm = da > 0 ? grad.lpNorm<Eigen::Infinity>() : 0.0;
        if (grad_norm <= 1e-10 || da == 0) { sol.converged = true; break; }

        Matrix H = dS.transpose() * (p.cwiseProduct(udd)).asDiagonal() * dS;
        Eigen::LDLT<Matrix> ldlt(-H);  // -H is PSD for concave u
        Vector step;
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
            step = ldlt.solve(grad);
            hessian_singular = (H * step + grad).lpNorm<Eigen::Infinity>() >
                               1e-8 * (1.0 + grad_norm);
        } else {
            hessian_singular = true;
        }
        if (hessian_singular || !step.allFinite())
            step = grad / (1.0 + grad.norm());  // gradient fallback

        // Armijo backtracking
        double t = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            double cand = objective(h + t * step);
            if (cand >= fval + 1e-4 * t * grad.dot(step)) {
                h += t * step;
                fval = cand;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break;  // stalled at numerical precision
    }

    // in the quadratic-convergence region the Armijo gains fall below double
    // resolution while the gradient can still sit near 1e-9; undamped Newton
    // steps judged on the gradient norm finish the polish
    if (!sol.converged && da > 0) {
        for (int polish = 0; polish < 50; ++polish) {
            Vector wealth = Vector::Constant(n, x) + dS * h - B;
            Vector up(n), udd(n);
            for (int i = 0; i < n; ++i) {
                up[i] = u.u_prime(wealth[i]);
                udd[i] = u.u_double_prime(wealth[i]);
            }
            Vector grad = dS.transpose() * (p.cwiseProduct(up));
            grad_norm = grad.lpNorm<Eigen::Infinity>();
            if (grad_norm <= 1e-10) { sol.converged = true; break; }
            Matrix H = dS.transpose() * (p.cwiseProduct(udd)).asDiagonal() * dS;
            Eigen::LDLT<Matrix> ldlt(-H);
            if (ldlt.info() != Eigen::Success) break;
            Vector step = ldlt.solve(grad);
            if (!step.allFinite()) break;
            Vector h_new = h + step;
            Vector wealth_new = Vector::Constant(n, x) + dS * h_new - B;
            Vector up_new(n);
            for (int i = 0; i < n; ++i) up_new[i] = u.u_prime(wealth_new[i]);
            Vector grad_new = dS.transpose() * (p.cwiseProduct(up_new));
            if (grad_new.lpNorm<Eigen::Infinity>() >= grad_norm) break;
            h = h_new;
        }
        fval = objective(h);
    }

    sol.value = fval;
    sol.f_B = Vector::Constant(n, x) + dS * h;
    sol.gradient_residual = grad_norm;
    sol.unique = !hessian_singular;
    sol.h_star = Vector::Zero(m.assets());
    for (int j = 0; j < da; ++j) sol.h_star[act[j]] = h[j];

    // minimal c with h . dS >= -c W
    Vector gains = dS * h;
    double c = 0.0;
    for (int i = 0; i < n; ++i)
        c = std::max(c, std::max(0.0, -gains[i]) / m.loss_variable()[i]);
    sol.admissibility_scale = c;
    return sol;
}

double exp_log_primal(const FiniteMarket& m, double gamma, const Vector& B,
                      double x, Vector* h_out) {
    const int n = m.states();
    PrimalSolution dummy;
    std::vector<int> act = active_columns(m.delta_s(), dummy.dropped_assets);
    const int da = static_cast<int>(act.size());
    Matrix dS(n, da);
    for (int j = 0; j < da; ++j) dS.col(j) = m.delta_s().col(act[j]);
    Vector logp = m.probs().array().log();

    // F(h) = logsumexp_i( log p_i - gamma (h . dS_i - B_i) ), convex in h
    auto eval = [&](const Vector& h, Vector* grad, Matrix* hess) {
        Vector e = logp - gamma * (dS * h - B);
        double mx = e.maxCoeff();
        Vector w = (e.array() - mx).exp();
        double Z = w.sum();
        double F = mx + std::log(Z);
        if (grad || hess) {
            Vector sm = w / Z;  // softmax weights
            if (grad) *grad = -gamma * dS.transpose() * sm;
            if (hess) {
                Vector mean = dS.transpose() * sm;
                Matrix second = dS.transpose() * sm.asDiagonal() * dS;
                *hess = gamma * gamma * (second - mean * mean.transpose());
            }
        }
        return F;
    };

    Vector h = Vector::Zero(da);
    double F = eval(h, nullptr, nullptr);
    for (int it = 0; it < 500 && da > 0; ++it) {
        Vector grad;
        Matrix hess;
        F = eval(h, &grad, &hess);
        if (grad.lpNorm<Eigen::Infinity>() <= 1e-12 * gamma) break;
        Eigen::LDLT<Matrix> ldlt(hess + 1e-14 * Matrix::Identity(da, da));
        Vector step = -ldlt.solve(grad);
        if (!step.allFinite()) step = -grad / (1.0 + grad.norm());
        double t = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 60; ++ls) {
            double cand = eval(h + t * step, nullptr, nullptr);
            if (cand <= F + 1e-4 * t * grad.dot(step)) {
                h += t * step;
                F = cand;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if (!moved) break;  // decrease below double resolution
    }
    if (h_out) {
        *h_out = Vector::Zero(m.assets());
        for (int j = 0; j < da; ++j) (*h_out)[act[j]] = h[j];
    }
    return -gamma * x + eval(h, nullptr, nullptr);
}

}  // namespace indiff

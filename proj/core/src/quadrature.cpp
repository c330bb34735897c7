#include "indiff/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace indiff {

namespace {

// (G7, K15) nodes/weights on [-1, 1]: node, Gauss weight (0 on Kronrod-only
// nodes), Kronrod weight.
constexpr double kNW[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double y0 = f(mid);
    double g7 = kNW[0][1] * y0;
    double k15 = kNW[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        double dx = half * kNW[i][0];
        double yi = f(mid + dx) + f(mid - dx);
        g7 += kNW[i][1] * yi;
        k15 += kNW[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;
    double err = std::pow(200.0 * std::fabs(g7 - k15), 1.5);
    return {a, b, k15, err};
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double rel_tol, double abs_tol,
                              int max_intervals) {
    QuadResult out;
    if (a == b) { out.converged = true; return out; }
    std::priority_queue<Panel> q;
    q.push(eval_panel(f, a, b));
    double total = q.top().value, total_err = q.top().err;
    int n = 1;
    while (n < max_intervals &&
           total_err > std::max(abs_tol, rel_tol * std::fabs(total))) {
        Panel worst = q.top();
        q.pop();
        double mid = 0.5 * (worst.a + worst.b);
        Panel l = eval_panel(f, worst.a, mid);
        Panel r = eval_panel(f, mid, worst.b);
        total += l.value + r.value - worst.value;
        total_err += l.err + r.err - worst.err;
        q.push(l);
        q.push(r);
        ++n;
    }
    out.value = total;
    out.error_estimate = total_err;
    out.intervals = n;
    out.converged =
        total_err <= std::max(abs_tol, rel_tol * std::fabs(total)) * 4.0;
    return out;
}

QuadResult integrate_exponential_tail(const std::function<double(double)>& f,
                                      double rate, double log_amplitude,
                                      double tail_bound, double rel_tol) {
    if (!(rate > 0.0)) {
        QuadResult bad;
        bad.converged = false;
        return bad;
    }
    // remainder <= exp(log_amplitude - rate * y_max) / rate <= tail_bound
    double y_max =
        (log_amplitude - std::log(tail_bound * rate)) / rate;
    y_max = std::clamp(y_max, 8.0, 1e6);
    auto r = integrate_adaptive(f, 0.0, y_max, rel_tol, 1e-300, 8000);
    r.error_estimate += tail_bound;
    return r;
}

}  // namespace indiff

#include "indiff/exp_mixture.hpp"

#include <cmath>
#include <stdexcept>

#include "indiff/numeric.hpp"
#include "indiff/quadrature.hpp"

namespace indiff {

namespace {

double claim_delta(const ExpMixtureMarket::Claim& c) {
    if (auto* d = std::get_if<ExpMixtureMarket::DeltaYClaim>(&c))
        return d->delta;
    return 0.0;
}

const ExpMixtureMarket::BoundedAlphaClaim* claim_alpha(
    const ExpMixtureMarket::Claim& c) {
    return std::get_if<ExpMixtureMarket::BoundedAlphaClaim>(&c);
}

}  // namespace

std::vector<ExpMixtureMarket::ZAtom> ExpMixtureMarket::default_atoms(
    int N, double p1, double r) {
    if (N < 2 || !(p1 > 0.0 && p1 < 1.0) || !(r > 0.0 && r < 1.0))
        throw std::invalid_argument("default_atoms: bad parameters");
    std::vector<ZAtom> a;
    a.push_back({1.0, p1});
    double tail = 1.0 - p1;
    for (int n = 2; n <= N; ++n)
        a.push_back({1.0 / n - 1.0, tail * (1.0 - r) * std::pow(r, n - 2)});
    double total = 0.0;
    for (const auto& atom : a) total += atom.p;
    a.back().p += 1.0 - total;  // fold the truncated tail into the last atom
    return a;
}

ExpMixtureMarket::ExpMixtureMarket(std::vector<ZAtom> atoms, double gamma,
                                   Claim claim, LossTag loss,
                                   bool allow_nonmonotone)
    : atoms_(std::move(atoms)), gamma_(gamma), claim_(std::move(claim)),
      loss_(loss) {
    if (!(gamma_ > 0.0))
        throw std::invalid_argument("ExpMixtureMarket: gamma must be > 0");
    if (atoms_.empty())
        throw std::invalid_argument("ExpMixtureMarket: no atoms");
    if (std::fabs(atoms_.front().z - 1.0) > 1e-14 || !(atoms_.front().p > 0.0))
        throw std::invalid_argument(
            "ExpMixtureMarket: first atom must be z = 1 with positive weight");
    double s = 0.0;
    for (const auto& a : atoms_) {
        if (!(a.z > -1.0 && a.z <= 1.0))
            throw std::invalid_argument("ExpMixtureMarket: z must lie in (-1, 1]");
        if (!(a.p > 0.0))
            throw std::invalid_argument("ExpMixtureMarket: weights must be positive");
        s += a.p;
    }
    if (std::fabs(s - 1.0) > 1e-12)
        throw std::invalid_argument("ExpMixtureMarket: weights must sum to 1");

    delta_eff_ = gamma_ * claim_delta(claim_);
    if (auto* d = std::get_if<DeltaYClaim>(&claim_)) {
        if (!(d->delta > 0.0) || !(delta_eff_ < 1.0))
            throw std::invalid_argument(
                "ExpMixtureMarket: delta claim needs 0 < gamma*delta < 1");
    }
    if (auto* ba = claim_alpha(claim_)) {
        if (!(ba->bound >= 0.0) || !ba->alpha)
            throw std::invalid_argument("ExpMixtureMarket: bad bounded claim");
        // spot-check the certified bound
        for (const auto& a : atoms_)
            for (double y = 0.0; y <= 64.0; y += 0.5)
                if (std::fabs(ba->alpha(y, a.z)) > ba->bound * (1.0 + 1e-12))
                    throw std::invalid_argument(
                        "ExpMixtureMarket: alpha exceeds its certified bound");
    }

    h_max_ = (1.0 - delta_eff_) / gamma_;

    // g is concave, so g' > 0 on the whole interval iff g'(h_max) > 0; a few
    // interior samples guard the quadrature-backed claims
    monotone_ = true;
    for (double frac : {1.0, 0.75, 0.5, 0.25, 1e-3}) {
        double h = h_min() + frac * (h_max_ - h_min());
        ExtReal gp = g_prime(h);
        if (!gp.is_finite() || gp.value() <= 0.0) { monotone_ = false; break; }
    }
    if (!monotone_ && !allow_nonmonotone)
        throw MonotonicityError(
            "ExpMixtureMarket: g' > 0 fails on the admissible interval; the "
            "negative-z weights do not decay fast enough (adjust p1, r or N)");
}

double ExpMixtureMarket::atom_rate(double h, double z) const {
    return 1.0 + gamma_ * h * z - delta_eff_;
}

bool ExpMixtureMarket::has_closed_form() const {
    return claim_alpha(claim_) == nullptr;
}

// I_n(h) = E[e^{-gamma (h z_n Y - B)} | Z = z_n] = 1/rate for constant alpha
double ExpMixtureMarket::atom_i(double h, int n) const {
    double rate = atom_rate(h, atoms_[n].z);
    if (has_closed_form()) return 1.0 / rate;
    return atom_i_quad(h, n);
}

// J_n(h) = E[Y e^{-gamma (h z_n Y - B)} | Z = z_n] = 1/rate^2 likewise
double ExpMixtureMarket::atom_j(double h, int n) const {
    double rate = atom_rate(h, atoms_[n].z);
    if (has_closed_form()) return 1.0 / (rate * rate);
    return atom_j_quad(h, n);
}

double ExpMixtureMarket::atom_i_quad(double h, int n) const {
    const auto* ba = claim_alpha(claim_);
    double z = atoms_[n].z;
    double rate = atom_rate(h, z);
    double la = ba ? gamma_ * ba->bound : 0.0;
    auto f = [&](double y) {
        double a = ba ? ba->alpha(y, z) : 0.0;
        return std::exp(-rate * y + gamma_ * a);
    };
    auto r = integrate_exponential_tail(f, rate, la, 1e-16, 1e-12);
    return r.value;
}

double ExpMixtureMarket::atom_j_quad(double h, int n) const {
    const auto* ba = claim_alpha(claim_);
    double z = atoms_[n].z;
    double rate = atom_rate(h, z);
    // y e^{-rate y} <= (2/(e rate)) e^{-rate y / 2}
    double la = (ba ? gamma_ * ba->bound : 0.0) + std::log(2.0 / rate) - 1.0;
    auto f = [&](double y) {
        double a = ba ? ba->alpha(y, z) : 0.0;
        return y * std::exp(-rate * y + gamma_ * a);
    };
    auto r = integrate_exponential_tail(f, 0.5 * rate, la, 1e-16, 1e-12);
    return r.value;
}

ExtReal ExpMixtureMarket::g(double h) const {
    if (!(h > h_min() && h <= h_max_)) return ExtReal::neg_inf();
    double s = 0.0;
    for (int n = 0; n < static_cast<int>(atoms_.size()); ++n)
        s += atoms_[n].p * atom_i(h, n);
    return ExtReal(-s);
}

ExtReal ExpMixtureMarket::g_prime(double h) const {
    if (!(h > h_min() && h <= h_max_)) return ExtReal::neg_inf();
    double s = 0.0;
    for (int n = 0; n < static_cast<int>(atoms_.size()); ++n)
        s += atoms_[n].p * atoms_[n].z * atom_j(h, n);
    return ExtReal(gamma_ * s);
}

ExpMixtureMarket::OptimalExposure ExpMixtureMarket::optimal_h() const {
    OptimalExposure r;
    ExtReal gp_end = g_prime(h_max_);
    if (monotone_ || (gp_end.is_finite() && gp_end.value() > 0.0)) {
        r.h_star = h_max_;
        r.attained_at_boundary = true;
        return r;
    }
    // overridden monotonicity: g' is decreasing (g concave), root-find
    auto f = [&](double h) { return g_prime(h).value(); };
    double lo = h_min() + 1e-9 * (h_max_ - h_min());
    while (f(lo) <= 0.0 && lo < h_max_) lo = 0.5 * (lo + h_max_);
    r.h_star = bisect(f, lo, h_max_, 1e-13, 200).x;
    r.attained_at_boundary = false;
    return r;
}

ExpMixtureMarket::RegularDensity ExpMixtureMarket::dual_regular_density() const {
    RegularDensity rd;
    rd.h_star = optimal_h().h_star;
    const double h = rd.h_star;
    const int N = static_cast<int>(atoms_.size());

    std::vector<double> I(N), J(N);
    double Z = 0.0;
    for (int n = 0; n < N; ++n) {
        I[n] = atom_i(h, n);
        J[n] = atom_j(h, n);
        Z += atoms_[n].p * I[n];
    }
    rd.normalizer = Z;
    rd.atom_mass.resize(N);
    for (int n = 0; n < N; ++n) rd.atom_mass[n] = atoms_[n].p * I[n] / Z;

    double e_s1 = 0.0, e_y = 0.0;
    for (int n = 0; n < N; ++n) {
        e_s1 += atoms_[n].p * atoms_[n].z * J[n];
        e_y += atoms_[n].p * J[n];
    }
    e_s1 /= Z;
    e_y /= Z;
    rd.expected_s1 = e_s1;

    // H(Q|P) = E_Q[log dQ/dP] = -gamma h E_Q[S1] + gamma E_Q[B] - log Z
    double e_b = 0.0;
    if (auto* d = std::get_if<DeltaYClaim>(&claim_)) {
        e_b = d->delta * e_y;
    } else if (auto* ba = claim_alpha(claim_)) {
        double acc = 0.0;
        for (int n = 0; n < N; ++n) {
            double z = atoms_[n].z;
            double rate = atom_rate(h, z);
            double la = gamma_ * ba->bound + std::log(ba->bound + 1e-300);
            auto f = [&](double y) {
                double a = ba->alpha(y, z);
                return a * std::exp(-rate * y + gamma_ * a);
            };
            acc += atoms_[n].p *
                   integrate_exponential_tail(f, rate, la, 1e-16, 1e-12).value;
        }
        e_b = acc / Z;
    }
    rd.entropy = -gamma_ * h * e_s1 + gamma_ * e_b - std::log(Z);
    return rd;
}

ExpMixtureMarket::SingularMass ExpMixtureMarket::singular_mass() const {
    SingularMass sm;
    const double h = optimal_h().h_star;
    const int N = static_cast<int>(atoms_.size());

    // route 1: per-atom analytic formulas (quadrature-backed for varying alpha)
    double Z = 0.0, num = 0.0;
    for (int n = 0; n < N; ++n) {
        Z += atoms_[n].p * atom_i(h, n);
        num += atoms_[n].p * atoms_[n].z * atom_j(h, n);
    }
    sm.closed_form = h * num / Z;

    // route 2: adaptive quadrature of E_{Q^r}[h S1] per atom
    double Zq = 0.0, numq = 0.0;
    for (int n = 0; n < N; ++n) {
        Zq += atoms_[n].p * atom_i_quad(h, n);
        numq += atoms_[n].p * atoms_[n].z * atom_j_quad(h, n);
    }
    sm.quadrature = h * numq / Zq;
    return sm;
}

ExpTailClaim ExpMixtureMarket::claim_descriptor() const {
    ExpTailClaim d;
    if (auto* dc = std::get_if<DeltaYClaim>(&claim_)) {
        d.pos_coeff = dc->delta;
    } else if (auto* ba = claim_alpha(claim_)) {
        d.bound = ba->bound;
    }
    return d;
}

ExpMixtureMarket::SingularBounds ExpMixtureMarket::singular_bounds() const {
    SingularBounds sb;
    AdmissibilityReport rep =
        claim_admissible(claim_descriptor(), Utility::exponential(gamma_));
    sb.L = rep.L;
    sb.l = rep.l;
    sb.lower_coeff = rep.L.is_finite() ? -1.0 / rep.L.value() : 0.0;
    if (rep.l.is_pos_inf()) sb.upper_coeff = ExtReal(0.0);
    else if (rep.l.is_finite() && rep.l.value() > 0.0)
        sb.upper_coeff = ExtReal(1.0 / rep.l.value());
    else sb.upper_coeff = ExtReal::pos_inf();
    sb.claim_in_m_uhat = std::get_if<DeltaYClaim>(&claim_) == nullptr;
    return sb;
}

ExtReal ExpMixtureMarket::loss_moment_threshold() const {
    switch (loss_) {
        case LossTag::one_plus_y: return ExtReal(1.0);  // E[e^{aW}] < inf iff a < 1
        case LossTag::one_plus_sqrt_y: return ExtReal::pos_inf();
    }
    return ExtReal(1.0);
}

double hedging_delta(const ExpMixtureMarket& with_claim,
                     const ExpMixtureMarket& without_claim) {
    return with_claim.optimal_h().h_star - without_claim.optimal_h().h_star;
}

CompatibilityReport check_compatible(const ExpMixtureMarket& m,
                                     const Utility& u) {
    CompatibilityReport r;
    ExtReal thr = m.loss_moment_threshold();
    if (u.is_exponential()) {
        // E[u_hat(a W)] < inf iff a * gamma < thr
        if (thr.is_pos_inf()) return {true, true};
        r.strong = false;
        r.weak = thr.value() > 0.0;  // some a in (0, thr/gamma) works
        return r;
    }
    // custom utility: classify E[u_hat(a W(Y))] by the tail slope rule
    YoungPair yp(u);
    auto finite = [&](double a) {
        bool sqrt_w =
            m.loss_tag() == ExpMixtureMarket::LossTag::one_plus_sqrt_y;
        return uhat_exp_tail_finite(yp, [a, sqrt_w](double y) {
            return a * (1.0 + (sqrt_w ? std::sqrt(y) : y));
        });
    };
    r.weak = false;
    for (int k = 0; k <= 40 && !r.weak; ++k)
        r.weak = finite(std::ldexp(1.0, -k));
    r.strong = finite(1.0) && finite(4.0) && finite(16.0);
    return r;
}

SuitabilityReport check_suitable(const ExpMixtureMarket& m) {
    SuitabilityReport r;
    if (m.loss_tag() == ExpMixtureMarket::LossTag::one_plus_y) {
        // |S1| = Y |Z| <= Y < 1 + Y pathwise
        r.suitable = true;
        r.witness_scale = 1.0;
    } else {
        // sup_y y / (1 + sqrt(y)) = inf: no multiple of W dominates |S1|
        r.suitable = false;
        r.witness_scale = std::numeric_limits<double>::infinity();
    }
    return r;
}

}  // namespace indiff

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace indiff {

/// Finite distribution of a real random variable: atoms (value, prob) with
/// strictly positive probabilities summing to one within 1e-12.
class DiscreteDistribution {
public:
    struct Atom {
        double value;
        double prob;
    };

    explicit DiscreteDistribution(std::vector<Atom> atoms)
        : atoms_(std::move(atoms)) {
        if (atoms_.empty())
            throw std::invalid_argument("DiscreteDistribution: no atoms");
        double s = 0.0;
        for (const auto& a : atoms_) {
            if (!(a.prob > 0.0))
                throw std::invalid_argument(
                    "DiscreteDistribution: probabilities must be positive");
            s += a.prob;
        }
        if (std::fabs(s - 1.0) > 1e-12)
            throw std::invalid_argument(
                "DiscreteDistribution: probabilities must sum to 1");
    }

    static DiscreteDistribution from_values(const std::vector<double>& values,
                                            const std::vector<double>& probs) {
        if (values.size() != probs.size())
            throw std::invalid_argument("DiscreteDistribution: size mismatch");
        std::vector<Atom> a(values.size());
        for (std::size_t i = 0; i < values.size(); ++i)
            a[i] = {values[i], probs[i]};
        return DiscreteDistribution(std::move(a));
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }

    /// E[g(X)] with a fixed summation order (deterministic across runs).
    template <class F>
    double expect(F&& g) const {
        double s = 0.0;
        for (const auto& a : atoms_) s += a.prob * g(a.value);
        return s;
    }

    bool is_zero() const {
        for (const auto& a : atoms_)
            if (a.value != 0.0) return false;
        return true;
    }

    double max_abs_value() const {
        double m = 0.0;
        for (const auto& a : atoms_) m = std::max(m, std::fabs(a.value));
        return m;
    }

private:
    std::vector<Atom> atoms_;
};

}  // namespace indiff

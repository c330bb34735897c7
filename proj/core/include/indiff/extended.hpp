#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace indiff {

/// Extended real value: finite double, +inf or -inf, kept as an explicit tag
/// so that infinities coming out of conjugates and tail classifications are
/// deliberate values rather than float accidents.
class ExtReal {
public:
    enum class Tag { finite, pos_inf, neg_inf };

    ExtReal() : tag_(Tag::finite), v_(0.0) {}
    ExtReal(double v) : tag_(Tag::finite), v_(v) {
        if (std::isnan(v)) throw std::invalid_argument("ExtReal: NaN");
        if (std::isinf(v)) tag_ = v > 0 ? Tag::pos_inf : Tag::neg_inf;
    }

    static ExtReal pos_inf() { ExtReal e; e.tag_ = Tag::pos_inf; return e; }
    static ExtReal neg_inf() { ExtReal e; e.tag_ = Tag::neg_inf; return e; }

    bool is_finite() const { return tag_ == Tag::finite; }
    bool is_pos_inf() const { return tag_ == Tag::pos_inf; }
    bool is_neg_inf() const { return tag_ == Tag::neg_inf; }

    /// Finite value; throws if the tag is an infinity.
    double value() const {
        if (!is_finite()) throw std::logic_error("ExtReal: value() on infinite");
        return v_;
    }

    /// IEEE image of the value (finite, +inf or -inf); useful for comparisons.
    double as_double() const {
        switch (tag_) {
            case Tag::pos_inf: return std::numeric_limits<double>::infinity();
            case Tag::neg_inf: return -std::numeric_limits<double>::infinity();
            default: return v_;
        }
    }

    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        return a.tag_ == b.tag_ && (a.tag_ != Tag::finite || a.v_ == b.v_);
    }
    friend bool operator<(const ExtReal& a, const ExtReal& b) {
        return a.as_double() < b.as_double();
    }
    friend bool operator<=(const ExtReal& a, const ExtReal& b) {
        return a.as_double() <= b.as_double();
    }

    friend std::ostream& operator<<(std::ostream& os, const ExtReal& e) {
        switch (e.tag_) {
            case Tag::pos_inf: return os << "+inf";
            case Tag::neg_inf: return os << "-inf";
            default: return os << e.v_;
        }
    }

private:
    Tag tag_;
    double v_;
};

}  // namespace indiff

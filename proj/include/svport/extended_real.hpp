#pragma once

#include <cmath>
#include <limits>

#include "svport/errors.hpp"

namespace svport {

// Checked extended-real scalar: a finite double, +inf, or -inf. NaN is
// rejected at construction so every comparison is total. Infinities take
// part in comparisons and indicator logic only; code that needs a finite
// number calls finite_value(), which throws instead of propagating inf.
class ExtendedReal {
  public:
    ExtendedReal() : v_(0.0) {}
    ExtendedReal(double v) : v_(v) {
        if (std::isnan(v)) throw DomainError("ExtendedReal: NaN is not a value");
    }

    static ExtendedReal pos_inf() { return ExtendedReal(std::numeric_limits<double>::infinity()); }
    static ExtendedReal neg_inf() { return ExtendedReal(-std::numeric_limits<double>::infinity()); }

    bool is_finite() const { return std::isfinite(v_); }
    bool is_pos_inf() const { return std::isinf(v_) && v_ > 0; }
    bool is_neg_inf() const { return std::isinf(v_) && v_ < 0; }

    // Value including infinities; safe because NaN cannot occur.
    double as_double() const { return v_; }

    double finite_value() const {
        if (!is_finite()) throw DomainError("ExtendedReal: infinite where a finite value is required");
        return v_;
    }

    friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }
    friend bool operator!=(ExtendedReal a, ExtendedReal b) { return a.v_ != b.v_; }
    friend bool operator<(ExtendedReal a, ExtendedReal b) { return a.v_ < b.v_; }
    friend bool operator<=(ExtendedReal a, ExtendedReal b) { return a.v_ <= b.v_; }
    friend bool operator>(ExtendedReal a, ExtendedReal b) { return a.v_ > b.v_; }
    friend bool operator>=(ExtendedReal a, ExtendedReal b) { return a.v_ >= b.v_; }

  private:
    double v_;
};

} // namespace svport

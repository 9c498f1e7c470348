#pragma once

#include <cmath>
#include <limits>
#include <ostream>

namespace vlp {

/// A value in [0, +inf] where +inf is a distinguished state rather than a
/// large float. Exponents use it so that p = inf and p' = 1 are exact.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr explicit ExtendedReal(double finite) : value_(finite), infinite_(false) {}

  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    return r;
  }

  /// Inverse of reciprocal(); values of |r| below kZeroReciprocal map to inf.
  static ExtendedReal from_reciprocal(double r) {
    if (std::abs(r) <= kZeroReciprocal) return infinity();
    return ExtendedReal(1.0 / r);
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  /// Finite value; must not be called on infinity.
  constexpr double finite() const { return value_; }

  /// 1/x with the convention 1/inf = 0.
  double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

  /// Plain double, inf mapped to IEEE infinity. For printing and comparisons only.
  double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return !(b < a); }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
  friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
    if (x.infinite_) return os << "inf";
    return os << x.value_;
  }

  static constexpr double kZeroReciprocal = 1e-14;

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace vlp

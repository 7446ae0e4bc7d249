#pragma once

#include <cmath>
#include <limits>
#include <ostream>

namespace bosepath {

/// Value in (-inf, +inf]. The infinite state is an explicit flag; the
/// product 0 * inf is 0.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double value) : value_(value) {}  // NOLINT(implicit)

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.infinite_ = true;
    return r;
  }

  /// Maps an IEEE +inf (e.g. from 1/0 in a singular profile) onto the flag.
  static ExtReal from_double(double x) {
    if (std::isinf(x) && x > 0) return infinity();
    return ExtReal(x);
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  /// Finite value; callers must check is_finite() first.
  constexpr double value() const { return value_; }

  double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  ExtReal& operator+=(ExtReal other) {
    if (infinite_ || other.infinite_) {
      infinite_ = true;
      value_ = 0.0;
    } else {
      value_ += other.value_;
    }
    return *this;
  }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return a += b; }

  /// Scaling by a nonnegative real: 0 * inf = 0.
  friend ExtReal operator*(double s, ExtReal x) {
    if (x.infinite_) return s == 0.0 ? ExtReal(0.0) : infinity();
    return ExtReal(s * x.value_);
  }
  friend ExtReal operator*(ExtReal x, double s) { return s * x; }

  friend bool operator<(ExtReal a, ExtReal b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(ExtReal a, ExtReal b) { return b < a; }
  friend bool operator<=(ExtReal a, ExtReal b) { return !(b < a); }
  friend bool operator>=(ExtReal a, ExtReal b) { return !(a < b); }
  friend bool operator==(ExtReal a, ExtReal b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, ExtReal x) {
    if (x.infinite_) return os << "inf";
    return os << x.value_;
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

}  // namespace bosepath

#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace bosepath {

/// Position in R^d for d <= 3; unused coordinates stay zero.
using Point = std::array<double, 3>;

inline double norm2(const Point& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }
inline double norm(const Point& x) { return std::sqrt(norm2(x)); }
inline double distance2(const Point& x, const Point& y) {
  const Point diff{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
  return norm2(diff);
}
inline double distance(const Point& x, const Point& y) { return std::sqrt(distance2(x, y)); }

/// Surface area of the unit sphere in R^d (omega_1 = 2 counts both ends).
inline double unit_sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
  }
}

}  // namespace bosepath

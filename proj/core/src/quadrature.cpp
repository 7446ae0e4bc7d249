#include "bosepath/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bosepath/errors.hpp"

namespace bosepath::quad {

namespace {

std::vector<double> segments(double lo, double hi,
                             std::span<const double> breakpoints) {
  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(hi);
  return cuts;
}

double gauss20(const Integrand& g, double lo, double hi) {
  return boost::math::quadrature::gauss<double, 20>::integrate(g, lo, hi);
}

}  // namespace

double integrate(const Integrand& g, double lo, double hi,
                 std::span<const double> breakpoints, int pieces) {
  if (!(hi > lo)) return 0.0;
  const auto cuts = segments(lo, hi, breakpoints);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double width = (cuts[s + 1] - cuts[s]) / pieces;
    for (int p = 0; p < pieces; ++p) {
      const double a = cuts[s] + p * width;
      const double b = (p + 1 == pieces) ? cuts[s + 1] : a + width;
      total += gauss20(g, a, b);
    }
  }
  return total;
}

double integrate_adaptive(const Integrand& g, double lo, double hi,
                          std::span<const double> breakpoints, double rel_tol) {
  if (!(hi > lo)) return 0.0;
  const auto cuts = segments(lo, hi, breakpoints);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    total += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
        g, cuts[s], cuts[s + 1], 15, rel_tol);
  }
  return total;
}

namespace {

// Shared shell loop. `shell(k)` returns the contribution of the k-th shell.
template <typename Shell>
ImproperResult accumulate_shells(Shell&& shell, const ImproperPolicy& policy,
                                 const char* where) {
  ImproperResult result;
  double total = 0.0;
  double previous = 0.0;
  int quiet = 0;
  int stagnant = 0;
  for (int k = 0; k < policy.max_shells; ++k) {
    const double c = shell(k);
    total += c;
    result.partial_sums.push_back(total);
    if (std::abs(total) > policy.divergence_bound || !std::isfinite(total)) {
      result.finite = false;
      result.value = total;
      return result;
    }
    const double scale = std::max(std::abs(total), 1e-300);
    if (std::abs(c) <= policy.rel_tol * scale) {
      if (++quiet >= 3) {
        result.value = total;
        return result;
      }
    } else {
      quiet = 0;
    }
    if (k > 0 && std::abs(c) > 0.0 && std::abs(c) >= 0.999 * std::abs(previous)) {
      if (++stagnant >= policy.stagnation_shells) {
        result.finite = false;
        result.value = total;
        return result;
      }
    } else {
      stagnant = 0;
    }
    previous = c;
  }
  throw IndeterminateError(std::string(where) + ": improper integral undecided "
                           "within the shell budget",
                           result.partial_sums);
}

}  // namespace

ImproperResult integrate_to_origin(const Integrand& g, double outer,
                                   std::span<const double> breakpoints,
                                   const ImproperPolicy& policy) {
  return accumulate_shells(
      [&](int k) {
        const double hi = std::ldexp(outer, -k);
        const double lo = 0.5 * hi;
        return integrate(g, lo, hi, breakpoints, 1);
      },
      policy, "integrate_to_origin");
}

ImproperResult integrate_to_infinity(const Integrand& g, double inner,
                                     std::span<const double> breakpoints,
                                     const ImproperPolicy& policy) {
  return accumulate_shells(
      [&](int k) {
        const double lo = std::ldexp(inner, k);
        return integrate(g, lo, 2.0 * lo, breakpoints, 2);
      },
      policy, "integrate_to_infinity");
}

}  // namespace bosepath::quad

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bosepath::quad {

using Integrand = std::function<double(double)>;

/// Gauss-Legendre over [lo, hi], split at every breakpoint inside the
/// interval and into `pieces` equal panels per segment.
double integrate(const Integrand& g, double lo, double hi,
                 std::span<const double> breakpoints = {}, int pieces = 4);

/// Adaptive Gauss-Kronrod over [lo, hi] with the same breakpoint splitting.
double integrate_adaptive(const Integrand& g, double lo, double hi,
                          std::span<const double> breakpoints = {},
                          double rel_tol = 1e-11);

/// Outcome of an improper integral with divergence detection.
struct ImproperResult {
  bool finite = true;
  double value = 0.0;
  std::vector<double> partial_sums;
};

/// Refinement policy for improper integrals: geometric refinement until the
/// relative change drops below `rel_tol`, or the partial sums exceed
/// `divergence_bound` (reported as infinite).
struct ImproperPolicy {
  double rel_tol = 1e-8;
  double divergence_bound = 1e12;
  int max_shells = 400;
  int stagnation_shells = 24;  // non-decaying shells in a row => divergent
};

/// Integral of g over (0, outer] by dyadic shells (outer/2^{k+1}, outer/2^k].
/// Throws IndeterminateError when the budget runs out undecided.
ImproperResult integrate_to_origin(const Integrand& g, double outer,
                                   std::span<const double> breakpoints = {},
                                   const ImproperPolicy& policy = {});

/// Integral of g over [inner, inf) by dyadic shells [2^k inner, 2^{k+1} inner].
ImproperResult integrate_to_infinity(const Integrand& g, double inner,
                                     std::span<const double> breakpoints = {},
                                     const ImproperPolicy& policy = {});

}  // namespace bosepath::quad

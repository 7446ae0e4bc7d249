#pragma once

#include <vector>

#include "bosepath/extended_real.hpp"
#include "bosepath/potentials.hpp"

namespace bosepath {

/// Zero-energy radial solution u on [start, R_max] in d = 3.
struct ScatteringSolution {
  std::vector<double> radii;   // increasing; radii.front() is 0 or the core radius
  std::vector<double> u;
  std::vector<double> slope;   // u'
  double hard_core_radius = 0.0;
  bool normalized = false;     // u'(R_max) = 1 after post-scaling
  /// int v(r) u(r) r dr over the grid, accumulated alongside the solve.
  double moment = 0.0;
};

struct ScatteringReport {
  double length = 0.0;           // a(v)
  ExtReal born_length = 0.0;     // (1/8pi) int v; +inf with a hard core
  int dimension = 3;
  double tail_estimate = 0.0;    // spread of the extrapolants
  double unit_sphere_area = 0.0;
  bool degenerate = false;       // d = 2 fit without a logarithmic profile
};

struct ScatteringOptions {
  double r_max = 0.0;   // 0 picks 20 x (effective range), at least 20
  int steps = 20000;
};

/// Integrates u'' = v u / 2 from r = a (u = 0, u' = 1) or from r = 0 with
/// slope 1 by classical RK4 on a grid that is uniform between consecutive
/// breakpoints of v, then rescales so that u'(R_max) = 1.
ScatteringSolution solve_scattering_ode(const RadialPairPotential& v, double r_max, int steps);

/// lim r - u/u' by Neville extrapolation in 1/r over the last decade of the
/// grid (depth 3). Throws NonConvergenceError when the extrapolants spread
/// by more than 1e-6 max(1, a).
double scattering_length_3d(const ScatteringSolution& sol, double* tail_estimate = nullptr);

/// d = 2 scattering length from the logarithmic exterior profile, with
/// radius R beyond the support. Checks R-independence against 2R.
struct Scattering2d {
  double length = 0.0;
  bool degenerate = false;
  double relative_change = 0.0;  // between R and 2R
};
Scattering2d scattering_length_2d(const RadialPairPotential& v, double radius, int steps = 20000);

/// (1/8pi) int_{R^d} v(|y|) dy. Throws DivergenceError if infinite.
double born_length(const RadialPairPotential& v, int d);

/// int v(|x|) u(|x|)/|x| dx = omega_3 int v u r dr by trapezoidal quadrature
/// on the solution grid.
double scattering_identity_integral(const RadialPairPotential& v, const ScatteringSolution& sol);

/// Complete report: a(v), the Born length and diagnostics.
ScatteringReport scatter(const RadialPairPotential& v, int d, const ScatteringOptions& options = {});

}  // namespace bosepath

#include "bosepath/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "bosepath/errors.hpp"
#include "bosepath/geometry.hpp"
#include "bosepath/quadrature.hpp"

namespace bosepath {

namespace {

struct Segment {
  double lo;
  double hi;
  int steps;
};

// Splits [start, end] at the breakpoints; each piece is uniform with a
// spacing close to `h`.
std::vector<Segment> segment_grid(double start, double end, std::span<const double> breakpoints,
                                  double h) {
  std::vector<double> cuts{start};
  for (double b : breakpoints) {
    if (b > start && b < end) cuts.push_back(b);
  }
  cuts.push_back(end);
  std::vector<Segment> out;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double len = cuts[s + 1] - cuts[s];
    const int n = std::max(1, static_cast<int>(std::lround(len / h)));
    out.push_back({cuts[s], cuts[s + 1], n});
  }
  return out;
}

// v evaluated strictly inside the current segment so that a jump sitting on
// a segment end is seen from the correct side.
double inside(const RadialPairPotential& v, double r, const Segment& seg, double cutoff) {
  const double delta = 1e-12 * (seg.hi - seg.lo);
  const double x = std::clamp(r, seg.lo + delta, seg.hi - delta);
  return x > cutoff ? 0.0 : v.finite_part(x);
}

double default_r_max(const RadialPairPotential& v) {
  const double range = std::max({v.effective_range(), v.hard_core_radius(), 1.0});
  if (!std::isfinite(range)) {
    throw PreconditionError("scattering: potential has no finite effective range");
  }
  return 20.0 * range;
}

}  // namespace

ScatteringSolution solve_scattering_ode(const RadialPairPotential& v, double r_max, int steps) {
  const double a = v.hard_core_radius();
  if (!(r_max > a)) throw PreconditionError("solve_scattering_ode: R_max inside the hard core");
  if (v.effective_range() > r_max) {
    throw PreconditionError("solve_scattering_ode: R_max inside the effective support of v");
  }
  if (steps < 16) throw PreconditionError("solve_scattering_ode: too few steps");

  const auto segments = segment_grid(a, r_max, v.breakpoints(), (r_max - a) / steps);
  ScatteringSolution sol;
  sol.hard_core_radius = a;
  sol.radii.push_back(a);
  sol.u.push_back(0.0);
  sol.slope.push_back(1.0);

  // State (u, u', int v u r dr).
  std::array<double, 3> y{0.0, 1.0, 0.0};
  constexpr double kInfinity = std::numeric_limits<double>::infinity();
  for (const Segment& seg : segments) {
    const double h = (seg.hi - seg.lo) / seg.steps;
    auto rhs = [&](double r, const std::array<double, 3>& s) {
      const double vr = inside(v, r, seg, kInfinity);
      return std::array<double, 3>{s[1], 0.5 * vr * s[0], vr * s[0] * r};
    };
    for (int k = 0; k < seg.steps; ++k) {
      const double r = seg.lo + k * h;
      const auto k1 = rhs(r, y);
      std::array<double, 3> t;
      for (int c = 0; c < 3; ++c) t[c] = y[c] + 0.5 * h * k1[c];
      const auto k2 = rhs(r + 0.5 * h, t);
      for (int c = 0; c < 3; ++c) t[c] = y[c] + 0.5 * h * k2[c];
      const auto k3 = rhs(r + 0.5 * h, t);
      for (int c = 0; c < 3; ++c) t[c] = y[c] + h * k3[c];
      const auto k4 = rhs(r + h, t);
      for (int c = 0; c < 3; ++c) y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      if (!(y[1] > 0.0) || y[0] < 0.0) {
        throw NoAdmissibleSolution(
            "solve_scattering_ode: u' vanished or u went negative; the attractive part of v "
            "is too strong for a zero-energy solution");
      }
      sol.radii.push_back(k + 1 == seg.steps ? seg.hi : r + h);
      sol.u.push_back(y[0]);
      sol.slope.push_back(y[1]);
    }
  }

  const double scale = 1.0 / sol.slope.back();
  for (double& x : sol.u) x *= scale;
  for (double& x : sol.slope) x *= scale;
  sol.moment = y[2] * scale;
  sol.normalized = true;
  return sol;
}

double scattering_length_3d(const ScatteringSolution& sol, double* tail_estimate) {
  if (!sol.normalized) throw PreconditionError("scattering_length_3d: solution not normalized");
  const double r_max = sol.radii.back();
  std::array<double, 4> x{};
  std::array<double, 4> g{};
  for (int j = 0; j < 4; ++j) {
    const double target = r_max * std::pow(10.0, -j / 3.0);
    auto it = std::lower_bound(sol.radii.begin(), sol.radii.end(), target);
    if (it == sol.radii.end()) --it;
    const auto k = static_cast<std::size_t>(it - sol.radii.begin());
    x[j] = 1.0 / sol.radii[k];
    g[j] = sol.radii[k] - sol.u[k] / sol.slope[k];
  }
  // Neville tableau for the value at 1/r = 0.
  std::array<std::array<double, 4>, 4> p{};
  for (int i = 0; i < 4; ++i) p[i][i] = g[i];
  for (int len = 1; len < 4; ++len) {
    for (int i = 0; i + len < 4; ++i) {
      const int j = i + len;
      p[i][j] = (-x[j] * p[i][j - 1] + x[i] * p[i + 1][j]) / (x[i] - x[j]);
    }
  }
  const double value = p[0][3];
  const double spread = std::abs(p[0][3] - p[0][2]);
  if (tail_estimate) *tail_estimate = spread;
  if (spread > 1e-6 * std::max(1.0, std::abs(value))) {
    throw NonConvergenceError("scattering_length_3d: tail not converged, increase R_max", spread);
  }
  return std::max(value, 0.0);
}

namespace {

struct Radial2d {
  std::vector<double> radii;
  std::vector<double> psi;
};

// psi'' + psi'/r = v psi / 2, regular at the origin or vanishing on the core,
// normalized to psi(R) = 1. Only v on [0, cutoff] is seen.
Radial2d solve_radial_2d(const RadialPairPotential& v, double radius, int steps, double cutoff) {
  const double a = v.hard_core_radius();
  std::vector<double> breaks(v.breakpoints().begin(), v.breakpoints().end());
  if (std::isfinite(cutoff)) breaks.push_back(cutoff);
  std::sort(breaks.begin(), breaks.end());
  const auto segments = segment_grid(a, radius, breaks, (radius - a) / steps);

  std::array<double, 2> y = a > 0.0 ? std::array<double, 2>{0.0, 1.0}
                                    : std::array<double, 2>{1.0, 0.0};
  Radial2d out;
  out.radii.push_back(a);
  out.psi.push_back(y[0]);
  for (const Segment& seg : segments) {
    const double h = (seg.hi - seg.lo) / seg.steps;
    auto rhs = [&](double r, const std::array<double, 2>& s) {
      const double vr = inside(v, r, seg, cutoff);
      if (r == 0.0) return std::array<double, 2>{s[1], 0.25 * vr * s[0]};
      return std::array<double, 2>{s[1], 0.5 * vr * s[0] - s[1] / r};
    };
    for (int k = 0; k < seg.steps; ++k) {
      const double r = seg.lo + k * h;
      const auto k1 = rhs(r, y);
      const auto k2 = rhs(r + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
      const auto k3 = rhs(r + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
      const auto k4 = rhs(r + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
      for (int c = 0; c < 2; ++c) y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
      if (y[0] < 0.0 || (a > 0.0 && !(y[1] > 0.0))) {
        throw NoAdmissibleSolution("scattering_length_2d: no nonnegative increasing solution");
      }
      out.radii.push_back(k + 1 == seg.steps ? seg.hi : r + h);
      out.psi.push_back(y[0]);
    }
  }
  const double end = out.psi.back();
  if (!(end > 0.0)) throw NoAdmissibleSolution("scattering_length_2d: psi(R) is not positive");
  for (double& p : out.psi) p /= end;
  return out;
}

// log a = (log r - psi(r) log R) / (1 - psi(r)) at the node closest to sqrt(R* R).
Scattering2d fit_log_profile(const Radial2d& sol, double support) {
  Scattering2d out;
  const double radius = sol.radii.back();
  const double target = std::sqrt(std::max(support, 1e-300) * radius);
  auto it = std::lower_bound(sol.radii.begin(), sol.radii.end(), target);
  if (it == sol.radii.end()) --it;
  const auto k = static_cast<std::size_t>(it - sol.radii.begin());
  const double psi = sol.psi[k];
  const double denom = 1.0 - psi;
  if (std::abs(denom) < 1e-10) {
    out.degenerate = true;
    out.length = 0.0;
    return out;
  }
  const double log_a = (std::log(sol.radii[k]) - psi * std::log(radius)) / denom;
  out.length = std::exp(log_a);
  return out;
}

Scattering2d length_2d_truncated(const RadialPairPotential& v, double support, double radius,
                                 int steps, double cutoff) {
  const auto first = fit_log_profile(solve_radial_2d(v, radius, steps, cutoff), support);
  const auto second = fit_log_profile(solve_radial_2d(v, 2.0 * radius, steps, cutoff), support);
  if (first.degenerate || second.degenerate) {
    Scattering2d out;
    out.degenerate = true;
    return out;
  }
  Scattering2d out = first;
  out.relative_change = std::abs(second.length - first.length) / first.length;
  if (out.relative_change > 1e-4) {
    throw NonConvergenceError("scattering_length_2d: R-dependence detected", out.relative_change);
  }
  return out;
}

}  // namespace

Scattering2d scattering_length_2d(const RadialPairPotential& v, double radius, int steps) {
  if (v.is_identically_zero()) {
    Scattering2d out;
    out.degenerate = true;
    return out;
  }
  const double core = v.hard_core_radius();
  if (v.support_radius()) {
    const double support = std::max(*v.support_radius(), core);
    if (!(radius > support)) {
      throw PreconditionError("scattering_length_2d: R must exceed the support radius");
    }
    return length_2d_truncated(v, std::max(support, 1e-12), radius, steps,
                               std::numeric_limits<double>::infinity());
  }
  // Compactly supported approximations v 1_{[0, R*_n]}, R*_n = 2^n R*_0.
  double support = std::max(v.effective_range(), core);
  if (!std::isfinite(support)) {
    throw PreconditionError("scattering_length_2d: potential has no finite effective range");
  }
  const double ratio = radius / support;
  if (!(ratio > 1.0)) throw PreconditionError("scattering_length_2d: R must exceed the range");
  Scattering2d previous = length_2d_truncated(v, support, radius, steps, support);
  for (int n = 1; n < 8; ++n) {
    support *= 2.0;
    const auto next = length_2d_truncated(v, support, ratio * support, steps, support);
    if (previous.degenerate || next.degenerate ||
        std::abs(next.length - previous.length) <= 1e-4 * previous.length) {
      return next;
    }
    previous = next;
  }
  throw NonConvergenceError("scattering_length_2d: truncation sequence did not settle",
                            previous.length);
}

double born_length(const RadialPairPotential& v, int d) {
  if (v.has_hard_core()) throw DivergenceError("born_length: infinite Born length (hard core)");
  if (v.is_identically_zero()) return 0.0;
  const double omega = unit_sphere_area(d);
  auto integrand = [&](double r) { return omega * v.finite_part(r) * std::pow(r, d - 1); };
  const auto breaks = v.breakpoints();
  double inner_edge = std::isfinite(v.effective_range()) ? v.effective_range() : 1.0;
  for (double b : breaks) {
    if (b > 0.0) {
      inner_edge = std::min(inner_edge, b);
      break;
    }
  }
  const auto inner = quad::integrate_to_origin(integrand, inner_edge, breaks);
  if (!inner.finite) throw DivergenceError("born_length: infinite Born length (singular at 0)");
  double total = inner.value;
  if (v.support_radius()) {
    total += quad::integrate(integrand, inner_edge, *v.support_radius(), breaks, 8);
  } else {
    double outer_edge = inner_edge;
    if (std::isfinite(v.effective_range()) && v.effective_range() > inner_edge) {
      outer_edge = v.effective_range();
      total += quad::integrate(integrand, inner_edge, outer_edge, breaks, 16);
    }
    const auto tail = quad::integrate_to_infinity(integrand, outer_edge, breaks);
    if (!tail.finite) throw DivergenceError("born_length: infinite Born length (tail)");
    total += tail.value;
  }
  return total / (8.0 * std::numbers::pi);
}

double scattering_identity_integral(const RadialPairPotential& v, const ScatteringSolution& sol) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < sol.radii.size(); ++k) {
    const double r0 = sol.radii[k];
    const double r1 = sol.radii[k + 1];
    const double span = r1 - r0;
    // one-sided values keep jumps on the right side of the cell
    const double v0 = v.finite_part(r0 + 1e-12 * span);
    const double v1 = v.finite_part(r1 - 1e-12 * span);
    total += 0.5 * span * (v0 * sol.u[k] * r0 + v1 * sol.u[k + 1] * r1);
  }
  return unit_sphere_area(3) * total;
}

ScatteringReport scatter(const RadialPairPotential& v, int d, const ScatteringOptions& options) {
  if (d != 2 && d != 3) throw PreconditionError("scatter: dimension must be 2 or 3");
  ScatteringReport report;
  report.dimension = d;
  report.unit_sphere_area = unit_sphere_area(d);
  const double r_max = options.r_max > 0.0 ? options.r_max : default_r_max(v);
  if (d == 3) {
    const auto sol = solve_scattering_ode(v, r_max, options.steps);
    report.length = scattering_length_3d(sol, &report.tail_estimate);
  } else {
    const auto result = scattering_length_2d(v, r_max, options.steps);
    report.length = result.length;
    report.degenerate = result.degenerate;
    report.tail_estimate = result.relative_change;
  }
  try {
    report.born_length = born_length(v, d);
  } catch (const DivergenceError&) {
    report.born_length = ExtReal::infinity();
  }
  return report;
}

}  // namespace bosepath

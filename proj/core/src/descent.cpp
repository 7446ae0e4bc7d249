#include "bosepath/descent.hpp"

#include <algorithm>
#include <cmath>

#include "bosepath/errors.hpp"

namespace bosepath {

Stationarity evaluate_stationarity(const DescentProblem& problem, std::span<const double> phi) {
  const Grid& grid = *problem.grid;
  const std::size_t n = grid.size();
  Stationarity s;
  s.potential = problem.trap;
  double nonlinear_energy = 0.0;
  if (problem.nonlinearity) {
    std::vector<double> extra(n, 0.0);
    nonlinear_energy = problem.nonlinearity(phi, extra);
    for (std::size_t k = 0; k < n; ++k) s.potential[k] += extra[k];
  }
  std::vector<double> h_phi(n);
  ops::negative_laplacian(grid, phi, h_phi, problem.active);
  const double kinetic = ops::inner(grid, phi, h_phi);
  double trap_energy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    trap_energy += grid.volume(k) * problem.trap[k] * phi[k] * phi[k];
    h_phi[k] += s.potential[k] * phi[k];
    if (!problem.active.empty() && !problem.active[k]) h_phi[k] = 0.0;
  }
  s.multiplier = ops::inner(grid, phi, h_phi);
  s.energy = kinetic + trap_energy + nonlinear_energy;
  s.direction.resize(n);
  for (std::size_t k = 0; k < n; ++k) s.direction[k] = h_phi[k] - s.multiplier * phi[k];
  s.residual = ops::norm(grid, s.direction);
  return s;
}

DescentResult normalized_gradient_flow(const DescentProblem& problem, std::vector<double> initial,
                                       const DescentOptions& options) {
  const Grid& grid = *problem.grid;
  const std::size_t n = grid.size();
  if (initial.size() != n) throw PreconditionError("gradient flow: initial guess has wrong size");
  for (std::size_t k = 0; k < n; ++k) {
    if (!problem.active.empty() && !problem.active[k]) initial[k] = 0.0;
  }
  ops::normalize(grid, initial);

  DescentResult out;
  out.phi = std::move(initial);
  Stationarity current = evaluate_stationarity(problem, out.phi);

  // Largest stable, positivity-preserving step for the current potential.
  auto step_bound = [&](const Stationarity& s) {
    double largest = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (problem.active.empty() || problem.active[k]) {
        largest = std::max(largest, grid.laplacian_diagonal(k) + s.potential[k]);
      }
    }
    return options.step_scale / largest;
  };
  const double initial_step = step_bound(current);
  double step = initial_step;

  std::vector<double> trial(n);
  long iteration = 0;
  while (current.residual >= options.tolerance) {
    if (iteration >= options.max_iterations) {
      throw NonConvergenceError("gradient flow: iteration cap reached", current.residual);
    }
    ++iteration;
    for (std::size_t k = 0; k < n; ++k) trial[k] = out.phi[k] - step * current.direction[k];
    for (std::size_t k = 0; k < n; ++k) {
      if (trial[k] < 0.0) {
        if (trial[k] > -1e-300) {
          trial[k] = 0.0;
          continue;
        }
        throw InternalError("gradient flow: negative value produced by a positivity-preserving step");
      }
    }
    ops::normalize(grid, trial);
    Stationarity next = evaluate_stationarity(problem, trial);
    if (next.energy > current.energy + 1e-13 * std::max(1.0, std::abs(current.energy))) {
      step *= 0.5;
      if (step < 1e-8 * initial_step) {
        throw NonConvergenceError("gradient flow: step collapsed", current.residual);
      }
      continue;
    }
    out.phi.swap(trial);
    current = std::move(next);
    if (problem.nonlinearity) step = std::min(step, step_bound(current));
  }
  out.energy = current.energy;
  out.multiplier = current.multiplier;
  out.residual = current.residual;
  out.iterations = iteration;
  return out;
}

}  // namespace bosepath

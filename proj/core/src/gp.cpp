#include "bosepath/gp.hpp"

#include <cmath>
#include <numbers>

#include "bosepath/errors.hpp"

namespace bosepath {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

void require_normalized(const WaveFunction& phi, const char* where) {
  const double n = ops::norm(*phi.grid, phi.values);
  if (std::abs(n - 1.0) > 1e-8) {
    throw PreconditionError(std::string(where) + ": wave function is not normalized");
  }
}

}  // namespace

DescentProblem gp_problem(const GridPtr& grid, const TrapPotential& trap, double alpha) {
  if (alpha < 0.0) throw PreconditionError("gp: alpha must be nonnegative");
  auto sampled = sample_trap(*grid, trap);
  DescentProblem problem{grid, std::move(sampled.values), std::move(sampled.active), {}};
  if (alpha > 0.0) {
    problem.nonlinearity = [grid, alpha](std::span<const double> phi, std::span<double> potential) {
      double quartic = 0.0;
      for (std::size_t k = 0; k < phi.size(); ++k) {
        const double p2 = phi[k] * phi[k];
        potential[k] = 2.0 * kFourPi * alpha * p2;
        quartic += grid->volume(k) * p2 * p2;
      }
      return kFourPi * alpha * quartic;
    };
  }
  return problem;
}

GpEnergy gp_energy(const WaveFunction& phi, const TrapPotential& trap, double alpha) {
  require_normalized(phi, "gp_energy");
  const auto problem = gp_problem(phi.grid, trap, alpha);
  GpEnergy out;
  for (std::size_t k = 0; k < phi.values.size(); ++k) {
    if (!problem.active[k] && phi.values[k] != 0.0) {
      out.mass_where_trap_infinite = true;
      out.value = ExtReal::infinity();
      return out;
    }
  }
  out.value = evaluate_stationarity(problem, phi.values).energy;
  return out;
}

double gp_residual(const WaveFunction& phi, const TrapPotential& trap, double alpha) {
  require_normalized(phi, "gp_residual");
  return evaluate_stationarity(gp_problem(phi.grid, trap, alpha), phi.values).residual;
}

std::vector<double> gp_descent_direction(const WaveFunction& phi, const TrapPotential& trap,
                                         double alpha) {
  require_normalized(phi, "gp_descent_direction");
  return evaluate_stationarity(gp_problem(phi.grid, trap, alpha), phi.values).direction;
}

double suggested_extent(const TrapPotential& trap) {
  switch (trap.kind()) {
    case TrapPotential::Kind::harmonic:
      // exp(-sqrt(k) L^2 / 2) < 1e-8
      return std::sqrt(2.0 * std::log(1e8)) / std::pow(trap.parameter(), 0.25) + 1.0;
    case TrapPotential::Kind::hard_wall:
      return trap.parameter() * 1.05;
    default:
      return 10.0;
  }
}

WaveFunction gaussian_guess(const GridPtr& grid, const TrapPotential& trap) {
  double width = 1.0;
  if (trap.kind() == TrapPotential::Kind::harmonic) width = std::pow(trap.parameter(), -0.25);
  if (trap.kind() == TrapPotential::Kind::hard_wall) width = trap.parameter() / 3.0;
  WaveFunction phi(grid);
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double r = grid->radius(k);
    phi.values[k] = std::exp(-0.5 * r * r / (width * width));
  }
  const auto sampled = sample_trap(*grid, trap);
  for (std::size_t k = 0; k < grid->size(); ++k) {
    if (!sampled.active[k]) phi.values[k] = 0.0;
  }
  ops::normalize(*grid, phi.values);
  phi.normalized = true;
  return phi;
}

GpResult gp_minimize(const TrapPotential& trap, double alpha, const GridPtr& grid, double tolerance,
                     const GpOptions& options) {
  if (grid->nodes_per_axis() < 32) {
    throw PreconditionError("gp_minimize: grid must carry at least 32 nodes per axis");
  }
  const auto problem = gp_problem(grid, trap, alpha);
  const auto start = gaussian_guess(grid, trap);
  const auto flow = normalized_gradient_flow(problem, start.values,
                                             {tolerance, options.max_iterations, 0.8});
  GpResult out;
  out.minimizer = WaveFunction(grid, flow.phi);
  out.minimizer.normalized = true;
  out.multiplier = flow.multiplier;
  out.residual = flow.residual;
  out.iterations = flow.iterations;
  const auto energy = gp_energy(out.minimizer, trap, alpha);
  out.energy = energy.value.value();
  return out;
}

}  // namespace bosepath

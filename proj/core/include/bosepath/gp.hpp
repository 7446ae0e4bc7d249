#pragma once

#include "bosepath/descent.hpp"
#include "bosepath/extended_real.hpp"
#include "bosepath/grid.hpp"
#include "bosepath/potentials.hpp"

namespace bosepath {

/// Value of ||grad phi||^2 + <W, phi^2> + 4 pi alpha ||phi||_4^4.
struct GpEnergy {
  ExtReal value;
  bool mass_where_trap_infinite = false;
};

GpEnergy gp_energy(const WaveFunction& phi, const TrapPotential& trap, double alpha);

/// ||(-Laplacian + W + 8 pi alpha phi^2 - lambda) phi||_2 with
/// lambda = <phi, (-Laplacian + W + 8 pi alpha phi^2) phi>.
double gp_residual(const WaveFunction& phi, const TrapPotential& trap, double alpha);

/// The vector (H_phi - lambda) phi used as descent direction. Half the
/// gradient of the energy on the tangent space of the unit sphere.
std::vector<double> gp_descent_direction(const WaveFunction& phi, const TrapPotential& trap,
                                         double alpha);

struct GpResult {
  double energy = 0.0;
  WaveFunction minimizer;
  double multiplier = 0.0;
  double residual = 0.0;
  long iterations = 0;
};

struct GpOptions {
  long max_iterations = 4'000'000;
};

/// Minimizes the Gross-Pitaevskii functional by normalized gradient flow
/// from a positive Gaussian. The grid must carry at least 32 nodes per axis.
GpResult gp_minimize(const TrapPotential& trap, double alpha, const GridPtr& grid, double tolerance,
                     const GpOptions& options = {});

/// Positive Gaussian adapted to the trap's length scale, normalized.
WaveFunction gaussian_guess(const GridPtr& grid, const TrapPotential& trap);

/// Box half-width at which the alpha = 0 ground state of the trap has
/// decayed below 1e-8.
double suggested_extent(const TrapPotential& trap);

/// Descent problem for the functional; shared with the tests.
DescentProblem gp_problem(const GridPtr& grid, const TrapPotential& trap, double alpha);

}  // namespace bosepath

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bosepath/grid.hpp"

namespace bosepath {

/// State-dependent part of an energy functional on normalized grid
/// functions. `evaluate` writes the Euler-Lagrange potential U(phi) (so the
/// gradient of the energy term is 2 U phi) and returns the energy term.
using Nonlinearity = std::function<double(std::span<const double> phi, std::span<double> potential)>;

/// Energy ||grad phi||^2 + <trap, phi^2> + E_nl(phi) under ||phi||_2 = 1.
struct DescentProblem {
  GridPtr grid;
  std::vector<double> trap;
  std::vector<char> active;
  Nonlinearity nonlinearity;  // empty: linear problem
};

struct DescentOptions {
  double tolerance = 1e-8;
  long max_iterations = 4'000'000;
  /// Step = step_scale / max_k (Laplacian diagonal + W + U); 0.8 gives
  /// 0.4 h^2 for the 1D Laplacian.
  double step_scale = 0.8;
};

struct Stationarity {
  double energy = 0.0;
  double multiplier = 0.0;   // <phi, H phi>
  double residual = 0.0;     // ||H phi - lambda phi||
  std::vector<double> direction;  // H phi - lambda phi
  std::vector<double> potential;  // trap + U(phi)
};

Stationarity evaluate_stationarity(const DescentProblem& problem, std::span<const double> phi);

struct DescentResult {
  std::vector<double> phi;
  double energy = 0.0;
  double multiplier = 0.0;
  double residual = 0.0;
  long iterations = 0;
};

/// Discrete imaginary-time descent: phi <- normalize(phi - tau (H phi - lambda phi)),
/// halving tau whenever the energy would increase. Stops once the residual
/// falls below the tolerance; NonConvergenceError at the iteration cap.
DescentResult normalized_gradient_flow(const DescentProblem& problem, std::vector<double> initial,
                                       const DescentOptions& options);

}  // namespace bosepath

#pragma once

#include <optional>
#include <vector>

#include "bosepath/extended_real.hpp"
#include "bosepath/grid.hpp"
#include "bosepath/pair_kernel.hpp"
#include "bosepath/potentials.hpp"

namespace bosepath {

/// N normalized factors h_1..h_N on a common grid with their multipliers.
struct ProductState {
  std::vector<WaveFunction> factors;
  std::vector<double> multipliers;
};

struct HartreeResult {
  double energy_per_particle = 0.0;
  ProductState state;
  double residual = 0.0;
  bool symmetric = false;
  int sweeps = 0;
  std::vector<double> energy_history;  // per sweep
};

struct HartreeOptions {
  int max_sweeps = 50;
  long inner_iterations = 4'000'000;
  /// Starting factors; required for hard-core v (disjoint supports).
  std::optional<std::vector<WaveFunction>> initial;
};

/// <rho, V sigma> for densities on a common grid.
ExtReal pair_term(const GridFunction& rho, const GridFunction& sigma, const RadialPairPotential& v);
ExtReal pair_term(const GridFunction& rho, const GridFunction& sigma, const PairKernel& kernel);

/// (1/N)[sum_i (||grad h_i||^2 + <W, h_i^2>) + sum_{i<j} <h_i^2, V h_j^2>].
ExtReal hartree_energy(const ProductState& state, const TrapPotential& trap, const PairKernel& kernel);
ExtReal hartree_energy(const ProductState& state, const TrapPotential& trap,
                       const RadialPairPotential& v);

/// lambda_i = ||grad h_i||^2 + <W, h_i^2> + sum_{j != i} <h_i^2, V h_j^2>.
std::vector<double> hartree_multipliers(const ProductState& state, const TrapPotential& trap,
                                        const PairKernel& kernel);

/// Per-factor residuals ||-Laplacian h_i + W h_i + h_i sum_{j != i} V h_j^2 - lambda_i h_i||.
std::vector<double> hartree_residuals(const ProductState& state, const TrapPotential& trap,
                                      const PairKernel& kernel);

/// Cyclic coordinate descent over the factors. With `symmetric` set, the
/// equal-factor ansatz is minimized instead (see symmetric_hartree).
HartreeResult hartree_minimize(int n, const TrapPotential& trap, const RadialPairPotential& v,
                               const GridPtr& grid, double tolerance, bool symmetric = false,
                               const HartreeOptions& options = {});

/// Minimizes ||grad h||^2 + <W, h^2> + ((N-1)/2) <h^2, V h^2> over one function.
HartreeResult symmetric_hartree(int n, const TrapPotential& trap, const RadialPairPotential& v,
                                const GridPtr& grid, double tolerance,
                                const HartreeOptions& options = {});

struct TwoBodyResult {
  double energy_per_particle = 0.0;
  GridPtr product_grid;            // Cartesian d = 2 grid of (x_1, x_2)
  std::vector<double> state;       // normalized ground state on product_grid
  int iterations = 0;
};

/// Ground state of -Laplacian_2 + W(x_1) + W(x_2) + v(|x_1 - x_2|) on the
/// product of a 1D grid, by shifted inverse power iteration. The pair term
/// uses the same kernel as pair_term, so the result is a lower bound of the
/// product-state energy on that grid.
TwoBodyResult two_body_oracle(const TrapPotential& trap, const RadialPairPotential& v,
                              const GridPtr& grid);

}  // namespace bosepath

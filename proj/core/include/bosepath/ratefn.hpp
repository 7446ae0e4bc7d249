#pragma once

#include <vector>

#include "bosepath/extended_real.hpp"
#include "bosepath/grid.hpp"
#include "bosepath/potentials.hpp"

namespace bosepath {

/// Probability density (values phi^2) with unit mass on a grid.
struct DensityOnGrid {
  GridPtr grid;
  std::vector<double> values;

  /// Builds a density from nonnegative values, normalizing the mass.
  static DensityOnGrid normalized(GridPtr grid, std::vector<double> values);
  static DensityOnGrid from_wave_function(const WaveFunction& phi);
  double mass() const;
};

/// Bounded test function on a grid.
struct TestFunction {
  GridPtr grid;
  std::vector<double> values;
  double bound() const;
};

struct CumulantOptions {
  double time_step = 0.01;
  double leak_tolerance = 1e-6;
};

struct CumulantValue {
  double value = 0.0;  // Lambda_beta(f)
  double beta = 0.0;
  double leak = 0.0;   // relative mass lost through the grid boundary
  int steps = 0;
};

struct CumulantGradient {
  CumulantValue cumulant;
  /// Density of the derivative of Lambda_beta with respect to f (unit mass).
  std::vector<double> density;
};

/// ||grad sqrt(mu)||^2 on the grid; infinite when mass sits next to an empty
/// interior cell with a square-root jump above sqrt(h).
ExtReal donsker_varadhan(const DensityOnGrid& mu);

/// I_N(mu) + <lifted W, mu> + <lifted v, mu> - N chi_N, for mu on the product
/// grid of N one-dimensional particles (grid dimension N), or any grid if N = 1.
/// The pair potential uses the same cell kernel as the Hartree module.
ExtReal canonical_rate(const DensityOnGrid& mu, const TrapPotential& trap,
                       const RadialPairPotential& v, int n, double chi_n);

/// sum_i I_1(mu_i) + sum_i <W, mu_i> + sum_{i<j} <mu_i, V mu_j> - N chi.
ExtReal hartree_rate(const std::vector<DensityOnGrid>& mu, const TrapPotential& trap,
                     const RadialPairPotential& v, double chi_otimes);

/// Lambda_beta(f) = (1/beta) log E_0[exp(int_0^beta f(B_s) ds)] via Strang
/// splitting of the grid Feynman-Kac semigroup. Cartesian grids only.
CumulantValue cumulant(const TestFunction& f, double beta, const CumulantOptions& options = {});

/// Cumulant together with its exact discrete gradient (forward/backward sweep).
CumulantGradient cumulant_gradient(const TestFunction& f, double beta,
                                   const CumulantOptions& options = {});

struct JBetaOptions {
  int iterations = 400;
  double bound = 50.0;
  double gradient_tolerance = 1e-9;
  int history = 12;
  CumulantOptions cumulant;
};

struct JBetaResult {
  ExtReal value;           // lower bound when not converged
  TestFunction maximizer;
  bool converged = false;
  bool clamped = false;    // the bound |f| <= bound was active
  double gradient_norm = 0.0;
  int iterations = 0;
};

/// sup_f <mu, f> - Lambda_beta(f) over grid functions with |f| <= bound,
/// by projected L-BFGS ascent. Infinite for single-cell spikes.
JBetaResult j_beta(const DensityOnGrid& mu, double beta, const JBetaOptions& options = {});

struct ChiOtimesOptions {
  int max_iterations = 2000;
  double damping = 0.5;
  double tolerance = 1e-11;
  CumulantOptions cumulant;
};

struct ChiOtimesResult {
  double value = 0.0;
  DensityOnGrid minimizer;
  TestFunction potential;  // f = -W - 2 g rho at the fixed point
  int iterations = 0;
};

/// inf over normalized phi of J_beta(phi^2) + <W, phi^2> + g ||phi||_4^4, by
/// the damped self-consistent iteration rho <- nu(-W - 2 g rho).
ChiOtimesResult chi_otimes_beta(double g, const TrapPotential& trap, double beta, const GridPtr& grid,
                                const ChiOtimesOptions& options = {});

/// J_beta(mu) + <W, mu> + g ||mu||_2^2 - chi; infinite when mu has no density.
ExtReal meanfield_rate(const DensityOnGrid& mu, const TrapPotential& trap, double g, double beta,
                       double chi, const JBetaOptions& options = {});

/// Single cell with more than half the mass on a grid with more than 128 nodes.
bool looks_singular(const DensityOnGrid& mu);

}  // namespace bosepath

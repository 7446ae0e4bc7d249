#include <gtest/gtest.h>

#include <bosepath/errors.hpp>
#include <bosepath/gp.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace bosepath;

TEST(Grid, CartesianNodesAndSpacing) {
  const auto g = Grid::cartesian(2, 33, 4.0);
  EXPECT_EQ(g->size(), 33u * 33u);
  EXPECT_DOUBLE_EQ(g->spacing(), 8.0 / 34.0);
  const auto origin = g->position(g->origin_index());
  EXPECT_DOUBLE_EQ(origin[0], 0.0);
  EXPECT_DOUBLE_EQ(origin[1], 0.0);
  EXPECT_THROW(Grid::cartesian(1, 32, 4.0), PreconditionError);
}

TEST(Grid, RadialVolumesSumToBall) {
  const auto g = Grid::radial(3, 100, 5.0);
  double total = 0.0;
  for (double v : g->volumes()) total += v;
  EXPECT_NEAR(total, 4.0 / 3.0 * std::numbers::pi * 125.0, 1e-9);
  const auto g2 = Grid::radial(2, 100, 5.0);
  total = 0.0;
  for (double v : g2->volumes()) total += v;
  EXPECT_NEAR(total, std::numbers::pi * 25.0, 1e-9);
}

TEST(Grid, LaplacianIsSymmetricAndPositive) {
  for (const auto& g : {Grid::cartesian(1, 41, 3.0), Grid::radial(2, 40, 3.0), Grid::radial(3, 40, 3.0)}) {
    std::vector<double> a(g->size()), b(g->size()), la(g->size()), lb(g->size());
    for (std::size_t k = 0; k < g->size(); ++k) {
      a[k] = std::sin(0.3 * k + 1.0);
      b[k] = std::cos(0.17 * k);
    }
    ops::negative_laplacian(*g, a, la);
    ops::negative_laplacian(*g, b, lb);
    EXPECT_NEAR(ops::inner(*g, a, lb), ops::inner(*g, b, la), 1e-10);
    EXPECT_GT(ops::kinetic(*g, a), 0.0);
  }
}

TEST(Gp, FreeHarmonicGroundStateMatchesTridiagonalOracle1d) {
  const int n = 161;
  const double L = 8.0;
  const auto chain = oracle::chain(n, L, [](double x) { return x * x; });
  const double expected = oracle::lowest_eigenvalue(chain.diag, chain.off);
  const auto result = gp_minimize(TrapPotential::harmonic(), 0.0, Grid::cartesian(1, n, L), 1e-9);
  EXPECT_NEAR(result.energy, expected, 1e-9);
  EXPECT_NEAR(result.multiplier, expected, 1e-9);
  EXPECT_LT(result.residual, 1e-9);
}

TEST(Gp, SeparableTwoDimensionalGroundState) {
  const int n = 41;
  const double L = 5.0;
  const auto chain = oracle::chain(n, L, [](double x) { return x * x; });
  const double expected = 2.0 * oracle::lowest_eigenvalue(chain.diag, chain.off);
  const auto result = gp_minimize(TrapPotential::harmonic(), 0.0, Grid::cartesian(2, n, L), 1e-9);
  EXPECT_NEAR(result.energy, expected, 1e-8);
}

TEST(Gp, HardWallGroundStateMatchesOracle) {
  const int n = 101;
  const double L = 2.0;
  const double wall = 1.0;
  const auto grid = Grid::cartesian(1, n, L);
  std::vector<double> diag;
  const double h = grid->spacing();
  for (std::size_t k = 0; k < grid->size(); ++k) {
    if (std::abs(grid->position(k)[0]) <= wall) diag.push_back(2.0 / (h * h));
  }
  const double expected = oracle::lowest_eigenvalue(diag, -1.0 / (h * h));
  const auto result = gp_minimize(TrapPotential::hard_wall(wall), 0.0, grid, 1e-9);
  EXPECT_NEAR(result.energy, expected, 1e-8);
  EXPECT_LT(expected, std::pow(std::numbers::pi / 2.0, 2.0));
  EXPECT_GT(expected, std::pow(std::numbers::pi / (2.0 * (wall + 2.0 * h)), 2.0));
}

TEST(Gp, RadialThreeDimensionalOscillator) {
  const auto result = gp_minimize(TrapPotential::harmonic(), 0.0, Grid::radial(3, 400, 7.0), 1e-9);
  EXPECT_NEAR(result.energy, 3.0, 2e-3);
}

TEST(Gp, EnergyIsIncreasingAndConcaveInAlpha) {
  const auto grid = Grid::cartesian(1, 121, 7.0);
  const auto trap = TrapPotential::harmonic();
  const double e0 = gp_minimize(trap, 0.0, grid, 1e-9).energy;
  const double e1 = gp_minimize(trap, 1.0, grid, 1e-9).energy;
  const double e2 = gp_minimize(trap, 2.0, grid, 1e-9).energy;
  EXPECT_LT(e0, e1);
  EXPECT_LT(e1, e2);
  EXPECT_GE(e1, 0.5 * (e0 + e2) - 1e-8);
}

TEST(Gp, MinimizerIsStationaryAndPositive) {
  const auto trap = TrapPotential::harmonic();
  const auto result = gp_minimize(trap, 3.0, Grid::cartesian(1, 121, 7.0), 1e-9);
  EXPECT_LT(gp_residual(result.minimizer, trap, 3.0), 1e-8);
  for (double v : result.minimizer.values) EXPECT_GE(v, 0.0);
  const auto e = gp_energy(result.minimizer, trap, 3.0);
  EXPECT_NEAR(e.value.value(), result.energy, 1e-10);
}

TEST(Gp, EnergyMatchesDirectSum) {
  const auto grid = Grid::cartesian(1, 81, 6.0);
  const auto trap = TrapPotential::harmonic(0.5);
  const auto phi = gaussian_guess(grid, trap);
  const double h = grid->spacing();
  double kinetic = 0.0, potential = 0.0, quartic = 0.0;
  const auto& v = phi.values;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double next = k + 1 < v.size() ? v[k + 1] : 0.0;
    kinetic += (next - v[k]) * (next - v[k]) / h;
    const double x = grid->position(k)[0];
    potential += 0.5 * x * x * v[k] * v[k] * h;
    quartic += v[k] * v[k] * v[k] * v[k] * h;
  }
  kinetic += v[0] * v[0] / h;
  const double alpha = 0.7;
  const double expected = kinetic + potential + 4.0 * std::numbers::pi * alpha * quartic;
  EXPECT_NEAR(gp_energy(phi, trap, alpha).value.value(), expected, 1e-10);
}

TEST(Gp, IterationCapRaisesNonConvergence) {
  GpOptions options;
  options.max_iterations = 3;
  EXPECT_THROW(gp_minimize(TrapPotential::harmonic(), 1.0, Grid::cartesian(1, 81, 6.0), 1e-12, options),
               NonConvergenceError);
}

TEST(Gp, RejectsCoarseGrids) {
  EXPECT_THROW(gp_minimize(TrapPotential::harmonic(), 0.0, Grid::cartesian(1, 15, 6.0), 1e-8),
               PreconditionError);
}

#include <gtest/gtest.h>

#include <bosepath/errors.hpp>
#include <bosepath/gp.hpp>
#include <bosepath/hartree.hpp>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"

using namespace bosepath;

namespace {

// h * |{y in cell l : |x_k - y| < R}|.
double square_well_cell_integral(double xk, double xl, double h, double R) {
  const double lo = std::max(xk - R, xl - 0.5 * h);
  const double hi = std::min(xk + R, xl + 0.5 * h);
  return h * std::max(0.0, hi - lo);
}

}  // namespace

TEST(PairKernel, OneDimensionalEntriesMatchCellIntegrals) {
  const auto grid = Grid::cartesian(1, 41, 4.0);
  const double c = 1.7, R = 0.55;
  PairKernel kernel(grid, RadialPairPotential::square_well(c, R));
  const double h = grid->spacing();
  for (std::size_t k : {0u, 7u, 20u, 33u}) {
    for (std::size_t l = 0; l < grid->size(); ++l) {
      const double expected =
          c * square_well_cell_integral(grid->position(k)[0], grid->position(l)[0], h, R);
      EXPECT_NEAR(kernel.entry(k, l), expected, 1e-9 * h * h) << k << "," << l;
      EXPECT_DOUBLE_EQ(kernel.entry(k, l), kernel.entry(l, k));
    }
  }
}

TEST(PairKernel, WideWellActsAsConstant) {
  const double c = 0.8;
  for (const auto& grid : {Grid::radial(2, 30, 3.0), Grid::radial(3, 30, 3.0), Grid::cartesian(2, 33, 2.0)}) {
    PairKernel kernel(grid, RadialPairPotential::square_well(c, 10.0));
    for (std::size_t k = 0; k < grid->size(); k += 7) {
      for (std::size_t l = 0; l < grid->size(); l += 5) {
        const double expected = c * grid->volume(k) * grid->volume(l);
        EXPECT_NEAR(kernel.entry(k, l), expected, 1e-9 * (1.0 + expected)) << grid->describe();
      }
    }
  }
}

TEST(PairKernel, PairTermMatchesDirectDoubleSum) {
  const auto grid = Grid::cartesian(1, 61, 5.0);
  const auto v = RadialPairPotential::gaussian(1.2, 0.7);
  PairKernel kernel(grid, v);
  GridFunction rho(grid), sigma(grid);
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double x = grid->position(k)[0];
    rho.values[k] = std::exp(-x * x);
    sigma.values[k] = std::exp(-(x - 1.0) * (x - 1.0) / 2.0);
  }
  double direct = 0.0;
  for (std::size_t k = 0; k < grid->size(); ++k) {
    for (std::size_t l = 0; l < grid->size(); ++l) {
      direct += rho.values[k] * kernel.entry(k, l) * sigma.values[l];
    }
  }
  EXPECT_NEAR(pair_term(rho, sigma, kernel).value(), direct, 1e-12 * direct);
  EXPECT_NEAR(pair_term(rho, sigma, v).value(), direct, 1e-12 * direct);
  EXPECT_NEAR(pair_term(sigma, rho, kernel).value(), direct, 1e-12 * direct);
}

TEST(PairKernel, HardCoreOverlapIsInfinite) {
  const auto grid = Grid::cartesian(1, 41, 4.0);
  PairKernel kernel(grid, RadialPairPotential::hard_core(1.0));
  std::vector<double> a(grid->size(), 0.0), b(grid->size(), 0.0);
  a[10] = 1.0;
  b[12] = 1.0;
  EXPECT_TRUE(kernel.pair(a, b).is_infinite());
  std::fill(b.begin(), b.end(), 0.0);
  b[35] = 1.0;
  EXPECT_EQ(kernel.pair(a, b).to_double(), 0.0);
}

TEST(Hartree, ZeroInteractionGivesFreeGroundState) {
  const int n = 121;
  const double L = 7.0;
  const auto grid = Grid::cartesian(1, n, L);
  const auto chain = oracle::chain(n, L, [](double x) { return x * x; });
  const double expected = oracle::lowest_eigenvalue(chain.diag, chain.off);
  for (bool symmetric : {false, true}) {
    const auto result = hartree_minimize(3, TrapPotential::harmonic(), RadialPairPotential::zero(), grid,
                                         1e-9, symmetric);
    EXPECT_NEAR(result.energy_per_particle, expected, 1e-9);
    for (double lambda : result.state.multipliers) EXPECT_NEAR(lambda, expected, 1e-8);
  }
}

TEST(Hartree, TwoBodyOracleWithoutInteractionIsSeparable) {
  const int n = 61;
  const double L = 6.0;
  const auto grid = Grid::cartesian(1, n, L);
  const auto chain = oracle::chain(n, L, [](double x) { return x * x; });
  const double expected = oracle::lowest_eigenvalue(chain.diag, chain.off);
  const auto result = two_body_oracle(TrapPotential::harmonic(), RadialPairPotential::zero(), grid);
  EXPECT_NEAR(result.energy_per_particle, expected, 1e-8);
}

TEST(Hartree, ProductEnergyBoundsTwoBodyEnergy) {
  const auto grid = Grid::cartesian(1, 81, 6.0);
  const auto trap = TrapPotential::harmonic();
  const auto v = RadialPairPotential::square_well(2.0);
  const auto product = hartree_minimize(2, trap, v, grid, 1e-8);
  const auto exact = two_body_oracle(trap, v, grid);
  EXPECT_GE(product.energy_per_particle, exact.energy_per_particle);
  EXPECT_GT(product.energy_per_particle - exact.energy_per_particle, 1e-4);
}

TEST(Hartree, SweepsDecreaseTheEnergy) {
  const auto grid = Grid::cartesian(1, 81, 6.0);
  const auto result = hartree_minimize(4, TrapPotential::harmonic(), RadialPairPotential::gaussian(1.5), grid, 1e-8);
  for (std::size_t s = 1; s < result.energy_history.size(); ++s) {
    EXPECT_LE(result.energy_history[s], result.energy_history[s - 1] * (1.0 + 1e-12));
  }
  EXPECT_LT(result.residual, 1e-8);
}

TEST(Hartree, EnergyIsPermutationInvariant) {
  const auto grid = Grid::cartesian(1, 81, 6.0);
  const auto trap = TrapPotential::harmonic();
  const auto v = RadialPairPotential::gaussian(1.5);
  auto result = hartree_minimize(3, trap, v, grid, 1e-8);
  const double before = hartree_energy(result.state, trap, v).value();
  auto permuted = result.state;
  std::rotate(permuted.factors.begin(), permuted.factors.begin() + 1, permuted.factors.end());
  EXPECT_NEAR(hartree_energy(permuted, trap, v).value(), before, 1e-13);
}

TEST(Hartree, SymmetricAnsatzAgreesForRepulsion) {
  const auto grid = Grid::cartesian(1, 81, 6.0);
  const auto trap = TrapPotential::harmonic();
  const auto v = RadialPairPotential::gaussian(0.5);
  const auto general = hartree_minimize(3, trap, v, grid, 1e-9);
  const auto symmetric = hartree_minimize(3, trap, v, grid, 1e-9, true);
  EXPECT_NEAR(general.energy_per_particle, symmetric.energy_per_particle, 1e-7);
  EXPECT_TRUE(symmetric.symmetric);
}

TEST(Hartree, MultipliersMatchStationarity) {
  const auto grid = Grid::cartesian(1, 81, 6.0);
  const auto trap = TrapPotential::harmonic();
  const auto v = RadialPairPotential::square_well(1.0);
  const auto result = hartree_minimize(2, trap, v, grid, 1e-9);
  PairKernel kernel(grid, v);
  const auto lambdas = hartree_multipliers(result.state, trap, kernel);
  const auto residuals = hartree_residuals(result.state, trap, kernel);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    EXPECT_NEAR(lambdas[i], result.state.multipliers[i], 1e-8);
    EXPECT_LT(residuals[i], 1e-8);
  }
}

TEST(Hartree, RejectsInvalidParticleCount) {
  const auto grid = Grid::cartesian(1, 81, 6.0);
  EXPECT_THROW(hartree_minimize(0, TrapPotential::harmonic(), RadialPairPotential::zero(), grid, 1e-8),
               PreconditionError);
}

#include <gtest/gtest.h>

#include <bosepath/errors.hpp>
#include <bosepath/hartree.hpp>
#include <bosepath/ratefn.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"

using namespace bosepath;

namespace {

TestFunction function_of(const GridPtr& grid, double (*f)(double)) {
  TestFunction out{grid, std::vector<double>(grid->size())};
  for (std::size_t k = 0; k < grid->size(); ++k) out.values[k] = f(grid->position(k)[0]);
  return out;
}

DensityOnGrid random_density(const GridPtr& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.5), c(-1.0, 1.0);
  const double width = u(rng), centre = c(rng);
  std::vector<double> values(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double x = grid->position(k)[0];
    values[k] = std::exp(-(x - centre) * (x - centre) / (width * width)) * (1.0 + 0.3 * std::sin(3.0 * x + width));
  }
  return DensityOnGrid::normalized(grid, values);
}

double expectation(const DensityOnGrid& mu, const TestFunction& f) {
  double total = 0.0;
  for (std::size_t k = 0; k < mu.values.size(); ++k) total += mu.grid->volume(k) * mu.values[k] * f.values[k];
  return total;
}

}  // namespace

TEST(DonskerVaradhan, GaussianHasOneHalf) {
  const auto grid = Grid::cartesian(1, 401, 8.0);
  std::vector<double> values(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double x = grid->position(k)[0];
    values[k] = std::exp(-x * x);
  }
  EXPECT_NEAR(donsker_varadhan(DensityOnGrid::normalized(grid, values)).value(), 0.5, 1e-3);
}

TEST(DonskerVaradhan, MatchesForwardDifferences) {
  std::mt19937_64 rng(2);
  const auto grid = Grid::cartesian(1, 101, 6.0);
  const auto mu = random_density(grid, rng);
  const double h = grid->spacing();
  double expected = 0.0;
  double prev = 0.0;
  for (double m : mu.values) {
    expected += (std::sqrt(m) - prev) * (std::sqrt(m) - prev) / h;
    prev = std::sqrt(m);
  }
  expected += prev * prev / h;
  EXPECT_NEAR(donsker_varadhan(mu).value(), expected, 1e-10 * expected);
}

TEST(DonskerVaradhan, JumpsAreInfinite) {
  const auto grid = Grid::cartesian(1, 101, 4.0);
  std::vector<double> values(grid->size(), 0.0);
  for (std::size_t k = 0; k < grid->size(); ++k) {
    if (std::abs(grid->position(k)[0]) < 1.0) values[k] = 1.0;
  }
  EXPECT_TRUE(donsker_varadhan(DensityOnGrid::normalized(grid, values)).is_infinite());
}

TEST(Cumulant, MatchesCrankNicolson) {
  const int n = 161;
  const double L = 8.0;
  const auto grid = Grid::cartesian(1, n, L);
  const auto f = function_of(grid, [](double x) { return -x * x; });
  CumulantOptions options;
  options.time_step = 0.002;
  for (double beta : {0.5, 2.0}) {
    const double expected = oracle::crank_nicolson_cumulant(n, L, [](double x) { return -x * x; }, beta, 8000);
    EXPECT_NEAR(cumulant(f, beta, options).value, expected, 2e-4) << beta;
  }
}

TEST(Cumulant, LongTimesApproachTheGroundState) {
  const int n = 161;
  const double L = 8.0;
  const auto grid = Grid::cartesian(1, n, L);
  const auto chain = oracle::chain(n, L, [](double x) { return x * x; });
  const double lambda = oracle::lowest_eigenvalue(chain.diag, chain.off);
  const auto f = function_of(grid, [](double x) { return -x * x; });
  const double l16 = cumulant(f, 16.0).value;
  const double l32 = cumulant(f, 32.0).value;
  EXPECT_LT(std::abs(l32 + lambda), std::abs(l16 + lambda));
  EXPECT_NEAR(l32, -lambda, 0.05);
}

TEST(Cumulant, ShiftByConstant) {
  const auto grid = Grid::cartesian(1, 101, 8.0);
  auto f = function_of(grid, [](double x) { return -0.5 * x * x + std::sin(x); });
  const double base = cumulant(f, 2.0).value;
  for (double c : {-3.0, 0.25, 4.0}) {
    auto g = f;
    for (double& v : g.values) v += c;
    EXPECT_NEAR(cumulant(g, 2.0).value - base, c, 1e-8);
  }
}

TEST(Cumulant, IsConvex) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto grid = Grid::cartesian(1, 121, 9.0);
  for (int trial = 0; trial < 10; ++trial) {
    TestFunction a{grid, std::vector<double>(grid->size())}, b = a, mid = a;
    for (std::size_t k = 0; k < grid->size(); ++k) {
      const double x = grid->position(k)[0];
      a.values[k] = -x * x + normal(rng);
      b.values[k] = -0.5 * x * x + 2.0 * normal(rng);
      mid.values[k] = 0.5 * (a.values[k] + b.values[k]);
    }
    EXPECT_LE(cumulant(mid, 1.0).value, 0.5 * (cumulant(a, 1.0).value + cumulant(b, 1.0).value) + 1e-12);
  }
}

TEST(Cumulant, GradientMatchesFiniteDifferences) {
  const auto grid = Grid::cartesian(1, 61, 6.0);
  auto f = function_of(grid, [](double x) { return -x * x + 0.3 * std::cos(2.0 * x); });
  const auto grad = cumulant_gradient(f, 1.5);
  for (std::size_t k : {20u, 30u, 37u}) {
    const double eps = 1e-5;
    auto up = f, down = f;
    up.values[k] += eps;
    down.values[k] -= eps;
    const double fd = (cumulant(up, 1.5).value - cumulant(down, 1.5).value) / (2.0 * eps);
    EXPECT_NEAR(grad.density[k] * grid->volume(k), fd, 1e-7);
  }
}

TEST(Cumulant, LeakIsReported) {
  const auto grid = Grid::cartesian(1, 41, 2.0);
  TestFunction zero{grid, std::vector<double>(grid->size(), 0.0)};
  EXPECT_THROW(cumulant(zero, 4.0), PreconditionError);
}

TEST(JBeta, FenchelYoungInequality) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto grid = Grid::cartesian(1, 81, 8.0);
  const double beta = 1.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto mu = random_density(grid, rng);
    const auto j = j_beta(mu, beta);
    ASSERT_TRUE(j.value.is_finite());
    EXPECT_GE(j.value.value(), -1e-10);
    for (int pair = 0; pair < 4; ++pair) {
      TestFunction f{grid, std::vector<double>(grid->size())};
      for (std::size_t k = 0; k < grid->size(); ++k) {
        const double x = grid->position(k)[0];
        f.values[k] = -0.3 * x * x + normal(rng);
      }
      EXPECT_LE(expectation(mu, f) - cumulant(f, beta).value, j.value.value() + 1e-8);
    }
  }
}

TEST(JBeta, FenchelEqualityAtGradientDensity) {
  const auto grid = Grid::cartesian(1, 81, 8.0);
  const double beta = 1.0;
  const auto f = function_of(grid, [](double x) { return -0.5 * x * x + 0.5 * std::sin(x); });
  const auto grad = cumulant_gradient(f, beta);
  const auto mu = DensityOnGrid::normalized(grid, grad.density);
  const double dual = expectation(mu, f) - grad.cumulant.value;
  const auto j = j_beta(mu, beta);
  EXPECT_NEAR(j.value.value(), dual, 1e-6);
}

TEST(JBeta, SpikesAreInfinite) {
  const auto grid = Grid::cartesian(1, 201, 8.0);
  std::vector<double> values(grid->size(), 1e-6);
  values[grid->origin_index()] = 1.0;
  const auto mu = DensityOnGrid::normalized(grid, values);
  EXPECT_TRUE(looks_singular(mu));
  EXPECT_TRUE(j_beta(mu, 1.0).value.is_infinite());
}

TEST(Rates, CanonicalRateVanishesAtGroundState) {
  const int n = 121;
  const double L = 7.0;
  const auto grid = Grid::cartesian(1, n, L);
  const auto chain = oracle::chain(n, L, [](double x) { return x * x; });
  const double lambda = oracle::lowest_eigenvalue(chain.diag, chain.off);
  const auto phi = oracle::lowest_eigenvector(chain.diag, chain.off);
  std::vector<double> density(n);
  for (int k = 0; k < n; ++k) density[k] = phi[k] * phi[k];
  const auto mu = DensityOnGrid::normalized(grid, density);
  const auto trap = TrapPotential::harmonic();
  EXPECT_NEAR(canonical_rate(mu, trap, RadialPairPotential::zero(), 1, lambda).value(), 0.0, 1e-9);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    EXPECT_GE(canonical_rate(random_density(grid, rng), trap, RadialPairPotential::zero(), 1, lambda).value(),
              -1e-9);
  }
}

TEST(Rates, HartreeRateVanishesAtHartreeMinimizer) {
  const auto grid = Grid::cartesian(1, 81, 6.0);
  const auto trap = TrapPotential::harmonic();
  const auto v = RadialPairPotential::gaussian(1.0);
  const auto result = hartree_minimize(2, trap, v, grid, 1e-10);
  std::vector<DensityOnGrid> mu;
  for (const auto& h : result.state.factors) mu.push_back(DensityOnGrid::from_wave_function(h));
  EXPECT_NEAR(hartree_rate(mu, trap, v, result.energy_per_particle).value(), 0.0, 1e-8);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DensityOnGrid> other{random_density(grid, rng), random_density(grid, rng)};
    EXPECT_GE(hartree_rate(other, trap, v, result.energy_per_particle).value(), -1e-9);
  }
}

TEST(Rates, ChiOtimesWithoutCouplingIsMinusCumulantOfTrap) {
  const int n = 81;
  const double L = 8.0;
  const auto grid = Grid::cartesian(1, n, L);
  const double beta = 1.0;
  const auto result = chi_otimes_beta(0.0, TrapPotential::harmonic(), beta, grid);
  const auto f = function_of(grid, [](double x) { return -x * x; });
  EXPECT_NEAR(result.value, -cumulant(f, beta).value, 1e-9);
}

TEST(Rates, MeanfieldRateIsNonnegativeAndVanishesAtMinimizer) {
  const auto grid = Grid::cartesian(1, 81, 8.0);
  const auto trap = TrapPotential::harmonic();
  const double beta = 1.0, g = 1.0;
  const auto chi = chi_otimes_beta(g, trap, beta, grid);
  EXPECT_NEAR(meanfield_rate(chi.minimizer, trap, g, beta, chi.value).value(), 0.0, 1e-6);
  JBetaOptions quick;
  quick.iterations = 100;
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 3; ++trial) {
    EXPECT_GE(meanfield_rate(random_density(grid, rng), trap, g, beta, chi.value, quick).value(), -1e-6);
  }
}

#include <gtest/gtest.h>

#include <bosepath/errors.hpp>
#include <bosepath/scattering.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace bosepath;

namespace {

double square_well_length_3d(double c, double radius) {
  const double kappa = std::sqrt(c / 2.0);
  return radius - std::tanh(kappa * radius) / kappa;
}

double square_well_length_2d(double c, double radius) {
  const double kappa = std::sqrt(c / 2.0);
  const double x = kappa * radius;
  return radius * std::exp(-std::cyl_bessel_i(0.0, x) / (x * std::cyl_bessel_i(1.0, x)));
}

}  // namespace

TEST(Scattering, HardCoreLengthIsTheCoreRadius) {
  EXPECT_NEAR(scatter(RadialPairPotential::hard_core(1.0), 3).length, 1.0, 1e-8);
  EXPECT_NEAR(scatter(RadialPairPotential::hard_core(0.4), 3).length, 0.4, 1e-8);
  EXPECT_NEAR(scatter(RadialPairPotential::hard_core(1.0), 2).length, 1.0, 1e-6);
}

TEST(Scattering, SquareWellMatchesClosedForm3d) {
  for (double c : {0.5, 2.0, 8.0, 30.0}) {
    EXPECT_NEAR(scatter(RadialPairPotential::square_well(c), 3).length, square_well_length_3d(c, 1.0),
                1e-8)
        << "c = " << c;
  }
}

TEST(Scattering, SquareWellMatchesClosedForm2d) {
  for (double c : {0.5, 2.0, 8.0}) {
    EXPECT_NEAR(scatter(RadialPairPotential::square_well(c), 2).length, square_well_length_2d(c, 1.0),
                1e-6 * square_well_length_2d(c, 1.0))
        << "c = " << c;
  }
}

TEST(Scattering, BornLengthOfSquareWell) {
  EXPECT_NEAR(born_length(RadialPairPotential::square_well(3.0), 3), 0.5, 1e-9);
  EXPECT_NEAR(born_length(RadialPairPotential::square_well(3.0), 2), 0.375, 1e-9);
  const double gauss = born_length(RadialPairPotential::gaussian(1.0, 1.0), 3);
  EXPECT_NEAR(gauss, std::pow(std::numbers::pi, 1.5) / (8.0 * std::numbers::pi), 1e-9);
  EXPECT_THROW(born_length(RadialPairPotential::hard_core(1.0), 3), DivergenceError);
}

TEST(Scattering, LengthBelowBornLength) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> strength(0.1, 10.0), width(0.3, 2.0);
  for (int i = 0; i < 5; ++i) {
    const auto v = RadialPairPotential::gaussian(strength(rng), width(rng));
    const auto report = scatter(v, 3);
    EXPECT_GT(report.length, 0.0);
    EXPECT_LT(report.length, report.born_length.value());
  }
}

TEST(Scattering, ScalingLaw) {
  const auto v = RadialPairPotential::square_well(2.0);
  const double base = scatter(v, 3).length;
  for (double xi : {0.5, 2.0, 10.0}) {
    EXPECT_NEAR(scatter(rescale_gp(v, xi), 3).length, xi * base, 1e-7 * xi * base);
  }
}

TEST(Scattering, SolutionIsBelowTheDiagonal) {
  const auto v = RadialPairPotential::square_well(4.0);
  const auto sol = solve_scattering_ode(v, 20.0, 20000);
  for (std::size_t k = 1; k < sol.radii.size(); ++k) {
    EXPECT_LT(sol.u[k], sol.radii[k] + 1e-12);
    EXPECT_GE(sol.slope[k], 0.0);
  }
}

TEST(Scattering, IdentityIntegral) {
  const auto v = RadialPairPotential::gaussian(3.0, 0.8);
  const auto sol = solve_scattering_ode(v, 30.0, 40000);
  const double a = scattering_length_3d(sol);
  EXPECT_NEAR(scattering_identity_integral(v, sol), 2.0 * 4.0 * std::numbers::pi * a, 1e-4 * 8 * std::numbers::pi * a);
}

TEST(Scattering, ZeroPotential) {
  EXPECT_NEAR(scatter(RadialPairPotential::zero(), 3).length, 0.0, 1e-12);
  EXPECT_TRUE(scatter(RadialPairPotential::zero(), 2).degenerate);
}

TEST(Scattering, RejectsDimensionOne) {
  EXPECT_THROW(scatter(RadialPairPotential::square_well(1.0), 1), PreconditionError);
}

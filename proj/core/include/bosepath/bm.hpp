#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bosepath/extended_real.hpp"
#include "bosepath/geometry.hpp"
#include "bosepath/grid.hpp"
#include "bosepath/potentials.hpp"

namespace bosepath {

/// Brownian motion with generator -Laplacian: per-coordinate increment
/// variance is this constant times the time step.
inline constexpr double kIncrementVariancePerTime = 2.0;

enum class StartMode { origin, sampled };
enum class PathModel { canonical, hartree };

/// N discretized paths on [0, beta] with M steps.
struct PathEnsemble {
  int particles = 0;
  int dim = 1;
  double beta = 0.0;
  int steps = 0;
  double dt = 0.0;
  StartMode start = StartMode::origin;
  std::uint64_t seed = 0;
  std::vector<Point> positions;  // particle-major, (steps + 1) per particle

  const Point& at(int i, int m) const {
    return positions[static_cast<std::size_t>(i) * (steps + 1) + m];
  }
  Point& at(int i, int m) { return positions[static_cast<std::size_t>(i) * (steps + 1) + m]; }
};

struct EnergyBreakdown {
  ExtReal trap;         // H
  ExtReal interaction;  // G
  ExtReal path;         // K
};

struct OccupationHistogram {
  GridPtr grid;
  std::vector<double> weights;  // sum to 1
  std::string label;
};

struct FreeEnergyEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long replicas = 0;
  double effective_samples = 0.0;
  long accepted = 0;  // replicas with nonzero weight
};

struct WeightedOccupation {
  OccupationHistogram histogram;
  double effective_samples = 0.0;
  bool low_ess_warning = false;
  /// Weighted time fraction spent outside the grid; the histogram is
  /// renormalized over the grid.
  double outside_mass = 0.0;
};

struct LocalTimeEstimate {
  double bandwidth = 0.0;
  double value = 0.0;       // at the bandwidth
  double value_half = 0.0;  // at half the bandwidth
};

/// Seed of the independent stream used by replica `replica`.
std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica);

/// Independent Gaussian increments of variance 2 dt per coordinate. In
/// sampled mode the start points are drawn from `start_density` (mass
/// density on a grid).
PathEnsemble sample_paths(int n, double beta, int steps, StartMode start, std::uint64_t seed,
                          int dim = 1, const GridFunction* start_density = nullptr);

/// Paths frozen at the given points; used for tests and diagnostics.
PathEnsemble constant_paths(const std::vector<Point>& points, double beta, int steps, int dim);

/// sum_i sum_m W(B^i_{t_m}) dt over left endpoints.
ExtReal trap_hamiltonian(const PathEnsemble& e, const TrapPotential& trap);

/// sum_{i<j} sum_m v(|B^i_{t_m} - B^j_{t_m}|) dt; infinite on hard-core contact.
ExtReal interaction_G(const PathEnsemble& e, const RadialPairPotential& v);

/// (1/beta) sum_{i<j} sum_{s,t} v(|B^i_s - B^j_t|) (dt stride)^2 on the
/// strided time grid. Cost O(N^2 (M / stride)^2).
ExtReal interaction_K(const PathEnsemble& e, const RadialPairPotential& v, int stride);

EnergyBreakdown energy_breakdown(const PathEnsemble& e, const TrapPotential& trap,
                                 const RadialPairPotential& v, int stride = 1);

/// Occupation measure of particle i: fraction of left-endpoint time nodes per cell.
OccupationHistogram occupation(const PathEnsemble& e, int i, const GridPtr& grid);
/// Mean of the N occupation measures.
OccupationHistogram mean_occupation(const PathEnsemble& e, const GridPtr& grid);

/// Kernel estimate of the intersection local time of B^i - B^j at 0 with a
/// Gaussian kernel. Bandwidth 0 selects sqrt(2 beta dt). Needs d in {2, 3}.
LocalTimeEstimate intersection_local_time(const PathEnsemble& e, int i, int j,
                                          double bandwidth = 0.0);

struct MonteCarloOptions {
  int dim = 1;
  int threads = 1;
  int blocks = 50;  // jackknife blocks, also the unit of parallel work
};

/// -(1/(N beta)) log of the replica average of exp(-H - G).
FreeEnergyEstimate free_energy_canonical(int n, double beta, int steps, long replicas,
                                         const TrapPotential& trap, const RadialPairPotential& v,
                                         std::uint64_t seed, const MonteCarloOptions& options = {});

/// As free_energy_canonical with K (time stride `stride`) in place of G.
FreeEnergyEstimate free_energy_hartree(int n, double beta, int steps, long replicas,
                                       const TrapPotential& trap, const RadialPairPotential& v,
                                       int stride, std::uint64_t seed,
                                       const MonteCarloOptions& options = {});

/// Importance-weighted average of the mean occupation histograms of the given
/// ensembles with weights exp(-H - G) or exp(-H - K).
WeightedOccupation weighted_mean_occupation(std::span<const PathEnsemble> ensembles, PathModel model,
                                            const TrapPotential& trap, const RadialPairPotential& v,
                                            const GridPtr& grid, int stride = 1);

/// Streaming variant of weighted_mean_occupation that samples the replicas
/// itself (same streams as the free-energy estimators) without storing paths.
WeightedOccupation sample_weighted_occupation(int n, double beta, int steps, long replicas,
                                              const TrapPotential& trap,
                                              const RadialPairPotential& v, PathModel model,
                                              int stride, const GridPtr& grid, std::uint64_t seed,
                                              const MonteCarloOptions& options = {});

}  // namespace bosepath

#include "bosepath/bm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "bosepath/errors.hpp"
#include "parallel.hpp"

namespace bosepath {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Point uniform_direction(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Point p{0.0, 0.0, 0.0};
  double r = 0.0;
  while (r == 0.0) {
    for (int a = 0; a < dim; ++a) p[a] = normal(rng);
    r = norm(p);
  }
  for (int a = 0; a < dim; ++a) p[a] /= r;
  return p;
}

Point sample_start(std::mt19937_64& rng, const GridFunction& density, int dim) {
  const Grid& g = *density.grid;
  if (g.dim() != dim) throw PreconditionError("sample_paths: start density has the wrong dimension");
  std::vector<double> cumulative(g.size());
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double w = g.volume(k) * density.values[k];
    if (w < 0.0) throw PreconditionError("sample_paths: negative start density");
    total += w;
    cumulative[k] = total;
  }
  if (!(total > 0.0)) throw PreconditionError("sample_paths: start density has no mass");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng) * total;
  const std::size_t k = static_cast<std::size_t>(
      std::min<std::ptrdiff_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                   cumulative.begin(),
                               static_cast<std::ptrdiff_t>(g.size()) - 1));
  const double h = g.spacing();
  if (g.kind() == GridKind::cartesian) {
    Point p = g.position(k);
    for (int a = 0; a < dim; ++a) p[a] += (uniform(rng) - 0.5) * h;
    return p;
  }
  const double lo = std::pow(k * h, dim);
  const double hi = std::pow((k + 1) * h, dim);
  const double r = std::pow(lo + uniform(rng) * (hi - lo), 1.0 / dim);
  Point p = uniform_direction(rng, dim);
  for (int a = 0; a < dim; ++a) p[a] *= r;
  return p;
}

constexpr std::size_t kOutside = std::numeric_limits<std::size_t>::max();

std::size_t find_cell(const Grid& g, const Point& p) {
  const double h = g.spacing();
  if (g.kind() == GridKind::radial) {
    const double k = std::floor(norm(p) / h);
    return k < static_cast<double>(g.size()) ? static_cast<std::size_t>(k) : kOutside;
  }
  const auto n = static_cast<long>(g.nodes_per_axis());
  const long centre = n / 2;
  std::size_t index = 0;
  std::size_t stride = 1;
  for (int a = 0; a < g.dim(); ++a) {
    const long c = std::lround(p[a] / h) + centre;
    if (c < 0 || c >= n) return kOutside;
    index += static_cast<std::size_t>(c) * stride;
    stride *= static_cast<std::size_t>(n);
  }
  return index;
}

// Adds the occupation of particle i scaled by `scale`; returns the mass that
// fell outside the grid.
double add_occupation(const PathEnsemble& e, int i, const Grid& g, double scale,
                      std::vector<double>& out) {
  const double w = scale / e.steps;
  double outside = 0.0;
  for (int m = 0; m < e.steps; ++m) {
    const std::size_t k = find_cell(g, e.at(i, m));
    if (k == kOutside) {
      outside += w;
    } else {
      out[k] += w;
    }
  }
  return outside;
}

void add_covered(const PathEnsemble& e, int i, const Grid& g, double scale, std::vector<double>& out) {
  if (add_occupation(e, i, g, scale, out) > 0.0) {
    throw PreconditionError("occupation: grid does not cover the paths");
  }
}

void check_grid_dim(const PathEnsemble& e, const Grid& g) {
  if (g.dim() != e.dim) throw PreconditionError("occupation: grid and paths differ in dimension");
}

}  // namespace

std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t replica) {
  return splitmix64(splitmix64(seed) ^ splitmix64(replica + 0x632be59bd9b4e019ULL));
}

PathEnsemble sample_paths(int n, double beta, int steps, StartMode start, std::uint64_t seed, int dim,
                          const GridFunction* start_density) {
  if (n < 1) throw PreconditionError("sample_paths: N must be positive");
  if (steps < 16) throw PreconditionError("sample_paths: at least 16 steps are required");
  if (!(beta > 0.0)) throw PreconditionError("sample_paths: beta must be positive");
  if (dim < 1 || dim > 3) throw PreconditionError("sample_paths: dimension must be 1, 2 or 3");
  if (start == StartMode::sampled && start_density == nullptr) {
    throw PreconditionError("sample_paths: sampled start needs a density");
  }
  PathEnsemble e;
  e.particles = n;
  e.dim = dim;
  e.beta = beta;
  e.steps = steps;
  e.dt = beta / steps;
  e.start = start;
  e.seed = seed;
  e.positions.assign(static_cast<std::size_t>(n) * (steps + 1), Point{0.0, 0.0, 0.0});
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(kIncrementVariancePerTime * e.dt));
  for (int i = 0; i < n; ++i) {
    if (start == StartMode::sampled) e.at(i, 0) = sample_start(rng, *start_density, dim);
    for (int m = 1; m <= steps; ++m) {
      Point p = e.at(i, m - 1);
      for (int a = 0; a < dim; ++a) p[a] += normal(rng);
      e.at(i, m) = p;
    }
  }
  return e;
}

PathEnsemble constant_paths(const std::vector<Point>& points, double beta, int steps, int dim) {
  if (points.empty()) throw PreconditionError("constant_paths: no points");
  PathEnsemble e;
  e.particles = static_cast<int>(points.size());
  e.dim = dim;
  e.beta = beta;
  e.steps = steps;
  e.dt = beta / steps;
  e.start = StartMode::sampled;
  for (const auto& p : points) e.positions.insert(e.positions.end(), steps + 1, p);
  return e;
}

ExtReal trap_hamiltonian(const PathEnsemble& e, const TrapPotential& trap) {
  if (trap.is_zero()) return ExtReal(0.0);
  double total = 0.0;
  for (int i = 0; i < e.particles; ++i) {
    for (int m = 0; m < e.steps; ++m) {
      const ExtReal w = trap(e.at(i, m));
      if (w.is_infinite()) return ExtReal::infinity();
      total += w.value();
    }
  }
  return ExtReal(total * e.dt);
}

ExtReal interaction_G(const PathEnsemble& e, const RadialPairPotential& v) {
  if (e.particles < 2 || v.is_identically_zero()) return ExtReal(0.0);
  double total = 0.0;
  for (int i = 0; i < e.particles; ++i) {
    for (int j = i + 1; j < e.particles; ++j) {
      for (int m = 0; m < e.steps; ++m) {
        const ExtReal value = v(distance(e.at(i, m), e.at(j, m)));
        if (value.is_infinite()) return ExtReal::infinity();
        total += value.value();
      }
    }
  }
  return ExtReal(total * e.dt);
}

ExtReal interaction_K(const PathEnsemble& e, const RadialPairPotential& v, int stride) {
  if (stride < 1 || e.steps % stride != 0) {
    throw PreconditionError("interaction_K: stride must divide the step count");
  }
  if (e.particles < 2 || v.is_identically_zero()) return ExtReal(0.0);
  const double w = e.dt * stride;
  double total = 0.0;
  for (int i = 0; i < e.particles; ++i) {
    for (int j = i + 1; j < e.particles; ++j) {
      for (int s = 0; s < e.steps; s += stride) {
        const Point& a = e.at(i, s);
        for (int t = 0; t < e.steps; t += stride) {
          const ExtReal value = v(distance(a, e.at(j, t)));
          if (value.is_infinite()) return ExtReal::infinity();
          total += value.value();
        }
      }
    }
  }
  return ExtReal(total * w * w / e.beta);
}

EnergyBreakdown energy_breakdown(const PathEnsemble& e, const TrapPotential& trap,
                                 const RadialPairPotential& v, int stride) {
  return {trap_hamiltonian(e, trap), interaction_G(e, v), interaction_K(e, v, stride)};
}

OccupationHistogram occupation(const PathEnsemble& e, int i, const GridPtr& grid) {
  if (i < 0 || i >= e.particles) throw PreconditionError("occupation: particle index out of range");
  check_grid_dim(e, *grid);
  OccupationHistogram out{grid, std::vector<double>(grid->size(), 0.0), "particle " + std::to_string(i)};
  add_covered(e, i, *grid, 1.0, out.weights);
  return out;
}

OccupationHistogram mean_occupation(const PathEnsemble& e, const GridPtr& grid) {
  check_grid_dim(e, *grid);
  OccupationHistogram out{grid, std::vector<double>(grid->size(), 0.0), "mean"};
  for (int i = 0; i < e.particles; ++i) add_covered(e, i, *grid, 1.0 / e.particles, out.weights);
  return out;
}

LocalTimeEstimate intersection_local_time(const PathEnsemble& e, int i, int j, double bandwidth) {
  if (e.dim != 2 && e.dim != 3) throw PreconditionError("intersection_local_time: needs d = 2 or 3");
  if (i == j || i < 0 || j < 0 || i >= e.particles || j >= e.particles) {
    throw PreconditionError("intersection_local_time: needs two distinct particles");
  }
  LocalTimeEstimate out;
  out.bandwidth = bandwidth > 0.0 ? bandwidth : std::sqrt(2.0 * e.beta * e.dt);
  auto estimate = [&](double h) {
    const double norm_const = std::pow(2.0 * std::numbers::pi * h * h, -0.5 * e.dim);
    const double inv = 1.0 / (2.0 * h * h);
    double total = 0.0;
    for (int s = 0; s < e.steps; ++s) {
      const Point& a = e.at(i, s);
      for (int t = 0; t < e.steps; ++t) total += std::exp(-distance2(a, e.at(j, t)) * inv);
    }
    return norm_const * total * e.dt * e.dt / (e.beta * e.beta);
  };
  out.value = estimate(out.bandwidth);
  out.value_half = estimate(0.5 * out.bandwidth);
  return out;
}

namespace {

/// sum_r exp(l_r) stored as exp(shift) * sum, so equal log-weights add exactly.
struct ScaledSum {
  double shift = kNegInf;
  double sum = 0.0;

  void add(double l) { merge(ScaledSum{l, 1.0}); }
  void merge(const ScaledSum& other) {
    if (other.shift == kNegInf) return;
    if (shift == kNegInf) {
      *this = other;
    } else if (other.shift > shift) {
      sum = sum * std::exp(shift - other.shift) + other.sum;
      shift = other.shift;
    } else {
      sum += other.sum * std::exp(other.shift - shift);
    }
  }
  double log() const { return shift == kNegInf ? kNegInf : shift + std::log(sum); }
  /// log of the mean over `count` terms.
  double log_mean(double count) const { return shift + std::log(sum / count); }
};

struct BlockPartial {
  long count = 0;
  long accepted = 0;
  ScaledSum weights;   // sum w
  ScaledSum squares;   // sum w^2
  std::vector<double> histogram;  // sum w * hist / sum w, i.e. normalized within the block
};

double log_weight(const PathEnsemble& e, PathModel model, const TrapPotential& trap,
                  const RadialPairPotential& v, int stride) {
  ExtReal total = trap_hamiltonian(e, trap);
  total += model == PathModel::canonical ? interaction_G(e, v) : interaction_K(e, v, stride);
  return total.is_infinite() ? kNegInf : -total.value();
}

std::vector<BlockPartial> run_blocks(long replicas, int blocks, int threads,
                                     const std::function<double(long, std::vector<double>*)>& replica,
                                     std::size_t bins) {
  std::vector<BlockPartial> partials(static_cast<std::size_t>(blocks));
  detail::parallel_for(partials.size(), threads, [&](std::size_t b) {
    BlockPartial& p = partials[b];
    const long lo = replicas * static_cast<long>(b) / blocks;
    const long hi = replicas * static_cast<long>(b + 1) / blocks;
    std::vector<double> hist;
    if (bins > 0) p.histogram.assign(bins, 0.0);
    for (long r = lo; r < hi; ++r) {
      if (bins > 0) hist.assign(bins, 0.0);
      const double lw = replica(r, bins > 0 ? &hist : nullptr);
      ++p.count;
      if (lw == kNegInf) continue;
      ++p.accepted;
      const double before = p.weights.log();
      p.weights.add(lw);
      p.squares.add(2.0 * lw);
      if (bins > 0) {
        // Running weighted average: keeps the histogram normalized within the block.
        const double merged = p.weights.log();
        const double keep = before == kNegInf ? 0.0 : std::exp(before - merged);
        const double add = std::exp(lw - merged);
        for (std::size_t k = 0; k < bins; ++k) p.histogram[k] = keep * p.histogram[k] + add * hist[k];
      }
    }
  });
  return partials;
}

FreeEnergyEstimate reduce_free_energy(const std::vector<BlockPartial>& partials, int n, double beta) {
  FreeEnergyEstimate out;
  ScaledSum total;
  ScaledSum total_sq;
  for (const auto& p : partials) {
    out.replicas += p.count;
    out.accepted += p.accepted;
    total.merge(p.weights);
    total_sq.merge(p.squares);
  }
  if (out.accepted == 0) {
    throw ZeroAcceptanceError(
        "free energy: every replica was rejected by the hard core; reduce beta or the core radius");
  }
  const double scale = -1.0 / (n * beta);
  out.value = scale * total.log_mean(static_cast<double>(out.replicas));
  out.effective_samples = std::exp(2.0 * total.log() - total_sq.log());

  const std::size_t b_count = partials.size();
  std::vector<double> leave_out(b_count);
  double mean = 0.0;
  for (std::size_t b = 0; b < b_count; ++b) {
    ScaledSum rest;
    for (std::size_t c = 0; c < b_count; ++c) {
      if (c != b) rest.merge(partials[c].weights);
    }
    const double rest_count = static_cast<double>(out.replicas - partials[b].count);
    leave_out[b] = rest.shift == kNegInf ? std::numeric_limits<double>::infinity()
                                         : scale * rest.log_mean(rest_count);
    mean += leave_out[b];
  }
  mean /= static_cast<double>(b_count);
  double spread = 0.0;
  for (double x : leave_out) spread += (x - mean) * (x - mean);
  out.std_error = std::sqrt(spread * (b_count - 1.0) / b_count);
  if (!std::isfinite(out.std_error)) out.std_error = std::numeric_limits<double>::infinity();
  return out;
}

WeightedOccupation reduce_histogram(const std::vector<BlockPartial>& partials, const GridPtr& grid,
                                    const std::string& label) {
  WeightedOccupation out;
  out.histogram.grid = grid;
  out.histogram.label = label;
  std::vector<double> weights(grid->size() + 1, 0.0);
  ScaledSum total;
  ScaledSum total_sq;
  for (const auto& p : partials) {
    if (p.accepted == 0) continue;
    const double before = total.log();
    total.merge(p.weights);
    total_sq.merge(p.squares);
    const double merged = total.log();
    const double keep = before == kNegInf ? 0.0 : std::exp(before - merged);
    const double add = std::exp(p.weights.log() - merged);
    for (std::size_t k = 0; k < weights.size(); ++k) {
      weights[k] = keep * weights[k] + add * p.histogram[k];
    }
  }
  if (total.shift == kNegInf) {
    throw ZeroAcceptanceError("weighted occupation: every replica was rejected by the hard core");
  }
  out.outside_mass = weights.back();
  weights.pop_back();
  const double inside = 1.0 - out.outside_mass;
  if (!(inside > 0.0)) throw PreconditionError("weighted occupation: no mass inside the grid");
  for (double& w : weights) w /= inside;
  out.histogram.weights = std::move(weights);
  out.effective_samples = std::exp(2.0 * total.log() - total_sq.log());
  out.low_ess_warning = out.effective_samples < 10.0;
  return out;
}

void check_replicas(long replicas) {
  if (replicas < 100) throw PreconditionError("free energy: at least 100 replicas are required");
}

FreeEnergyEstimate free_energy(int n, double beta, int steps, long replicas, const TrapPotential& trap,
                               const RadialPairPotential& v, PathModel model, int stride,
                               std::uint64_t seed, const MonteCarloOptions& options) {
  check_replicas(replicas);
  if (model == PathModel::hartree && (stride < 1 || steps % stride != 0)) {
    throw PreconditionError("free_energy_hartree: stride must divide the step count");
  }
  const int blocks = static_cast<int>(std::min<long>(options.blocks, replicas));
  auto replica = [&](long r, std::vector<double>*) {
    const auto e = sample_paths(n, beta, steps, StartMode::origin, replica_seed(seed, r), options.dim);
    return log_weight(e, model, trap, v, stride);
  };
  return reduce_free_energy(run_blocks(replicas, blocks, options.threads, replica, 0), n, beta);
}

}  // namespace

FreeEnergyEstimate free_energy_canonical(int n, double beta, int steps, long replicas,
                                         const TrapPotential& trap, const RadialPairPotential& v,
                                         std::uint64_t seed, const MonteCarloOptions& options) {
  return free_energy(n, beta, steps, replicas, trap, v, PathModel::canonical, 1, seed, options);
}

FreeEnergyEstimate free_energy_hartree(int n, double beta, int steps, long replicas,
                                       const TrapPotential& trap, const RadialPairPotential& v,
                                       int stride, std::uint64_t seed,
                                       const MonteCarloOptions& options) {
  if (options.dim == 3 && n > 1 && !v.is_identically_zero()) {
    const auto check = validate_hartree_assumption(v, 1.0);
    if (!check.holds) {
      throw PreconditionError(
          "free_energy_hartree: v is not integrable against the Green's function near 0");
    }
  }
  return free_energy(n, beta, steps, replicas, trap, v, PathModel::hartree, stride, seed, options);
}

WeightedOccupation weighted_mean_occupation(std::span<const PathEnsemble> ensembles, PathModel model,
                                            const TrapPotential& trap, const RadialPairPotential& v,
                                            const GridPtr& grid, int stride) {
  if (ensembles.empty()) throw PreconditionError("weighted_mean_occupation: no ensembles");
  auto replica = [&](long r, std::vector<double>* hist) {
    const PathEnsemble& e = ensembles[static_cast<std::size_t>(r)];
    check_grid_dim(e, *grid);
    const double lw = log_weight(e, model, trap, v, stride);
    for (int i = 0; i < e.particles; ++i) {
      hist->back() += add_occupation(e, i, *grid, 1.0 / e.particles, *hist);
    }
    return lw;
  };
  const auto partials =
      run_blocks(static_cast<long>(ensembles.size()), 1, 1, replica, grid->size() + 1);
  return reduce_histogram(partials, grid, "weighted mean");
}

WeightedOccupation sample_weighted_occupation(int n, double beta, int steps, long replicas,
                                              const TrapPotential& trap,
                                              const RadialPairPotential& v, PathModel model,
                                              int stride, const GridPtr& grid, std::uint64_t seed,
                                              const MonteCarloOptions& options) {
  check_replicas(replicas);
  if (grid->dim() != options.dim) {
    throw PreconditionError("weighted occupation: grid and paths differ in dimension");
  }
  const int blocks = static_cast<int>(std::min<long>(options.blocks, replicas));
  auto replica = [&](long r, std::vector<double>* hist) {
    const auto e = sample_paths(n, beta, steps, StartMode::origin, replica_seed(seed, r), options.dim);
    const double lw = log_weight(e, model, trap, v, stride);
    if (lw != kNegInf) {
      for (int i = 0; i < e.particles; ++i) {
        hist->back() += add_occupation(e, i, *grid, 1.0 / e.particles, *hist);
      }
    }
    return lw;
  };
  return reduce_histogram(run_blocks(replicas, blocks, options.threads, replica, grid->size() + 1),
                          grid, "weighted mean");
}

}  // namespace bosepath

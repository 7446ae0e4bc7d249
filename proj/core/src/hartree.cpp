#include "bosepath/hartree.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "bosepath/descent.hpp"
#include "bosepath/errors.hpp"
#include "bosepath/gp.hpp"

namespace bosepath {

namespace {

std::vector<double> density(const WaveFunction& h) {
  std::vector<double> rho(h.values.size());
  for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = h.values[k] * h.values[k];
  return rho;
}

void check_state(const ProductState& state, const PairKernel& kernel) {
  if (state.factors.empty()) throw PreconditionError("hartree: empty product state");
  for (const auto& f : state.factors) {
    if (f.grid.get() != kernel.grid().get()) throw PreconditionError("hartree: mismatched grids");
    if (std::abs(ops::norm(*f.grid, f.values) - 1.0) > 1e-8) {
      throw PreconditionError("hartree: factor is not normalized");
    }
  }
}

double one_body(const WaveFunction& h, const SampledTrap& trap) {
  const Grid& g = *h.grid;
  double e = ops::kinetic(g, h.values);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (h.values[k] == 0.0) continue;
    if (!trap.active[k]) return std::numeric_limits<double>::infinity();
    e += g.volume(k) * trap.values[k] * h.values[k] * h.values[k];
  }
  return e;
}

// Single-particle ground state of -Laplacian + W by gradient flow.
std::vector<double> free_ground_state(const GridPtr& grid, const TrapPotential& trap,
                                      const SampledTrap& sampled, double tolerance,
                                      long iterations) {
  DescentProblem problem{grid, sampled.values, sampled.active, {}};
  return normalized_gradient_flow(problem, gaussian_guess(grid, trap).values,
                                  {tolerance, iterations, 0.8})
      .phi;
}

}  // namespace

ExtReal pair_term(const GridFunction& rho, const GridFunction& sigma, const PairKernel& kernel) {
  if (rho.grid.get() != kernel.grid().get() || sigma.grid.get() != kernel.grid().get()) {
    throw PreconditionError("pair_term: mismatched grids");
  }
  return kernel.pair(rho.values, sigma.values);
}

ExtReal pair_term(const GridFunction& rho, const GridFunction& sigma, const RadialPairPotential& v) {
  if (rho.grid.get() != sigma.grid.get()) throw PreconditionError("pair_term: mismatched grids");
  if (v.is_identically_zero()) return ExtReal(0.0);
  return pair_term(rho, sigma, PairKernel(rho.grid, v));
}

ExtReal hartree_energy(const ProductState& state, const TrapPotential& trap, const PairKernel& kernel) {
  check_state(state, kernel);
  const auto sampled = sample_trap(*kernel.grid(), trap);
  const std::size_t n = state.factors.size();
  std::vector<std::vector<double>> rho;
  ExtReal total(0.0);
  for (const auto& f : state.factors) {
    total += ExtReal::from_double(one_body(f, sampled));
    rho.push_back(density(f));
  }
  if (!kernel.is_zero()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) total += kernel.pair(rho[i], rho[j]);
    }
  }
  return total * (1.0 / static_cast<double>(n));
}

ExtReal hartree_energy(const ProductState& state, const TrapPotential& trap,
                       const RadialPairPotential& v) {
  if (state.factors.empty()) throw PreconditionError("hartree: empty product state");
  return hartree_energy(state, trap, PairKernel(state.factors.front().grid, v));
}

namespace {

// sum_{j != i} V rho_j for every i.
std::vector<std::vector<double>> mean_fields(const ProductState& state, const PairKernel& kernel) {
  const std::size_t n = state.factors.size();
  const std::size_t size = kernel.grid()->size();
  std::vector<std::vector<double>> applied(n, std::vector<double>(size, 0.0));
  std::vector<double> total(size, 0.0);
  if (!kernel.is_zero()) {
    for (std::size_t j = 0; j < n; ++j) {
      kernel.apply(density(state.factors[j]), applied[j]);
      for (std::size_t k = 0; k < size; ++k) total[k] += applied[j][k];
    }
  }
  std::vector<std::vector<double>> out(n, total);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < size; ++k) out[i][k] -= applied[i][k];
  }
  return out;
}

std::vector<Stationarity> factor_stationarity(const ProductState& state, const TrapPotential& trap,
                                              const PairKernel& kernel) {
  check_state(state, kernel);
  const auto sampled = sample_trap(*kernel.grid(), trap);
  const auto fields = mean_fields(state, kernel);
  std::vector<Stationarity> out;
  for (std::size_t i = 0; i < state.factors.size(); ++i) {
    DescentProblem problem{kernel.grid(), sampled.values, {}, {}};
    for (std::size_t k = 0; k < problem.trap.size(); ++k) problem.trap[k] += fields[i][k];
    out.push_back(evaluate_stationarity(problem, state.factors[i].values));
  }
  return out;
}

}  // namespace

std::vector<double> hartree_multipliers(const ProductState& state, const TrapPotential& trap,
                                        const PairKernel& kernel) {
  std::vector<double> out;
  for (const auto& s : factor_stationarity(state, trap, kernel)) out.push_back(s.multiplier);
  return out;
}

std::vector<double> hartree_residuals(const ProductState& state, const TrapPotential& trap,
                                      const PairKernel& kernel) {
  std::vector<double> out;
  for (const auto& s : factor_stationarity(state, trap, kernel)) out.push_back(s.residual);
  return out;
}

HartreeResult hartree_minimize(int n, const TrapPotential& trap, const RadialPairPotential& v,
                               const GridPtr& grid, double tolerance, bool symmetric,
                               const HartreeOptions& options) {
  if (symmetric) return symmetric_hartree(n, trap, v, grid, tolerance, options);
  if (n < 1) throw PreconditionError("hartree_minimize: N must be positive");
  if (v.has_hard_core() && !options.initial) {
    throw PreconditionError(
        "hartree_minimize: hard-core interactions need disjoint initial factors");
  }
  const PairKernel kernel(grid, v);
  const auto sampled = sample_trap(*grid, trap);
  const double inner_tolerance = 0.1 * tolerance;

  ProductState state;
  if (options.initial) {
    if (options.initial->size() != static_cast<std::size_t>(n)) {
      throw PreconditionError("hartree_minimize: initial state has the wrong number of factors");
    }
    state.factors = *options.initial;
    for (auto& f : state.factors) {
      if (f.grid.get() != grid.get()) throw PreconditionError("hartree_minimize: mismatched grids");
      ops::normalize(*grid, f.values);
      f.normalized = true;
    }
  } else {
    const auto ground = free_ground_state(grid, trap, sampled, inner_tolerance, options.inner_iterations);
    for (int i = 0; i < n; ++i) {
      WaveFunction f(grid, ground);
      if (n > 1) {
        const double centre = 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
        for (std::size_t k = 0; k < grid->size(); ++k) {
          const double x = grid->kind() == GridKind::radial ? grid->radius(k) - std::abs(centre)
                                                            : grid->position(k)[0] - centre;
          f.values[k] *= 1.0 + 0.2 * std::exp(-x * x);
        }
      }
      ops::normalize(*grid, f.values);
      f.normalized = true;
      state.factors.push_back(std::move(f));
    }
  }

  HartreeResult out;
  out.symmetric = false;
  const ExtReal start = hartree_energy(state, trap, kernel);
  if (start.is_infinite()) {
    throw PreconditionError("hartree_minimize: initial factors overlap inside the hard core");
  }
  double energy = start.value();
  double residual = std::numeric_limits<double>::infinity();
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      DescentProblem problem{grid, sampled.values, sampled.active, {}};
      std::vector<double> others(grid->size(), 0.0);
      std::vector<char> blocked(grid->size(), 0);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const auto rho = density(state.factors[j]);
        if (!kernel.is_zero()) {
          std::vector<double> applied(grid->size());
          kernel.apply(rho, applied);
          for (std::size_t k = 0; k < others.size(); ++k) others[k] += applied[k];
        }
        if (kernel.has_hard_core()) {
          const auto b = kernel.blocked_by(rho);
          for (std::size_t k = 0; k < b.size(); ++k) blocked[k] |= b[k];
        }
      }
      for (std::size_t k = 0; k < others.size(); ++k) {
        problem.trap[k] += others[k];
        if (blocked[k]) problem.active[k] = 0;
      }
      auto flow = normalized_gradient_flow(problem, state.factors[i].values,
                                           {inner_tolerance, options.inner_iterations, 0.8});
      state.factors[i].values = std::move(flow.phi);
    }
    const double next = hartree_energy(state, trap, kernel).value();
    if (next > energy + 1e-12 * std::max(1.0, std::abs(energy))) {
      throw InternalError("hartree_minimize: energy increased during coordinate descent");
    }
    energy = next;
    out.energy_history.push_back(energy);
    const auto residuals = hartree_residuals(state, trap, kernel);
    residual = *std::max_element(residuals.begin(), residuals.end());
    out.sweeps = sweep;
    if (residual < tolerance) break;
  }
  if (!(residual < tolerance)) {
    throw NonConvergenceError("hartree_minimize: sweep cap reached", residual);
  }
  state.multipliers = hartree_multipliers(state, trap, kernel);
  out.energy_per_particle = energy;
  out.residual = residual;
  out.state = std::move(state);
  return out;
}

HartreeResult symmetric_hartree(int n, const TrapPotential& trap, const RadialPairPotential& v,
                                const GridPtr& grid, double tolerance,
                                const HartreeOptions& options) {
  if (n < 1) throw PreconditionError("symmetric_hartree: N must be positive");
  if (v.has_hard_core() && n > 1) {
    throw PreconditionError("symmetric_hartree: equal factors always overlap inside a hard core");
  }
  const PairKernel kernel(grid, v);
  const auto sampled = sample_trap(*grid, trap);
  DescentProblem problem{grid, sampled.values, sampled.active, {}};
  if (n > 1 && !kernel.is_zero()) {
    const double coupling = n - 1;
    problem.nonlinearity = [&kernel, coupling](std::span<const double> phi, std::span<double> potential) {
      std::vector<double> rho(phi.size());
      for (std::size_t k = 0; k < phi.size(); ++k) rho[k] = phi[k] * phi[k];
      kernel.apply(rho, potential);
      double energy = 0.0;
      const Grid& g = *kernel.grid();
      for (std::size_t k = 0; k < phi.size(); ++k) {
        energy += g.volume(k) * rho[k] * potential[k];
        potential[k] *= coupling;
      }
      return 0.5 * coupling * energy;
    };
  }
  std::vector<double> start = options.initial && !options.initial->empty()
                                  ? options.initial->front().values
                                  : gaussian_guess(grid, trap).values;
  const auto flow =
      normalized_gradient_flow(problem, std::move(start), {tolerance, options.inner_iterations, 0.8});

  HartreeResult out;
  out.symmetric = true;
  WaveFunction h(grid, flow.phi);
  h.normalized = true;
  out.state.factors.assign(static_cast<std::size_t>(n), h);
  out.state.multipliers = hartree_multipliers(out.state, trap, kernel);
  const auto residuals = hartree_residuals(out.state, trap, kernel);
  out.residual = *std::max_element(residuals.begin(), residuals.end());
  out.energy_per_particle = hartree_energy(out.state, trap, kernel).value();
  out.energy_history.push_back(out.energy_per_particle);
  out.sweeps = 1;
  return out;
}

TwoBodyResult two_body_oracle(const TrapPotential& trap, const RadialPairPotential& v,
                              const GridPtr& grid) {
  if (grid->kind() != GridKind::cartesian || grid->dim() != 1) {
    throw PreconditionError("two_body_oracle: needs a 1D Cartesian grid");
  }
  const int n = grid->nodes_per_axis();
  if (n > 256) throw PreconditionError("two_body_oracle: at most 256 nodes per axis");
  const PairKernel kernel(grid, v);
  const auto sampled = sample_trap(*grid, trap);
  const double h = grid->spacing();
  const double inv_h2 = 1.0 / (h * h);
  auto product = Grid::cartesian(2, n, grid->extent());
  const std::size_t total = product->size();

  std::vector<long> index(total, -1);
  std::vector<double> potential(total, 0.0);
  long active = 0;
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      const std::size_t node = static_cast<std::size_t>(a) + static_cast<std::size_t>(n) * b;
      if (!sampled.active[a] || !sampled.active[b] || kernel.excluded(a, b)) continue;
      index[node] = active++;
      potential[node] = sampled.values[a] + sampled.values[b] + kernel.entry(a, b) * inv_h2;
    }
  }
  if (active == 0) throw PreconditionError("two_body_oracle: no admissible nodes");

  const double shift = *std::min_element(potential.begin(), potential.end()) - 1.0;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(active) * 5);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      const std::size_t node = static_cast<std::size_t>(a) + static_cast<std::size_t>(n) * b;
      const long row = index[node];
      if (row < 0) continue;
      entries.emplace_back(row, row, 4.0 * inv_h2 + potential[node]);
      const int da[4] = {1, -1, 0, 0};
      const int db[4] = {0, 0, 1, -1};
      for (int m = 0; m < 4; ++m) {
        const int a2 = a + da[m];
        const int b2 = b + db[m];
        if (a2 < 0 || a2 >= n || b2 < 0 || b2 >= n) continue;
        const long col = index[static_cast<std::size_t>(a2) + static_cast<std::size_t>(n) * b2];
        if (col >= 0) entries.emplace_back(row, col, -inv_h2);
      }
    }
  }
  Eigen::SparseMatrix<double> hamiltonian(active, active);
  hamiltonian.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseMatrix<double> shifted = hamiltonian;
  for (long k = 0; k < active; ++k) shifted.coeffRef(k, k) -= shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) throw InternalError("two_body_oracle: factorization failed");

  Eigen::VectorXd x(active);
  const double width = trap.kind() == TrapPotential::Kind::harmonic
                           ? std::pow(trap.parameter(), -0.25)
                           : grid->extent() / 3.0;
  for (std::size_t node = 0; node < total; ++node) {
    if (index[node] < 0) continue;
    const Point p = product->position(node);
    x(index[node]) = std::exp(-0.5 * (p[0] * p[0] + p[1] * p[1]) / (width * width));
  }
  x.normalize();
  double lambda = x.dot(hamiltonian * x);
  TwoBodyResult out;
  for (int it = 1;; ++it) {
    x = solver.solve(x);
    x.normalize();
    const Eigen::VectorXd hx = hamiltonian * x;
    lambda = x.dot(hx);
    const double residual = (hx - lambda * x).norm();
    if (residual < 1e-10 * std::max(1.0, std::abs(lambda))) {
      out.iterations = it;
      break;
    }
    if (it >= 2000) throw NonConvergenceError("two_body_oracle: inverse iteration stalled", lambda);
  }
  if (x.sum() < 0.0) x = -x;
  out.energy_per_particle = 0.5 * lambda;
  out.product_grid = product;
  out.state.assign(total, 0.0);
  for (std::size_t node = 0; node < total; ++node) {
    if (index[node] >= 0) out.state[node] = std::max(0.0, x(index[node])) / h;
  }
  ops::normalize(*product, out.state);
  return out;
}

}  // namespace bosepath

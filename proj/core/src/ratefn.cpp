#include "bosepath/ratefn.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <deque>
#include <limits>

#include "bosepath/errors.hpp"
#include "bosepath/pair_kernel.hpp"

namespace bosepath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit_mass(const DensityOnGrid& mu, const char* where) {
  if (!mu.grid) throw PreconditionError(std::string(where) + ": density without grid");
  if (mu.values.size() != mu.grid->size()) {
    throw PreconditionError(std::string(where) + ": density has the wrong size");
  }
  for (double x : mu.values) {
    if (!(x >= 0.0)) throw PreconditionError(std::string(where) + ": negative density");
  }
  if (std::abs(mu.mass() - 1.0) > 1e-10) {
    throw PreconditionError(std::string(where) + ": density does not have unit mass");
  }
}

// Calls visit(k, l) once for every pair of adjacent nodes.
template <typename Visit>
void for_each_edge(const Grid& g, Visit&& visit) {
  if (g.kind() == GridKind::radial) {
    for (std::size_t k = 0; k + 1 < g.size(); ++k) visit(k, k + 1);
    return;
  }
  const auto n = static_cast<std::size_t>(g.nodes_per_axis());
  std::size_t stride = 1;
  for (int a = 0; a < g.dim(); ++a) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      if ((k / stride) % n + 1 < n) visit(k, k + stride);
    }
    stride *= n;
  }
}

std::vector<double> square_root(const std::vector<double>& values) {
  std::vector<double> out(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) out[k] = std::sqrt(values[k]);
  return out;
}

// <W, mu> with W sampled on the grid; infinite if mass sits where W = inf.
ExtReal trap_pairing(const DensityOnGrid& mu, const TrapPotential& trap) {
  const auto sampled = sample_trap(*mu.grid, trap);
  double total = 0.0;
  for (std::size_t k = 0; k < mu.values.size(); ++k) {
    if (mu.values[k] == 0.0) continue;
    if (!sampled.active[k]) return ExtReal::infinity();
    total += mu.grid->volume(k) * sampled.values[k] * mu.values[k];
  }
  return ExtReal(total);
}

ExtReal finish_rate(ExtReal value, const char* where) {
  if (value.is_finite() && value.value() < -1e-6) {
    throw PreconditionError(std::string(where) +
                            ": negative rate; the supplied ground-state energy is inconsistent");
  }
  return value;
}

// Heat kernel of the lattice Laplacian on hZ at time t: e^{-x} I_m(x), x = 2t/h^2.
std::vector<double> lattice_heat_kernel(double t, double h) {
  const double x = 2.0 * t / (h * h);
  if (x > 500.0) throw PreconditionError("cumulant: time step too large for the grid spacing");
  std::vector<double> kernel;
  const double scale = std::exp(-x);
  for (int m = 0;; ++m) {
    const double p = scale * boost::math::cyl_bessel_i(m, x);
    kernel.push_back(p);
    if (m > 0 && p < 1e-18 * kernel.front()) break;
  }
  // Enforce exact mass conservation of the truncated kernel.
  double total = kernel[0];
  for (std::size_t m = 1; m < kernel.size(); ++m) total += 2.0 * kernel[m];
  for (double& p : kernel) p /= total;
  return kernel;
}

class Diffusion {
 public:
  Diffusion(const Grid& g, double t) : grid_(g), kernel_(lattice_heat_kernel(t, g.spacing())) {}

  // u <- P u on the grid (mass leaving the grid is dropped); returns the lost mass.
  double apply(std::vector<double>& u, std::vector<double>& scratch) const {
    const double before = sum(u);
    const auto n = static_cast<std::ptrdiff_t>(grid_.nodes_per_axis());
    const auto width = static_cast<std::ptrdiff_t>(kernel_.size()) - 1;
    std::size_t stride = 1;
    for (int a = 0; a < grid_.dim(); ++a) {
      scratch.assign(u.size(), 0.0);
      for (std::size_t k = 0; k < u.size(); ++k) {
        const double value = u[k];
        if (value == 0.0) continue;
        const auto i = static_cast<std::ptrdiff_t>((k / stride) % static_cast<std::size_t>(n));
        const std::size_t base = k - static_cast<std::size_t>(i) * stride;
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - width);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + width);
        for (std::ptrdiff_t j = lo; j <= hi; ++j) {
          scratch[base + static_cast<std::size_t>(j) * stride] += value * kernel_[std::abs(j - i)];
        }
      }
      u.swap(scratch);
      stride *= static_cast<std::size_t>(n);
    }
    return before - sum(u);
  }

  static double sum(const std::vector<double>& u) {
    double s = 0.0;
    for (double x : u) s += x;
    return s;
  }

 private:
  const Grid& grid_;
  std::vector<double> kernel_;
};

struct Sweep {
  CumulantValue value;
  std::vector<std::vector<double>> half;  // P u_{m-1}, normalized
  std::vector<double> half_log;           // log scale of half[m]
  double log_mass = 0.0;
};

void check_cumulant_input(const TestFunction& f, double beta) {
  if (!f.grid || f.values.size() != f.grid->size()) throw PreconditionError("cumulant: bad test function");
  if (f.grid->kind() != GridKind::cartesian) throw PreconditionError("cumulant: needs a Cartesian grid");
  if (!(beta > 0.0)) throw PreconditionError("cumulant: beta must be positive");
  for (double x : f.values) {
    if (!std::isfinite(x)) throw PreconditionError("cumulant: test function must be bounded");
  }
}

Sweep forward(const TestFunction& f, double beta, const CumulantOptions& options, bool keep) {
  const Grid& g = *f.grid;
  const int steps = std::max(1, static_cast<int>(std::ceil(beta / options.time_step - 1e-9)));
  const double dt = beta / steps;
  const Diffusion diffusion(g, 0.5 * dt);
  std::vector<double> factor(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) factor[k] = std::exp(f.values[k] * dt);

  Sweep out;
  out.value.beta = beta;
  out.value.steps = steps;
  std::vector<double> u(g.size(), 0.0), scratch;
  u[g.origin_index()] = 1.0;
  double log_scale = 0.0;
  for (int m = 0; m < steps; ++m) {
    double mass = Diffusion::sum(u);
    out.value.leak += diffusion.apply(u, scratch) / mass;
    if (keep) {
      out.half.push_back(u);
      out.half_log.push_back(log_scale);
    }
    for (std::size_t k = 0; k < u.size(); ++k) u[k] *= factor[k];
    mass = Diffusion::sum(u);
    out.value.leak += diffusion.apply(u, scratch) / mass;
    const double total = Diffusion::sum(u);
    if (!(total > 0.0)) throw InternalError("cumulant: mass vanished");
    for (double& x : u) x /= total;
    log_scale += std::log(total);
  }
  if (out.value.leak > options.leak_tolerance) {
    throw PreconditionError("cumulant: boundary leak above tolerance; enlarge grid");
  }
  out.log_mass = log_scale;
  out.value.value = log_scale / beta;
  return out;
}

}  // namespace

DensityOnGrid DensityOnGrid::normalized(GridPtr grid, std::vector<double> values) {
  if (values.size() != grid->size()) throw PreconditionError("DensityOnGrid: wrong size");
  const double m = ops::integral(*grid, values);
  if (!(m > 0.0)) throw PreconditionError("DensityOnGrid: no mass");
  for (double& x : values) {
    if (x < 0.0) throw PreconditionError("DensityOnGrid: negative value");
    x /= m;
  }
  return {std::move(grid), std::move(values)};
}

DensityOnGrid DensityOnGrid::from_wave_function(const WaveFunction& phi) {
  std::vector<double> values(phi.values.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = phi.values[k] * phi.values[k];
  return normalized(phi.grid, std::move(values));
}

double DensityOnGrid::mass() const { return ops::integral(*grid, values); }

double TestFunction::bound() const {
  double b = 0.0;
  for (double x : values) b = std::max(b, std::abs(x));
  return b;
}

bool looks_singular(const DensityOnGrid& mu) {
  if (mu.grid->size() <= 128) return false;
  for (std::size_t k = 0; k < mu.values.size(); ++k) {
    if (mu.grid->volume(k) * mu.values[k] > 0.5) return true;
  }
  return false;
}

ExtReal donsker_varadhan(const DensityOnGrid& mu) {
  require_unit_mass(mu, "donsker_varadhan");
  const Grid& g = *mu.grid;
  const auto root = square_root(mu.values);
  const double jump = std::sqrt(g.spacing());
  bool singular = false;
  for_each_edge(g, [&](std::size_t k, std::size_t l) {
    if ((root[k] == 0.0 && root[l] > jump) || (root[l] == 0.0 && root[k] > jump)) singular = true;
  });
  if (singular) return ExtReal::infinity();
  return ExtReal(ops::kinetic(g, root));
}

ExtReal canonical_rate(const DensityOnGrid& mu, const TrapPotential& trap,
                       const RadialPairPotential& v, int n, double chi_n) {
  require_unit_mass(mu, "canonical_rate");
  if (n < 1) throw PreconditionError("canonical_rate: N must be positive");
  const Grid& g = *mu.grid;
  ExtReal total = donsker_varadhan(mu);
  if (n == 1) {
    total += trap_pairing(mu, trap);
    return finish_rate(total + ExtReal(-chi_n), "canonical_rate");
  }
  if (g.kind() != GridKind::cartesian || g.dim() != n) {
    throw PreconditionError(
        "canonical_rate: N > 1 needs the Cartesian product grid of N one-dimensional particles");
  }
  const auto line = Grid::cartesian(1, g.nodes_per_axis(), g.extent());
  const auto sampled = sample_trap(*line, trap);
  const PairKernel kernel(line, v);
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  const auto nodes = static_cast<std::size_t>(g.nodes_per_axis());
  double energy = 0.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (mu.values[k] == 0.0) continue;
    std::size_t rest = k;
    for (int a = 0; a < n; ++a) {
      idx[a] = rest % nodes;
      rest /= nodes;
    }
    double local = 0.0;
    for (int a = 0; a < n; ++a) {
      if (!sampled.active[idx[a]]) return ExtReal::infinity();
      local += sampled.values[idx[a]];
      for (int b = a + 1; b < n; ++b) {
        if (kernel.excluded(idx[a], idx[b])) return ExtReal::infinity();
        local += kernel.entry(idx[a], idx[b]) * inv_h2;
      }
    }
    energy += g.volume(k) * mu.values[k] * local;
  }
  total += ExtReal(energy);
  return finish_rate(total + ExtReal(-n * chi_n), "canonical_rate");
}

ExtReal hartree_rate(const std::vector<DensityOnGrid>& mu, const TrapPotential& trap,
                     const RadialPairPotential& v, double chi_otimes) {
  if (mu.empty()) throw PreconditionError("hartree_rate: no densities");
  for (const auto& m : mu) {
    require_unit_mass(m, "hartree_rate");
    if (m.grid.get() != mu.front().grid.get()) throw PreconditionError("hartree_rate: mismatched grids");
  }
  ExtReal total(0.0);
  for (const auto& m : mu) {
    total += donsker_varadhan(m);
    total += trap_pairing(m, trap);
  }
  if (mu.size() > 1 && !v.is_identically_zero()) {
    const PairKernel kernel(mu.front().grid, v);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      for (std::size_t j = i + 1; j < mu.size(); ++j) total += kernel.pair(mu[i].values, mu[j].values);
    }
  }
  return finish_rate(total + ExtReal(-static_cast<double>(mu.size()) * chi_otimes), "hartree_rate");
}

CumulantValue cumulant(const TestFunction& f, double beta, const CumulantOptions& options) {
  check_cumulant_input(f, beta);
  return forward(f, beta, options, false).value;
}

CumulantGradient cumulant_gradient(const TestFunction& f, double beta, const CumulantOptions& options) {
  check_cumulant_input(f, beta);
  const Grid& g = *f.grid;
  Sweep fw = forward(f, beta, options, true);
  const int steps = fw.value.steps;
  const double dt = beta / steps;
  const Diffusion diffusion(g, 0.5 * dt);
  std::vector<double> factor(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) factor[k] = std::exp(f.values[k] * dt);

  std::vector<double> derivative(g.size(), 0.0);
  std::vector<double> w(g.size(), 1.0), scratch;
  double w_log = 0.0;
  for (int m = steps; m >= 1; --m) {
    diffusion.apply(w, scratch);  // b_m = P w_m
    const auto& a = fw.half[static_cast<std::size_t>(m - 1)];
    const double weight = std::exp(fw.half_log[static_cast<std::size_t>(m - 1)] + w_log - fw.log_mass);
    for (std::size_t k = 0; k < g.size(); ++k) derivative[k] += weight * factor[k] * a[k] * w[k];
    for (std::size_t k = 0; k < g.size(); ++k) w[k] *= factor[k];
    diffusion.apply(w, scratch);  // w_{m-1} = P E b_m
    double largest = 0.0;
    for (double x : w) largest = std::max(largest, x);
    for (double& x : w) x /= largest;
    w_log += std::log(largest);
  }
  CumulantGradient out;
  out.cumulant = fw.value;
  out.density.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) out.density[k] = derivative[k] * dt / beta / g.volume(k);
  return out;
}

namespace {

// Warm start: f = -Laplacian(sqrt mu) / sqrt(mu), the potential whose ground
// state is sqrt(mu), centred on the mu-mean and clamped.
std::vector<double> ground_state_potential(const DensityOnGrid& mu, double bound) {
  const Grid& g = *mu.grid;
  const auto root = square_root(mu.values);
  std::vector<double> lap(g.size());
  ops::negative_laplacian(g, root, lap);
  std::vector<double> f(g.size());
  double mean = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    f[k] = root[k] > 1e-6 ? lap[k] / root[k] : -bound;
    f[k] = std::clamp(f[k], -bound, bound);
    mean += g.volume(k) * mu.values[k] * f[k];
  }
  for (double& x : f) x = std::clamp(x - mean, -bound, bound);
  return f;
}

}  // namespace

JBetaResult j_beta(const DensityOnGrid& mu, double beta, const JBetaOptions& options) {
  require_unit_mass(mu, "j_beta");
  JBetaResult out;
  out.maximizer.grid = mu.grid;
  out.maximizer.values.assign(mu.grid->size(), 0.0);
  if (looks_singular(mu)) {
    out.value = ExtReal::infinity();
    out.converged = true;
    return out;
  }
  const Grid& g = *mu.grid;
  const std::size_t n = g.size();
  const double bound = options.bound;

  // Minimize the negated objective phi(f) = Lambda(f) - <mu, f>.
  // Test functions whose evolution leaks through the boundary are infeasible.
  CumulantOptions unchecked = options.cumulant;
  unchecked.leak_tolerance = kInf;
  auto evaluate = [&](const std::vector<double>& f, std::vector<double>& grad) {
    const auto cg = cumulant_gradient({mu.grid, f}, beta, unchecked);
    if (cg.cumulant.leak > options.cumulant.leak_tolerance) return kInf;
    double pairing = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      pairing += g.volume(k) * mu.values[k] * f[k];
      grad[k] = g.volume(k) * (cg.density[k] - mu.values[k]);
    }
    return cg.cumulant.value - pairing;
  };
  auto project = [&](std::vector<double>& f) {
    for (double& x : f) x = std::clamp(x, -bound, bound);
  };
  // Projected gradient: zero components pushing against an active bound.
  auto projected_norm = [&](const std::vector<double>& f, const std::vector<double>& grad) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double d = grad[k];
      if ((f[k] <= -bound && d > 0.0) || (f[k] >= bound && d < 0.0)) d = 0.0;
      s += d * d;
    }
    return std::sqrt(s);
  };

  std::vector<double> metric(n);
  for (std::size_t k = 0; k < n; ++k) {
    metric[k] = 1.0 / (g.volume(k) * std::max(mu.values[k], 1e-8));
  }
  std::vector<double> f = ground_state_potential(mu, bound);
  std::vector<double> grad(n);
  double value = evaluate(f, grad);
  {
    // Keep the better of the warm start and f = 0.
    std::vector<double> zero(n, 0.0), zero_grad(n);
    const double at_zero = evaluate(zero, zero_grad);
    if (at_zero == kInf && value == kInf) {
      throw PreconditionError("j_beta: boundary leak above tolerance; enlarge grid");
    }
    if (at_zero < value) {
      f = zero;
      grad = zero_grad;
      value = at_zero;
    }
  }
  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  int stalled = 0;
  int it = 0;
  for (; it < options.iterations; ++it) {
    out.gradient_norm = projected_norm(f, grad);
    if (out.gradient_norm < options.gradient_tolerance) {
      out.converged = true;
      break;
    }
    // Two-loop recursion on the free variables.
    std::vector<double> q = grad;
    for (std::size_t k = 0; k < n; ++k) {
      if ((f[k] <= -bound && q[k] > 0.0) || (f[k] >= bound && q[k] < 0.0)) q[k] = 0.0;
    }
    std::vector<double> alpha(s_hist.size());
    for (std::size_t j = s_hist.size(); j-- > 0;) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += s_hist[j][k] * q[k];
      alpha[j] = rho_hist[j] * dot;
      for (std::size_t k = 0; k < n; ++k) q[k] -= alpha[j] * y_hist[j][k];
    }
    // Initial inverse Hessian: diagonal metric of the occupation density.
    double gamma = 1.0;
    if (!s_hist.empty()) {
      double sy = 0.0, yhy = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        sy += s_hist.back()[k] * y_hist.back()[k];
        yhy += y_hist.back()[k] * y_hist.back()[k] * metric[k];
      }
      gamma = sy / yhy;
    } else {
      double gg = 0.0;
      for (std::size_t k = 0; k < n; ++k) gg += q[k] * q[k] * metric[k];
      gamma = 1.0 / std::max(std::sqrt(gg), 1e-12);
    }
    for (std::size_t k = 0; k < n; ++k) q[k] *= gamma * metric[k];
    for (std::size_t j = 0; j < s_hist.size(); ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += y_hist[j][k] * q[k];
      const double b = rho_hist[j] * dot;
      for (std::size_t k = 0; k < n; ++k) q[k] += s_hist[j][k] * (alpha[j] - b);
    }
    double slope = 0.0;
    for (std::size_t k = 0; k < n; ++k) slope -= grad[k] * q[k];
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      q = grad;
      for (double& x : q) x /= std::max(out.gradient_norm, 1e-12);
    }
    double step = 1.0;
    std::vector<double> trial(n), trial_grad(n);
    double trial_value = value;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t k = 0; k < n; ++k) trial[k] = f[k] - step * q[k];
      project(trial);
      double decrease = 0.0;
      for (std::size_t k = 0; k < n; ++k) decrease += grad[k] * (trial[k] - f[k]);
      trial_value = evaluate(trial, trial_grad);
      if (trial_value <= value + 1e-4 * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || trial_value >= value) {
      if (++stalled >= 3) break;
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      continue;
    }
    stalled = 0;
    std::vector<double> s(n), y(n);
    double sy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = trial[k] - f[k];
      y[k] = trial_grad[k] - grad[k];
      sy += s[k] * y[k];
    }
    if (sy > 1e-300) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    f.swap(trial);
    grad.swap(trial_grad);
    value = trial_value;
  }
  out.iterations = it;
  out.gradient_norm = projected_norm(f, grad);
  if (out.gradient_norm < options.gradient_tolerance) out.converged = true;
  out.value = ExtReal(std::max(0.0, -value));
  for (double x : f) {
    if (std::abs(x) >= bound) out.clamped = true;
  }
  out.maximizer.values = std::move(f);
  return out;
}

ChiOtimesResult chi_otimes_beta(double g, const TrapPotential& trap, double beta, const GridPtr& grid,
                                const ChiOtimesOptions& options) {
  if (g < 0.0) throw PreconditionError("chi_otimes_beta: coupling must be nonnegative");
  const auto sampled = sample_trap(*grid, trap);
  for (char a : sampled.active) {
    if (!a) throw PreconditionError("chi_otimes_beta: trap must be finite on the grid");
  }
  const std::size_t n = grid->size();
  auto potential = [&](const std::vector<double>& rho) {
    TestFunction f{grid, std::vector<double>(n)};
    for (std::size_t k = 0; k < n; ++k) f.values[k] = -sampled.values[k] - 2.0 * g * rho[k];
    return f;
  };
  std::vector<double> rho = cumulant_gradient(potential(std::vector<double>(n, 0.0)), beta,
                                              options.cumulant).density;
  ChiOtimesResult out;
  double previous = kInf;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const auto f = potential(rho);
    const auto cg = cumulant_gradient(f, beta, options.cumulant);
    double quartic = 0.0;
    double change = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      quartic += grid->volume(k) * rho[k] * rho[k];
      change = std::max(change, grid->volume(k) * std::abs(cg.density[k] - rho[k]));
    }
    const double value = -cg.cumulant.value - g * quartic;
    out.iterations = it;
    if (g == 0.0 || (change < options.tolerance && std::abs(value - previous) < options.tolerance)) {
      rho = cg.density;
      const auto final_f = potential(rho);
      quartic = 0.0;
      for (std::size_t k = 0; k < n; ++k) quartic += grid->volume(k) * rho[k] * rho[k];
      out.value = -cumulant(final_f, beta, options.cumulant).value - g * quartic;
      out.minimizer = DensityOnGrid::normalized(grid, rho);
      out.potential = final_f;
      return out;
    }
    previous = value;
    for (std::size_t k = 0; k < n; ++k) {
      rho[k] = (1.0 - options.damping) * rho[k] + options.damping * cg.density[k];
    }
  }
  throw NonConvergenceError("chi_otimes_beta: self-consistent iteration did not converge", previous);
}

ExtReal meanfield_rate(const DensityOnGrid& mu, const TrapPotential& trap, double g, double beta,
                       double chi, const JBetaOptions& options) {
  require_unit_mass(mu, "meanfield_rate");
  if (looks_singular(mu)) return ExtReal::infinity();
  ExtReal total = j_beta(mu, beta, options).value;
  total += trap_pairing(mu, trap);
  double quartic = 0.0;
  for (std::size_t k = 0; k < mu.values.size(); ++k) {
    quartic += mu.grid->volume(k) * mu.values[k] * mu.values[k];
  }
  total += ExtReal(g * quartic - chi);
  return finish_rate(total, "meanfield_rate");
}

}  // namespace bosepath

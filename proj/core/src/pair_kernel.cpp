#include "bosepath/pair_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bosepath/errors.hpp"
#include "bosepath/quadrature.hpp"

namespace bosepath {

namespace {

constexpr std::size_t kMaxDenseNodes = 4096;

// int over the slab [lo, hi] of v(|t|) dt, for the 1D grid.
double slab_1d(const RadialPairPotential& v, double lo, double hi) {
  auto g = [&](double t) { return v.finite_part(std::abs(t)); };
  std::vector<double> cuts{0.0};
  for (double b : v.breakpoints()) {
    cuts.push_back(b);
    cuts.push_back(-b);
  }
  if (lo < 0.0 && hi > 0.0) return quad::integrate_adaptive(g, lo, hi, cuts, 1e-10);
  return quad::integrate(g, lo, hi, cuts, 2);
}

// int_{shell [s0, s1]} v(|x - y|) dy for |x| = r in d = 3.
double shell_3d(const RadialPairPotential& v, double range, double r, double s0, double s1) {
  auto inner = [&](double s) {
    const double lo = std::abs(r - s);
    const double hi = std::min(r + s, range);
    if (!(hi > lo)) return 0.0;
    const double value = quad::integrate([&](double t) { return v.finite_part(t) * t; }, lo, hi,
                                         v.breakpoints(), 2);
    return 2.0 * std::numbers::pi * s / r * value;
  };
  std::vector<double> cuts{r, r - range, r + range};
  for (double b : v.breakpoints()) {
    cuts.push_back(r - b);
    cuts.push_back(r + b);
    cuts.push_back(b - r);
  }
  return quad::integrate(inner, s0, s1, cuts, 1);
}

// int_{annulus [s0, s1]} v(|x - y|) dy for |x| = r in d = 2.
double shell_2d(const RadialPairPotential& v, double range, double r, double s0, double s1) {
  auto angle_of = [&](double s, double dist) {
    const double c = (r * r + s * s - dist * dist) / (2.0 * r * s);
    if (c <= -1.0) return std::numbers::pi;
    if (c >= 1.0) return 0.0;
    return std::acos(c);
  };
  auto inner = [&](double s) {
    const double top = std::isfinite(range) ? angle_of(s, range) : std::numbers::pi;
    if (!(top > 0.0)) return 0.0;
    std::vector<double> cuts;
    for (double b : v.breakpoints()) cuts.push_back(angle_of(s, b));
    auto g = [&](double theta) {
      const double d2 = r * r + s * s - 2.0 * r * s * std::cos(theta);
      return v.finite_part(std::sqrt(std::max(d2, 0.0)));
    };
    return 2.0 * s * quad::integrate(g, 0.0, top, cuts, 2);
  };
  std::vector<double> cuts{r, r - range, r + range};
  for (double b : v.breakpoints()) {
    cuts.push_back(r - b);
    cuts.push_back(r + b);
    cuts.push_back(b - r);
  }
  return quad::integrate(inner, s0, s1, cuts, 1);
}

// Cell average of v(|x_k - y|) over the Cartesian cell centred at `offset`.
double cell_average(const RadialPairPotential& v, const Point& offset, int dim, double h) {
  const int sub = dim == 2 ? 4 : 3;
  double total = 0.0;
  int count = 0;
  for (int i = 0; i < sub; ++i) {
    for (int j = 0; j < (dim >= 2 ? sub : 1); ++j) {
      for (int m = 0; m < (dim >= 3 ? sub : 1); ++m) {
        Point p = offset;
        const int idx[3] = {i, j, m};
        for (int a = 0; a < dim; ++a) p[a] += ((idx[a] + 0.5) / sub - 0.5) * h;
        total += v.finite_part(norm(p));
        ++count;
      }
    }
  }
  return total / count;
}

}  // namespace

PairKernel::PairKernel(GridPtr grid, const RadialPairPotential& v)
    : grid_(std::move(grid)), hard_core_(v.hard_core_radius()), zero_(v.is_identically_zero()) {
  const Grid& g = *grid_;
  const std::size_t n = g.size();
  const double h = g.spacing();
  const bool dense = g.kind() == GridKind::cartesian && g.dim() >= 2;
  if (dense && n > kMaxDenseNodes) {
    throw PreconditionError("PairKernel: Cartesian grids in d >= 2 are limited to 4096 nodes");
  }
  const double range = v.effective_range();
  first_.resize(n);
  offset_.resize(n + 1);
  offset_[0] = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t lo = 0;
    std::size_t hi = n;
    if (!dense && std::isfinite(range)) {
      const double reach = (range + h) / h;
      const double centre = static_cast<double>(k);
      lo = static_cast<std::size_t>(std::max(0.0, std::floor(centre - reach)));
      hi = static_cast<std::size_t>(std::min(static_cast<double>(n), std::ceil(centre + reach) + 1));
    }
    if (zero_) hi = lo;
    first_[k] = lo;
    offset_[k + 1] = offset_[k] + (hi - lo);
  }
  values_.assign(offset_[n], 0.0);
  if (zero_) return;

  // Row k of the unsymmetrized kernel times vol_k: vol_k * int_{cell l} v(|x_k - y|) dy.
  auto raw = [&](std::size_t k, std::size_t l) -> double {
    if (g.kind() == GridKind::cartesian && g.dim() == 1) {
      const double m = static_cast<double>(l) - static_cast<double>(k);
      return h * slab_1d(v, (m - 0.5) * h, (m + 0.5) * h);
    }
    if (g.kind() == GridKind::radial) {
      const double r = g.radius(k);
      const double s0 = static_cast<double>(l) * h;
      const double s1 = s0 + h;
      const double cell = g.dim() == 3 ? shell_3d(v, range, r, s0, s1) : shell_2d(v, range, r, s0, s1);
      return g.volume(k) * cell;
    }
    const Point a = g.position(k);
    const Point b = g.position(l);
    Point offset{};
    for (int ax = 0; ax < 3; ++ax) offset[ax] = b[ax] - a[ax];
    return g.volume(k) * g.volume(l) * cell_average(v, offset, g.dim(), h);
  };

  const bool translation_invariant = g.kind() == GridKind::cartesian && g.dim() == 1;
  std::vector<double> slab_cache;
  if (translation_invariant) {
    slab_cache.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
      if (std::isfinite(range) && (static_cast<double>(m) - 1.0) * h > range) break;
      slab_cache[m] = raw(0, m);
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = first_[k]; l < first_[k] + (offset_[k + 1] - offset_[k]); ++l) {
      if (l < k) continue;
      double value;
      if (translation_invariant) {
        value = slab_cache[l - k];
      } else if (dense) {
        value = raw(k, l);  // already symmetric
      } else {
        value = 0.5 * (raw(k, l) + raw(l, k));
      }
      values_[offset_[k] + (l - first_[k])] = value;
      if (l != k && l >= first_[l] && k >= first_[l] && k < first_[l] + (offset_[l + 1] - offset_[l])) {
        values_[offset_[l] + (k - first_[l])] = value;
      }
    }
  }
}

double PairKernel::entry(std::size_t k, std::size_t l) const {
  if (l < first_[k]) return 0.0;
  const std::size_t j = l - first_[k];
  if (j >= offset_[k + 1] - offset_[k]) return 0.0;
  return values_[offset_[k] + j];
}

double PairKernel::distance(std::size_t k, std::size_t l) const {
  if (grid_->kind() == GridKind::radial) return std::abs(grid_->radius(k) - grid_->radius(l));
  return bosepath::distance(grid_->position(k), grid_->position(l));
}

bool PairKernel::excluded(std::size_t k, std::size_t l) const {
  return hard_core_ > 0.0 && distance(k, l) < hard_core_;
}

void PairKernel::apply(std::span<const double> sigma, std::span<double> out) const {
  const std::size_t n = grid_->size();
  if (sigma.size() != n || out.size() != n) throw PreconditionError("PairKernel: size mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    const double* row = values_.data() + offset_[k];
    const std::size_t width = offset_[k + 1] - offset_[k];
    const double* s = sigma.data() + first_[k];
    double acc = 0.0;
    for (std::size_t j = 0; j < width; ++j) acc += row[j] * s[j];
    out[k] = acc / grid_->volume(k);
  }
}

ExtReal PairKernel::pair(std::span<const double> rho, std::span<const double> sigma) const {
  const std::size_t n = grid_->size();
  if (rho.size() != n || sigma.size() != n) throw PreconditionError("pair_term: mismatched grids");
  if (has_hard_core()) {
    for (std::size_t k = 0; k < n; ++k) {
      if (rho[k] == 0.0) continue;
      for (std::size_t l = 0; l < n; ++l) {
        if (sigma[l] != 0.0 && excluded(k, l)) return ExtReal::infinity();
      }
    }
  }
  std::vector<double> v_sigma(n);
  apply(sigma, v_sigma);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) total += grid_->volume(k) * rho[k] * v_sigma[k];
  return ExtReal(total);
}

std::vector<char> PairKernel::blocked_by(std::span<const double> sigma) const {
  const std::size_t n = grid_->size();
  std::vector<char> blocked(n, 0);
  if (!has_hard_core()) return blocked;
  for (std::size_t l = 0; l < n; ++l) {
    if (sigma[l] == 0.0) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (!blocked[k] && excluded(k, l)) blocked[k] = 1;
    }
  }
  return blocked;
}

}  // namespace bosepath

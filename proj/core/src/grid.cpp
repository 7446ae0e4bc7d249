#include "bosepath/grid.hpp"

#include <cmath>
#include <sstream>

#include "bosepath/errors.hpp"

namespace bosepath {

std::shared_ptr<const Grid> Grid::cartesian(int dim, int nodes, double half_extent) {
  if (dim < 1 || dim > 3) throw PreconditionError("Grid: dimension must be 1, 2 or 3");
  if (nodes < 3 || nodes % 2 == 0) throw PreconditionError("Grid: node count must be odd and >= 3");
  if (!(half_extent > 0.0)) throw PreconditionError("Grid: extent must be positive");
  std::shared_ptr<Grid> g(new Grid());
  g->kind_ = GridKind::cartesian;
  g->dim_ = dim;
  g->nodes_ = nodes;
  g->extent_ = half_extent;
  g->spacing_ = 2.0 * half_extent / (nodes + 1);
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(nodes);
  g->volume_.assign(total, std::pow(g->spacing_, dim));
  return g;
}

std::shared_ptr<const Grid> Grid::radial(int dim, int cells, double radius) {
  if (dim != 2 && dim != 3) throw PreconditionError("Grid: radial grids need d = 2 or 3");
  if (cells < 4) throw PreconditionError("Grid: too few radial cells");
  if (!(radius > 0.0)) throw PreconditionError("Grid: radius must be positive");
  std::shared_ptr<Grid> g(new Grid());
  g->kind_ = GridKind::radial;
  g->dim_ = dim;
  g->nodes_ = cells;
  g->extent_ = radius;
  const double h = radius / cells;
  g->spacing_ = h;
  const double omega = unit_sphere_area(dim);
  g->volume_.resize(static_cast<std::size_t>(cells));
  g->face_.resize(static_cast<std::size_t>(cells));
  for (int k = 0; k < cells; ++k) {
    const double inner = k * h;
    const double outer = (k + 1) * h;
    g->volume_[k] = omega * (std::pow(outer, dim) - std::pow(inner, dim)) / dim;
    g->face_[k] = omega * std::pow(outer, dim - 1);
  }
  return g;
}

Point Grid::position(std::size_t k) const {
  Point p{0.0, 0.0, 0.0};
  if (kind_ == GridKind::radial) {
    p[0] = radius(k);
    return p;
  }
  const auto n = static_cast<std::size_t>(nodes_);
  const double centre = 0.5 * (nodes_ - 1);
  for (int a = 0; a < dim_; ++a) {
    p[a] = (static_cast<double>(k % n) - centre) * spacing_;
    k /= n;
  }
  return p;
}

double Grid::radius(std::size_t k) const {
  if (kind_ == GridKind::radial) return (static_cast<double>(k) + 0.5) * spacing_;
  return norm(position(k));
}

std::size_t Grid::origin_index() const {
  if (kind_ == GridKind::radial) return 0;
  const auto n = static_cast<std::size_t>(nodes_);
  const std::size_t c = n / 2;
  std::size_t index = 0;
  std::size_t stride = 1;
  for (int a = 0; a < dim_; ++a) {
    index += c * stride;
    stride *= n;
  }
  return index;
}

double Grid::laplacian_diagonal(std::size_t k) const {
  if (kind_ == GridKind::cartesian) return 2.0 * dim_ / (spacing_ * spacing_);
  const double inner_face = k == 0 ? 0.0 : face_[k - 1];
  return (face_[k] + inner_face) / (spacing_ * volume_[k]);
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << (kind_ == GridKind::radial ? "radial" : "cartesian") << " d=" << dim_ << " n=" << nodes_
     << " h=" << spacing_ << " L=" << extent_;
  return os.str();
}

namespace ops {

void negative_laplacian(const Grid& grid, std::span<const double> phi, std::span<double> out,
                        std::span<const char> active) {
  const std::size_t size = grid.size();
  const double h = grid.spacing();
  auto value = [&](std::size_t k) { return active.empty() || active[k] ? phi[k] : 0.0; };
  if (grid.kind() == GridKind::radial) {
    for (std::size_t k = 0; k < size; ++k) {
      if (!active.empty() && !active[k]) {
        out[k] = 0.0;
        continue;
      }
      const double outer_face = grid.face(k);
      const double inner_face = k == 0 ? 0.0 : grid.face(k - 1);
      const double right = k + 1 < size ? value(k + 1) : 0.0;
      const double left = k == 0 ? 0.0 : value(k - 1);
      const double flux = outer_face * (phi[k] - right) + inner_face * (phi[k] - left);
      out[k] = flux / (h * grid.volume(k));
    }
    return;
  }
  const auto n = static_cast<std::size_t>(grid.nodes_per_axis());
  const double inv_h2 = 1.0 / (h * h);
  for (std::size_t k = 0; k < size; ++k) {
    if (!active.empty() && !active[k]) {
      out[k] = 0.0;
      continue;
    }
    double acc = 0.0;
    std::size_t stride = 1;
    std::size_t rest = k;
    for (int a = 0; a < grid.dim(); ++a) {
      const std::size_t coord = rest % n;
      rest /= n;
      const double left = coord > 0 ? value(k - stride) : 0.0;
      const double right = coord + 1 < n ? value(k + stride) : 0.0;
      acc += 2.0 * phi[k] - left - right;
      stride *= n;
    }
    out[k] = acc * inv_h2;
  }
}

double inner(const Grid& grid, std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) total += grid.volume(k) * a[k] * b[k];
  return total;
}

double norm(const Grid& grid, std::span<const double> a) { return std::sqrt(inner(grid, a, a)); }

double kinetic(const Grid& grid, std::span<const double> phi) {
  std::vector<double> lap(phi.size());
  negative_laplacian(grid, phi, lap);
  return inner(grid, phi, lap);
}

double integral(const Grid& grid, std::span<const double> values) {
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) total += grid.volume(k) * values[k];
  return total;
}

double normalize(const Grid& grid, std::span<double> phi) {
  const double n = norm(grid, phi);
  if (!(n > 0.0)) throw PreconditionError("normalize: zero function");
  for (double& x : phi) x /= n;
  return n;
}

}  // namespace ops

SampledTrap sample_trap(const Grid& grid, const TrapPotential& trap) {
  SampledTrap out;
  out.values.resize(grid.size());
  out.active.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const ExtReal w = grid.kind() == GridKind::radial ? trap.radial(grid.radius(k))
                                                      : trap(grid.position(k));
    out.active[k] = w.is_finite() ? 1 : 0;
    out.values[k] = w.is_finite() ? w.value() : 0.0;
  }
  return out;
}

}  // namespace bosepath

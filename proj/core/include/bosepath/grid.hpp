#pragma once

#include <memory>
#include <span>
#include <vector>

#include "bosepath/geometry.hpp"
#include "bosepath/potentials.hpp"

namespace bosepath {

enum class GridKind { cartesian, radial };

/// Uniform grid with Dirichlet zero boundary.
///
/// Cartesian: `nodes` (odd) per axis at x_k = (k - (nodes-1)/2) h, so the
/// origin is a node and the zero boundary sits at +-(nodes+1)/2 h.
/// Radial (d = 2, 3): cells [k h, (k+1) h] with the node at the cell centre;
/// the zero boundary sits one node past the last cell.
class Grid {
 public:
  static std::shared_ptr<const Grid> cartesian(int dim, int nodes, double half_extent);
  static std::shared_ptr<const Grid> radial(int dim, int cells, double radius);

  GridKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int nodes_per_axis() const { return nodes_; }
  double spacing() const { return spacing_; }
  double extent() const { return extent_; }
  std::size_t size() const { return volume_.size(); }

  double volume(std::size_t k) const { return volume_[k]; }
  std::span<const double> volumes() const { return volume_; }
  Point position(std::size_t k) const;
  double radius(std::size_t k) const;
  /// Index of the node at the origin (Cartesian) or the innermost cell.
  std::size_t origin_index() const;

  /// Radial grids: area of the outer face of cell k.
  double face(std::size_t k) const { return face_[k]; }

  /// Diagonal of the discrete -Laplacian at node k.
  double laplacian_diagonal(std::size_t k) const;

  std::string describe() const;

 private:
  Grid() = default;
  GridKind kind_ = GridKind::cartesian;
  int dim_ = 1;
  int nodes_ = 0;
  double spacing_ = 0.0;
  double extent_ = 0.0;
  std::vector<double> volume_;
  std::vector<double> face_;  // radial: area of the outer face of cell k
};

using GridPtr = std::shared_ptr<const Grid>;

/// Real function sampled on a grid.
struct GridFunction {
  GridPtr grid;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}
  GridFunction(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {}
};

/// L^2-normalized nonnegative wave function on a grid.
struct WaveFunction : GridFunction {
  bool normalized = false;
  using GridFunction::GridFunction;
};

namespace ops {

/// out = -Laplacian(phi) with zero Dirichlet data; nodes with active[k] == 0
/// are treated as zeros and receive zero output.
void negative_laplacian(const Grid& grid, std::span<const double> phi, std::span<double> out,
                        std::span<const char> active = {});

double inner(const Grid& grid, std::span<const double> a, std::span<const double> b);
double norm(const Grid& grid, std::span<const double> a);
/// ||grad phi||^2 = <phi, -Laplacian phi>.
double kinetic(const Grid& grid, std::span<const double> phi);
/// Sum of volume * values.
double integral(const Grid& grid, std::span<const double> values);
/// Scales phi to unit L^2 norm; returns the previous norm.
double normalize(const Grid& grid, std::span<double> phi);

}  // namespace ops

/// Trap sampled on the grid: finite values plus an activity mask (W < inf).
struct SampledTrap {
  std::vector<double> values;
  std::vector<char> active;
};
SampledTrap sample_trap(const Grid& grid, const TrapPotential& trap);

}  // namespace bosepath

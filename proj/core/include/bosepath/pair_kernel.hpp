#pragma once

#include <span>
#include <vector>

#include "bosepath/extended_real.hpp"
#include "bosepath/grid.hpp"
#include "bosepath/potentials.hpp"

namespace bosepath {

/// Discretization of the pair operator (V sigma)(x) = int v(|x - y|) sigma(y) dy.
///
/// Entries G_kl approximate int_{cell k} int_{cell l} v(|x - y|) dx dy by
/// vol_k int_{cell l} v(|x_k - y|) dy, symmetrized where the rule is not
/// symmetric by itself, so B(rho, sigma) = sum rho_k G_kl sigma_l is a
/// symmetric bilinear form on densities. The inner integral is exact over the
/// source cell (1D and radial grids) or sub-sampled (Cartesian d >= 2,
/// limited to 4096 nodes). Pairs of nodes closer than the hard-core radius are
/// marked as excluded.
class PairKernel {
 public:
  PairKernel(GridPtr grid, const RadialPairPotential& v);

  const GridPtr& grid() const { return grid_; }
  bool has_hard_core() const { return hard_core_ > 0.0; }
  bool is_zero() const { return zero_; }

  double entry(std::size_t k, std::size_t l) const;
  bool excluded(std::size_t k, std::size_t l) const;

  /// out_k = sum_l G_kl sigma_l / vol_k.
  void apply(std::span<const double> sigma, std::span<double> out) const;

  /// B(rho, sigma); infinite when an excluded pair carries mass on both sides.
  ExtReal pair(std::span<const double> rho, std::span<const double> sigma) const;

  /// Nodes that cannot carry mass next to `sigma` without hard-core overlap.
  std::vector<char> blocked_by(std::span<const double> sigma) const;

 private:
  double distance(std::size_t k, std::size_t l) const;

  GridPtr grid_;
  double hard_core_ = 0.0;
  bool zero_ = false;
  std::vector<std::size_t> first_;  // first column of the stored band of row k
  std::vector<std::size_t> offset_; // start of row k in values_
  std::vector<double> values_;
};

}  // namespace bosepath

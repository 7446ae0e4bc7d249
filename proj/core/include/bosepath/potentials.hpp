#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bosepath/extended_real.hpp"
#include "bosepath/geometry.hpp"

namespace bosepath {

/// Radially symmetric pair interaction v(r) with hard-core radius a.
///
/// The profile is consulted only for r >= a; below the core the potential
/// is +inf. Breakpoints list radii where the profile is not smooth so that
/// quadrature and ODE grids can align with them.
class RadialPairPotential {
 public:
  using Profile = std::function<double(double)>;

  struct Shape {
    double hard_core_radius = 0.0;
    double lower_bound = 0.0;
    std::optional<double> support_radius;  // R* when compactly supported
    double effective_range = 0.0;          // beyond this |v| is negligible
    std::vector<double> breakpoints;
  };

  RadialPairPotential(std::string name, Profile profile, Shape shape);

  /// v(r), +inf inside the core.
  ExtReal operator()(double r) const;

  /// v(r) with the core mapped to 0; used where the core is handled apart.
  double finite_part(double r) const;

  const std::string& name() const { return name_; }
  double hard_core_radius() const { return shape_.hard_core_radius; }
  double lower_bound() const { return shape_.lower_bound; }
  const std::optional<double>& support_radius() const { return shape_.support_radius; }
  double effective_range() const { return shape_.effective_range; }
  std::span<const double> breakpoints() const { return shape_.breakpoints; }
  bool is_identically_zero() const { return identically_zero_; }
  bool has_hard_core() const { return shape_.hard_core_radius > 0.0; }

  // Families used throughout the tests and the command line tool.
  static RadialPairPotential zero();
  static RadialPairPotential constant(double c);
  static RadialPairPotential hard_core(double a);
  /// c * 1_{[0, radius]}.
  static RadialPairPotential square_well(double c, double radius = 1.0);
  /// c * exp(-(r / width)^2).
  static RadialPairPotential gaussian(double c, double width = 1.0);
  /// c * r^{-p} on (0, cutoff], zero beyond.
  static RadialPairPotential power_law(double c, double p, double cutoff = 1.0);
  /// Pure hard core of radius a plus the profile of `tail` outside it.
  static RadialPairPotential with_hard_core(double a, const RadialPairPotential& tail);
  /// Linear interpolation of (radius, value) nodes, 0 beyond the table.
  /// Leading +inf values define the hard core.
  static RadialPairPotential tabulated(std::string name, std::vector<double> radii,
                                       std::vector<double> values);
  /// Two-column CSV (radius, value); "inf" is accepted as a value.
  static RadialPairPotential from_csv(const std::string& path);

 private:
  std::string name_;
  Profile profile_;
  Shape shape_;
  bool identically_zero_ = false;

  friend RadialPairPotential rescale_gp(const RadialPairPotential&, double);
  friend RadialPairPotential rescale_hartree(const RadialPairPotential&, int, int, bool);
};

enum class CoreType { soft, hard };

/// Soft-core iff no hard core and the potential is integrable over the unit
/// ball in R^d. Throws IndeterminateError if the quadrature cannot decide.
CoreType classify(const RadialPairPotential& v, int d = 3);

/// r -> xi^{-2} v(r / xi).
RadialPairPotential rescale_gp(const RadialPairPotential& v, double xi);

/// r -> N^{d-1} v(r N). Dimensions 2 and 3 only, unless `test_mode` admits d = 1.
RadialPairPotential rescale_hartree(const RadialPairPotential& v, int n, int d,
                                    bool test_mode = false);

struct HartreeAssumption {
  bool holds = false;
  double integral = 0.0;  // of |y|^{-1} envelope(|y|) over the eps-ball; inf if divergent
};

/// Checks integrability of a decreasing envelope of v against the d = 3
/// free Green's function near the origin. Without an explicit envelope the
/// monotone hull sup_{s in [r, eps)} v(s) is used. A supplied envelope must
/// be nonincreasing on (0, eps), else PreconditionError.
HartreeAssumption validate_hartree_assumption(
    const RadialPairPotential& v, double eps,
    const std::function<double(double)>& envelope = {});

/// Trap W on R^d. All kinds are radial.
class TrapPotential {
 public:
  enum class Kind { none, harmonic, hard_wall, tabulated };

  static TrapPotential none();
  /// stiffness * |x|^2.
  static TrapPotential harmonic(double stiffness = 1.0);
  /// 0 inside the closed ball of the given radius, +inf outside.
  static TrapPotential hard_wall(double radius);
  /// Linear interpolation of radial nodes; beyond the table the last slope
  /// (clamped at zero) continues the profile.
  static TrapPotential tabulated(std::vector<double> radii, std::vector<double> values);
  static TrapPotential from_csv(const std::string& path);

  ExtReal operator()(const Point& x) const { return radial(norm(x)); }
  ExtReal radial(double r) const;

  Kind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  bool is_confining() const;
  bool is_zero() const { return kind_ == Kind::none; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::none;
  double parameter_ = 0.0;
  std::vector<double> radii_;
  std::vector<double> values_;
};

/// The dN-dimensional trap sum and pair sum.
class LiftedPotentials {
 public:
  LiftedPotentials(int particle_count, TrapPotential trap, RadialPairPotential pair);

  int particle_count() const { return n_; }
  ExtReal trap_sum(std::span<const Point> x) const;
  ExtReal pair_sum(std::span<const Point> x) const;

 private:
  int n_;
  TrapPotential trap_;
  RadialPairPotential pair_;
};

}  // namespace bosepath

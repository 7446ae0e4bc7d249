#include "bosepath/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "bosepath/errors.hpp"
#include "bosepath/quadrature.hpp"

namespace bosepath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Piecewise-linear interpolation on increasing nodes; `outside` beyond the end.
double interpolate(const std::vector<double>& x, const std::vector<double>& y,
                   double r, double outside) {
  if (r <= x.front()) return y.front();
  if (r >= x.back()) return outside;
  const auto it = std::upper_bound(x.begin(), x.end(), r);
  const auto k = static_cast<std::size_t>(it - x.begin());
  const double t = (r - x[k - 1]) / (x[k] - x[k - 1]);
  return (1.0 - t) * y[k - 1] + t * y[k];
}

struct Table {
  std::vector<double> x;
  std::vector<double> y;
};

Table read_two_column_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open potential table '" + path + "'");
  Table table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string a, b;
    if (!(fields >> a >> b)) {
      throw PreconditionError(path + ":" + std::to_string(line_no) +
                              ": expected two columns");
    }
    try {
      const double r = std::stod(a);
      const double v = (b == "inf" || b == "+inf" || b == "Inf") ? kInf : std::stod(b);
      table.x.push_back(r);
      table.y.push_back(v);
    } catch (const std::invalid_argument&) {
      if (table.x.empty()) continue;  // header row
      throw PreconditionError(path + ":" + std::to_string(line_no) +
                              ": not a number");
    }
  }
  if (table.x.size() < 2) {
    throw PreconditionError(path + ": a table needs at least two rows");
  }
  if (!std::is_sorted(table.x.begin(), table.x.end()) || table.x.front() < 0.0) {
    throw PreconditionError(path + ": radii must be nonnegative and increasing");
  }
  return table;
}

}  // namespace

RadialPairPotential::RadialPairPotential(std::string name, Profile profile, Shape shape)
    : name_(std::move(name)), profile_(std::move(profile)), shape_(std::move(shape)) {
  if (shape_.hard_core_radius < 0.0) {
    throw PreconditionError("hard-core radius must be nonnegative");
  }
  std::sort(shape_.breakpoints.begin(), shape_.breakpoints.end());
  if (shape_.hard_core_radius > 0.0) shape_.breakpoints.push_back(shape_.hard_core_radius);
  std::sort(shape_.breakpoints.begin(), shape_.breakpoints.end());
  shape_.breakpoints.erase(std::unique(shape_.breakpoints.begin(), shape_.breakpoints.end()),
                           shape_.breakpoints.end());
}

ExtReal RadialPairPotential::operator()(double r) const {
  if (r < shape_.hard_core_radius) return ExtReal::infinity();
  if (identically_zero_) return 0.0;
  return ExtReal::from_double(profile_(r));
}

double RadialPairPotential::finite_part(double r) const {
  if (identically_zero_ || r < shape_.hard_core_radius) return 0.0;
  const double value = profile_(r);
  return std::isfinite(value) ? value : 0.0;
}

RadialPairPotential RadialPairPotential::zero() {
  RadialPairPotential v("zero", [](double) { return 0.0; },
                        Shape{0.0, 0.0, 0.0, 0.0, {}});
  v.identically_zero_ = true;
  return v;
}

RadialPairPotential RadialPairPotential::constant(double c) {
  return {"constant", [c](double) { return c; },
          Shape{0.0, std::min(c, 0.0), std::nullopt, kInf, {}}};
}

RadialPairPotential RadialPairPotential::hard_core(double a) {
  if (!(a > 0.0)) throw PreconditionError("hard_core: radius must be positive");
  return {"hard_core", [](double) { return 0.0; }, Shape{a, 0.0, a, a, {}}};
}

RadialPairPotential RadialPairPotential::square_well(double c, double radius) {
  if (!(radius > 0.0)) throw PreconditionError("square_well: radius must be positive");
  return {"square_well", [c, radius](double r) { return r <= radius ? c : 0.0; },
          Shape{0.0, std::min(c, 0.0), radius, radius, {radius}}};
}

RadialPairPotential RadialPairPotential::gaussian(double c, double width) {
  if (!(width > 0.0)) throw PreconditionError("gaussian: width must be positive");
  // exp(-x^2) < 1e-17 beyond x ~ 6.26
  const double range = 6.3 * width;
  return {"gaussian",
          [c, width](double r) {
            const double x = r / width;
            return c * std::exp(-x * x);
          },
          Shape{0.0, std::min(c, 0.0), std::nullopt, range, {}}};
}

RadialPairPotential RadialPairPotential::power_law(double c, double p, double cutoff) {
  if (!(cutoff > 0.0)) throw PreconditionError("power_law: cutoff must be positive");
  if (c < 0.0) throw PreconditionError("power_law: negative strength is unbounded below");
  return {"power_law",
          [c, p, cutoff](double r) {
            if (r > cutoff) return 0.0;
            if (c == 0.0) return 0.0;
            return c * std::pow(r, -p);  // +inf at r = 0 when p > 0
          },
          Shape{0.0, 0.0, cutoff, cutoff, {cutoff}}};
}

RadialPairPotential RadialPairPotential::with_hard_core(double a, const RadialPairPotential& tail) {
  if (!(a > 0.0)) throw PreconditionError("with_hard_core: radius must be positive");
  Shape shape = tail.shape_;
  shape.hard_core_radius = std::max(a, tail.hard_core_radius());
  if (shape.support_radius) shape.support_radius = std::max(*shape.support_radius, a);
  shape.effective_range = std::max(shape.effective_range, a);
  RadialPairPotential v(tail.name_ + "+hard_core", tail.profile_, shape);
  return v;
}

RadialPairPotential RadialPairPotential::tabulated(std::string name, std::vector<double> radii,
                                                   std::vector<double> values) {
  if (radii.size() != values.size() || radii.size() < 2) {
    throw PreconditionError("tabulated: need matching radius/value columns");
  }
  double core = 0.0;
  std::size_t first_finite = 0;
  while (first_finite < values.size() && std::isinf(values[first_finite])) {
    core = radii[first_finite];
    ++first_finite;
  }
  if (first_finite == values.size()) throw PreconditionError("tabulated: all values infinite");
  if (first_finite > 0) {
    // The core boundary node keeps the first finite value to its right.
    values[first_finite - 1] = values[first_finite];
  }
  double lower = 0.0;
  for (std::size_t k = first_finite; k < values.size(); ++k) lower = std::min(lower, values[k]);
  Shape shape{core, lower, radii.back(), radii.back(), radii};
  auto x = std::make_shared<std::vector<double>>(std::move(radii));
  auto y = std::make_shared<std::vector<double>>(std::move(values));
  return {std::move(name), [x, y](double r) { return interpolate(*x, *y, r, 0.0); },
          std::move(shape)};
}

RadialPairPotential RadialPairPotential::from_csv(const std::string& path) {
  auto table = read_two_column_csv(path);
  return tabulated("table:" + path, std::move(table.x), std::move(table.y));
}

CoreType classify(const RadialPairPotential& v, int d) {
  if (v.has_hard_core()) return CoreType::hard;
  if (v.is_identically_zero()) return CoreType::soft;
  const double omega = unit_sphere_area(d);
  const auto result = quad::integrate_to_origin(
      [&](double r) { return omega * std::abs(v.finite_part(r)) * std::pow(r, d - 1); }, 1.0,
      v.breakpoints());
  return result.finite ? CoreType::soft : CoreType::hard;
}

RadialPairPotential rescale_gp(const RadialPairPotential& v, double xi) {
  if (!(xi > 0.0)) throw PreconditionError("rescale_gp: xi must be positive");
  if (xi == 1.0) return v;
  RadialPairPotential::Shape shape = v.shape_;
  shape.hard_core_radius *= xi;
  shape.lower_bound /= xi * xi;
  if (shape.support_radius) *shape.support_radius *= xi;
  shape.effective_range *= xi;
  for (double& b : shape.breakpoints) b *= xi;
  auto profile = v.profile_;
  RadialPairPotential out(v.name_, [profile, xi](double r) { return profile(r / xi) / (xi * xi); },
                          std::move(shape));
  out.identically_zero_ = v.identically_zero_;
  return out;
}

RadialPairPotential rescale_hartree(const RadialPairPotential& v, int n, int d, bool test_mode) {
  if (n < 1) throw PreconditionError("rescale_hartree: N must be positive");
  if (!(d == 2 || d == 3 || (test_mode && d == 1))) {
    throw PreconditionError("rescale_hartree: dimension must be 2 or 3");
  }
  if (n == 1) return v;
  const double factor = std::pow(static_cast<double>(n), d - 1);
  const double scale = static_cast<double>(n);
  RadialPairPotential::Shape shape = v.shape_;
  shape.hard_core_radius /= scale;
  shape.lower_bound *= factor;
  if (shape.support_radius) *shape.support_radius /= scale;
  shape.effective_range /= scale;
  for (double& b : shape.breakpoints) b /= scale;
  auto profile = v.profile_;
  RadialPairPotential out(v.name_,
                          [profile, factor, scale](double r) { return factor * profile(r * scale); },
                          std::move(shape));
  out.identically_zero_ = v.identically_zero_;
  return out;
}

HartreeAssumption validate_hartree_assumption(const RadialPairPotential& v, double eps,
                                              const std::function<double(double)>& envelope) {
  if (!(eps > 0.0)) throw PreconditionError("validate_hartree_assumption: eps must be positive");
  if (v.has_hard_core()) {
    throw PreconditionError("validate_hartree_assumption: soft-core potentials only");
  }
  constexpr double kFourPi = 4.0 * std::numbers::pi;
  HartreeAssumption out;

  if (envelope) {
    // Sample geometrically towards the origin; the envelope must dominate v
    // and must not increase as r grows.
    double previous = envelope(eps * 0.999999);
    for (int k = 1; k < 200; ++k) {
      const double r = eps * std::pow(0.8, k);
      const double e = envelope(r);
      if (e < previous - 1e-12 * std::max(1.0, std::abs(previous))) {
        throw PreconditionError("validate_hartree_assumption: envelope is not decreasing");
      }
      const ExtReal vr = v(r);
      if (vr.is_infinite() ? std::isfinite(e) : e < vr.value() - 1e-12 * std::abs(e)) {
        throw PreconditionError("validate_hartree_assumption: envelope does not dominate v");
      }
      previous = e;
    }
    const auto result = quad::integrate_to_origin(
        [&](double r) { return kFourPi * r * std::max(envelope(r), 0.0); }, eps);
    out.holds = result.finite;
    out.integral = result.finite ? result.value : std::numeric_limits<double>::infinity();
    return out;
  }

  // Monotone hull as a step function on dyadic shells (eps 2^{-k-1}, eps 2^{-k}].
  std::vector<double> hull;
  auto hull_at = [&](int k) {
    while (static_cast<int>(hull.size()) <= k) {
      const int j = static_cast<int>(hull.size());
      const double hi = std::ldexp(eps, -j);
      const double lo = 0.5 * hi;
      double m = hull.empty() ? -std::numeric_limits<double>::infinity() : hull.back();
      for (int s = 0; s <= 16; ++s) {
        const double r = lo * std::pow(hi / lo, s / 16.0);
        const ExtReal value = v(r);
        m = value.is_infinite() ? std::numeric_limits<double>::infinity()
                                : std::max(m, value.value());
      }
      for (double b : v.breakpoints()) {
        if (b > lo && b <= hi) m = std::max(m, v.finite_part(b));
      }
      hull.push_back(m);
    }
    return hull[static_cast<std::size_t>(k)];
  };
  const auto result = quad::integrate_to_origin(
      [&](double r) {
        const int k = std::max(0, static_cast<int>(std::floor(std::log2(eps / r))));
        const double h = hull_at(k);
        if (std::isinf(h)) return std::numeric_limits<double>::infinity();
        return kFourPi * r * std::max(h, 0.0);
      },
      eps);
  out.holds = result.finite;
  out.integral = result.finite ? result.value : std::numeric_limits<double>::infinity();
  return out;
}

TrapPotential TrapPotential::none() { return TrapPotential{}; }

TrapPotential TrapPotential::harmonic(double stiffness) {
  if (!(stiffness > 0.0)) throw PreconditionError("harmonic trap: stiffness must be positive");
  TrapPotential w;
  w.kind_ = Kind::harmonic;
  w.parameter_ = stiffness;
  return w;
}

TrapPotential TrapPotential::hard_wall(double radius) {
  if (!(radius > 0.0)) throw PreconditionError("hard-wall trap: radius must be positive");
  TrapPotential w;
  w.kind_ = Kind::hard_wall;
  w.parameter_ = radius;
  return w;
}

TrapPotential TrapPotential::tabulated(std::vector<double> radii, std::vector<double> values) {
  if (radii.size() != values.size() || radii.size() < 2) {
    throw PreconditionError("tabulated trap: need matching radius/value columns");
  }
  if (radii.front() != 0.0) throw PreconditionError("tabulated trap: table must start at r = 0");
  if (std::isinf(values.front())) {
    throw PreconditionError("tabulated trap: W must be finite at the origin");
  }
  for (double y : values) {
    if (y < 0.0) throw PreconditionError("tabulated trap: values must be nonnegative");
  }
  TrapPotential w;
  w.kind_ = Kind::tabulated;
  w.radii_ = std::move(radii);
  w.values_ = std::move(values);
  return w;
}

TrapPotential TrapPotential::from_csv(const std::string& path) {
  auto table = read_two_column_csv(path);
  return tabulated(std::move(table.x), std::move(table.y));
}

ExtReal TrapPotential::radial(double r) const {
  switch (kind_) {
    case Kind::none: return 0.0;
    case Kind::harmonic: return parameter_ * r * r;
    case Kind::hard_wall: return r <= parameter_ ? ExtReal(0.0) : ExtReal::infinity();
    case Kind::tabulated: {
      const std::size_t n = radii_.size();
      if (r >= radii_.back()) {
        if (std::isinf(values_[n - 1])) return ExtReal::infinity();
        const double slope = std::isinf(values_[n - 2])
                                 ? 0.0
                                 : (values_[n - 1] - values_[n - 2]) / (radii_[n - 1] - radii_[n - 2]);
        return values_[n - 1] + std::max(slope, 0.0) * (r - radii_.back());
      }
      const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
      const auto k = static_cast<std::size_t>(it - radii_.begin());
      if (std::isinf(values_[k - 1]) || std::isinf(values_[k])) return ExtReal::infinity();
      const double t = (r - radii_[k - 1]) / (radii_[k] - radii_[k - 1]);
      return (1.0 - t) * values_[k - 1] + t * values_[k];
    }
  }
  return 0.0;
}

bool TrapPotential::is_confining() const {
  switch (kind_) {
    case Kind::none: return false;
    case Kind::harmonic:
    case Kind::hard_wall: return true;
    case Kind::tabulated: {
      const std::size_t n = values_.size();
      if (std::isinf(values_[n - 1])) return true;
      return values_[n - 1] > values_[n - 2];
    }
  }
  return false;
}

std::string TrapPotential::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::none: os << "none"; break;
    case Kind::harmonic: os << "harmonic(" << parameter_ << ")"; break;
    case Kind::hard_wall: os << "hard_wall(" << parameter_ << ")"; break;
    case Kind::tabulated: os << "tabulated(" << radii_.size() << " nodes)"; break;
  }
  return os.str();
}

LiftedPotentials::LiftedPotentials(int particle_count, TrapPotential trap, RadialPairPotential pair)
    : n_(particle_count), trap_(std::move(trap)), pair_(std::move(pair)) {
  if (n_ < 1) throw PreconditionError("LiftedPotentials: particle count must be positive");
}

ExtReal LiftedPotentials::trap_sum(std::span<const Point> x) const {
  if (static_cast<int>(x.size()) != n_) throw PreconditionError("trap_sum: wrong particle count");
  ExtReal total = 0.0;
  for (const Point& p : x) total += trap_(p);
  return total;
}

ExtReal LiftedPotentials::pair_sum(std::span<const Point> x) const {
  if (static_cast<int>(x.size()) != n_) throw PreconditionError("pair_sum: wrong particle count");
  ExtReal total = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) total += pair_(distance(x[i], x[j]));
  }
  return total;
}

}  // namespace bosepath

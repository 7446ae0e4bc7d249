#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// Lowest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
inline double lowest_eigenvalue(const std::vector<double>& diag, double off) {
  const std::size_t n = diag.size();
  double lo = *std::min_element(diag.begin(), diag.end()) - 2.0 * std::abs(off);
  double hi = *std::max_element(diag.begin(), diag.end()) + 2.0 * std::abs(off);
  auto below = [&](double x) {
    int count = 0;
    double q = diag[0] - x;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
      const double prev = std::abs(q) < 1e-300 ? 1e-300 : q;
      q = diag[i] - x - off * off / prev;
      if (q < 0) ++count;
    }
    return count;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (below(mid) >= 1) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// Ground state of the same tridiagonal matrix by inverse iteration.
inline std::vector<double> lowest_eigenvector(const std::vector<double>& diag, double off) {
  const double shift = lowest_eigenvalue(diag, off) - 1e-9;
  const std::size_t n = diag.size();
  std::vector<double> x(n, 1.0);
  for (int it = 0; it < 50; ++it) {
    std::vector<double> c(n), d(n), b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = diag[i] - shift;
    c[0] = off / b[0];
    d[0] = x[0] / b[0];
    for (std::size_t i = 1; i < n; ++i) {
      const double m = b[i] - off * c[i - 1];
      c[i] = off / m;
      d[i] = (x[i] - off * d[i - 1]) / m;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
    double s = 0;
    for (double v : x) s += v * v;
    s = std::sqrt(s);
    for (double& v : x) v /= s;
  }
  if (x[n / 2] < 0) for (double& v : x) v = -v;
  return x;
}

/// Dirichlet 1D Schroedinger operator -u'' + w u on nodes x_k = (k - (n-1)/2) h.
struct Chain {
  std::vector<double> diag;
  double off;
};

inline Chain chain(int n, double half_extent, const std::function<double(double)>& w) {
  const double h = 2.0 * half_extent / (n + 1);
  Chain c{std::vector<double>(n), -1.0 / (h * h)};
  for (int k = 0; k < n; ++k) c.diag[k] = 2.0 / (h * h) + w((k - (n - 1) / 2.0) * h);
  return c;
}

/// (1/beta) log of the total mass at time beta of du/dt = u'' + f u with a unit
/// point mass at the origin, by Crank-Nicolson on the same node set.
inline double crank_nicolson_cumulant(int n, double half_extent, const std::function<double(double)>& f,
                                      double beta, int time_steps) {
  const double h = 2.0 * half_extent / (n + 1);
  const double dt = beta / time_steps;
  std::vector<double> u(n, 0.0), fx(n);
  u[(n - 1) / 2] = 1.0 / h;
  for (int k = 0; k < n; ++k) fx[k] = f((k - (n - 1) / 2.0) * h);
  const double r = dt / (h * h);
  double log_scale = 0.0;
  std::vector<double> rhs(n), c(n), d(n);
  for (int step = 0; step < time_steps; ++step) {
    for (int k = 0; k < n; ++k) {
      const double left = k > 0 ? u[k - 1] : 0.0;
      const double right = k + 1 < n ? u[k + 1] : 0.0;
      rhs[k] = u[k] + 0.5 * r * (left - 2.0 * u[k] + right) + 0.5 * dt * fx[k] * u[k];
    }
    const double off = -0.5 * r;
    for (int k = 0; k < n; ++k) {
      const double b = 1.0 + r - 0.5 * dt * fx[k];
      const double m = k == 0 ? b : b - off * c[k - 1];
      c[k] = off / m;
      d[k] = (rhs[k] - (k == 0 ? 0.0 : off * d[k - 1])) / m;
    }
    u[n - 1] = d[n - 1];
    for (int k = n - 1; k-- > 0;) u[k] = d[k] - c[k] * u[k + 1];
    double mass = 0.0;
    for (double v : u) mass += v * h;
    log_scale += std::log(mass);
    for (double& v : u) v /= mass;
  }
  return log_scale / beta;
}

}  // namespace oracle

/// \file grid.hpp
/// \brief Discrete calculus on the uniform grid over [0,1].
///
/// Every function in the library is sampled on t_i = i/(n-1). Inner
/// products and norms use the trapezoidal rule; derivatives use central
/// differences with second-order one-sided stencils at the endpoints.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ecm {

inline double grid_step(std::size_t n) { return 1.0 / static_cast<double>(n - 1); }

inline std::vector<double> grid_points(std::size_t n) {
  std::vector<double> t(n);
  const double h = grid_step(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * h;
  t[n - 1] = 1.0;
  return t;
}

/// Trapezoidal integral of samples over [0,1].
inline double trapz(const std::vector<double>& f) {
  const std::size_t n = f.size();
  const double h = grid_step(n);
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < n; ++i) s += f[i];
  return s * h;
}

/// Trapezoidal L2 inner product <a,b> on [0,1].
inline double inner(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  const double h = grid_step(n);
  double s = 0.5 * (a.front() * b.front() + a.back() * b.back());
  for (std::size_t i = 1; i + 1 < n; ++i) s += a[i] * b[i];
  return s * h;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(std::max(0.0, inner(a, a))); }

/// Second-order finite-difference derivative on the uniform grid.
inline std::vector<double> derivative(const std::vector<double>& f) {
  const std::size_t n = f.size();
  if (n < 3) throw std::invalid_argument("derivative: need at least 3 samples");
  const double h = grid_step(n);
  std::vector<double> d(n);
  // difference forms cancel exactly for constant inputs
  d[0] = (4.0 * (f[1] - f[0]) + (f[0] - f[2])) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[n - 1] = (4.0 * (f[n - 1] - f[n - 2]) - (f[n - 1] - f[n - 3])) / (2.0 * h);
  return d;
}

/// Cumulative trapezoidal integral, zero at t=0.
inline std::vector<double> cumtrapz(const std::vector<double>& f) {
  const std::size_t n = f.size();
  const double h = grid_step(n);
  std::vector<double> out(n);
  out[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return out;
}

/// Piecewise-linear evaluation of grid samples at t in [0,1] (clamped).
inline double interp1(const std::vector<double>& f, double t) {
  const std::size_t n = f.size();
  double u = t * static_cast<double>(n - 1);
  if (u <= 0.0) return f.front();
  if (u >= static_cast<double>(n - 1)) return f.back();
  const std::size_t i = static_cast<std::size_t>(u);
  const double frac = u - static_cast<double>(i);
  return f[i] + frac * (f[i + 1] - f[i]);
}

/// Resample onto a uniform grid of m points by linear interpolation.
inline std::vector<double> resample(const std::vector<double>& f, std::size_t m) {
  std::vector<double> out(m);
  const double h = grid_step(m);
  for (std::size_t j = 0; j < m; ++j) out[j] = interp1(f, static_cast<double>(j) * h);
  out[m - 1] = f.back();
  return out;
}

/// Elementwise median across a set of equally sized vectors.
inline std::vector<double> pointwise_median(const std::vector<std::vector<double>>& rows) {
  const std::size_t nrows = rows.size();
  const std::size_t n = rows.front().size();
  std::vector<double> out(n);
  std::vector<double> col(nrows);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < nrows; ++r) col[r] = rows[r][j];
    auto mid = col.begin() + static_cast<std::ptrdiff_t>(nrows / 2);
    std::nth_element(col.begin(), mid, col.end());
    if (nrows % 2 == 1) {
      out[j] = *mid;
    } else {
      const double hi = *mid;
      const double lo = *std::max_element(col.begin(), mid);
      out[j] = 0.5 * (lo + hi);
    }
  }
  return out;
}

/// Linear-interpolation sample quantile (the common "type 7" rule).
inline double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n == 1) return v[0];
  const double pos = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::min(pos, static_cast<double>(n - 2)));
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

inline double median_of(std::vector<double> v) { return quantile(std::move(v), 0.5); }

}  // namespace ecm

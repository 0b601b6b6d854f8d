/// \file types.hpp
/// \brief Core value types: sampled functions, SRSFs, and warping functions.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ecm/errors.hpp"
#include "ecm/grid.hpp"

namespace ecm {

namespace detail {
inline void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw invalid_input(std::string(what) + ": non-finite value");
  }
}
inline void require_grid(const std::vector<double>& v, const char* what) {
  if (v.size() < 3) throw invalid_input(std::string(what) + ": need at least 3 samples");
  require_finite(v, what);
}
}  // namespace detail

/// A scalar function on [0,1] sampled on the uniform grid.
class SampledFunction {
 public:
  explicit SampledFunction(std::vector<double> values) : values_(std::move(values)) {
    detail::require_grid(values_, "SampledFunction");
  }

  std::size_t grid_size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Piecewise-linear evaluation at t in [0,1].
  double at(double t) const { return interp1(values_, t); }

  /// Trapezoidal mean over [0,1].
  double mean() const { return trapz(values_); }

  friend bool operator==(const SampledFunction& a, const SampledFunction& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<double> values_;
};

/// Square-root slope representation of a function; an element of L2.
class Srsf {
 public:
  explicit Srsf(std::vector<double> values) : values_(std::move(values)) {
    detail::require_grid(values_, "Srsf");
  }

  std::size_t grid_size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double norm() const { return norm2(values_); }

  friend bool operator==(const Srsf& a, const Srsf& b) { return a.values_ == b.values_; }

 private:
  std::vector<double> values_;
};

/// An orientation-preserving reparameterization of [0,1] fixing the endpoints.
class Warping {
 public:
  explicit Warping(std::vector<double> values) : values_(std::move(values)) {
    detail::require_grid(values_, "Warping");
    if (values_.front() != 0.0 || values_.back() != 1.0)
      throw invalid_input("Warping: endpoints must be exactly 0 and 1");
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
      if (!(values_[i + 1] > values_[i]))
        throw invalid_input("Warping: samples must be strictly increasing");
    }
  }

  static Warping identity(std::size_t n) { return Warping(grid_points(n)); }

  std::size_t grid_size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double at(double t) const { return interp1(values_, t); }

  /// Composition (this o other), evaluated on other's grid.
  Warping compose(const Warping& other) const {
    std::vector<double> out(other.grid_size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = interp1(values_, other[i]);
    out.front() = 0.0;
    out.back() = 1.0;
    return Warping(std::move(out));
  }

  /// Group inverse, resampled onto the same uniform grid.
  Warping inverse() const {
    const std::size_t n = values_.size();
    const std::vector<double> t = grid_points(n);
    std::vector<double> out(n);
    // invert the monotone piecewise-linear map by walking its segments
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = t[i];
      while (seg + 2 < n && values_[seg + 1] < y) ++seg;
      const double y0 = values_[seg], y1 = values_[seg + 1];
      const double frac = (y1 > y0) ? (y - y0) / (y1 - y0) : 0.0;
      out[i] = (static_cast<double>(seg) + frac) * grid_step(n);
    }
    out.front() = 0.0;
    out.back() = 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!(out[i + 1] > out[i])) out[i + 1] = std::nextafter(out[i], 2.0);
    }
    out.back() = 1.0;
    return Warping(std::move(out));
  }

  friend bool operator==(const Warping& a, const Warping& b) { return a.values_ == b.values_; }

 private:
  std::vector<double> values_;
};

}  // namespace ecm

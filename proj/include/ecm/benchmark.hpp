/// \file benchmark.hpp
/// \brief The analytic eight-segment benchmark geometry.
///
/// The boundary at height z is an eight-segment piecewise model in the shape
/// parameter t. Segment six carries a parabolic bump in x; its parabola is
/// centered on the segment midpoint so the curve stays continuous at both
/// segment ends (x = 0.25 at t = 0.8 and t = 0.95, apex 0.3625 at t = 0.875).

#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "ecm/contour.hpp"

namespace ecm {

namespace benchmark {

/// Segment breakpoints in t.
inline constexpr std::array<double, 9> breaks = {0.0,   0.25, 0.5,  0.75, 0.775,
                                                 0.8,   0.95, 0.975, 1.0};

inline std::array<double, 8> x_nodes(double z) {
  const double r = 0.25 * std::sqrt(z);
  return {r, 1.0, 1.0, r, r, 0.25, 0.25, r};
}

inline constexpr std::array<double, 8> y_nodes = {0.0, 0.0, 1.0, 1.0, 0.8, 0.8, 0.2, 0.2};

inline std::size_t segment_of(double t) {
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s)
    if (t < breaks[s + 1]) return s;
  return 7;
}

inline double x_at(double z, double t) {
  const auto xn = x_nodes(z);
  const std::size_t s = segment_of(t);
  const double lo = breaks[s], hi = breaks[s + 1];
  switch (s) {
    case 0: return xn[0] + (xn[1] - xn[0]) / (hi - lo) * t;
    case 1: return xn[1];
    case 2: return xn[2] - (xn[2] - xn[3]) / (hi - lo) * (t - lo);
    case 3: return xn[3];
    case 4: return xn[4] + (xn[5] - xn[4]) / (hi - lo) * (t - lo);
    case 5: {
      const double mid = 0.5 * (lo + hi);
      const double d = t - mid;
      return xn[5] + 0.1125 - 20.0 * d * d;
    }
    case 6: return xn[6] - (xn[6] - xn[7]) / (hi - lo) * (t - lo);
    default: return xn[7];
  }
}

inline double y_at(double z, double t) {
  (void)z;  // the y profile does not depend on the layer height
  const auto& yn = y_nodes;
  const std::size_t s = segment_of(t);
  const double lo = breaks[s], hi = breaks[s + 1];
  switch (s) {
    case 0: return yn[0];
    case 1: return yn[1] + (yn[2] - yn[1]) / (hi - lo) * (t - lo);
    case 2: return yn[2];
    case 3: return yn[3] - (yn[3] - yn[4]) / (hi - lo) * (t - lo);
    case 4: return yn[4];
    case 5: return yn[5] - (yn[5] - yn[6]) / (hi - lo) * (t - lo);
    case 6: return yn[6];
    default: return yn[7] - (yn[7] - yn[0]) / (hi - lo) * (t - lo);
  }
}

}  // namespace benchmark

/// Samples the benchmark boundary at height z on a uniform t-grid.
inline ContourLayer benchmark_contour(double z, std::size_t grid_size) {
  if (!(z >= 0.0 && z <= 1.0)) throw invalid_input("benchmark_contour: z must lie in [0,1]");
  if (grid_size < 3) throw invalid_input("benchmark_contour: grid too small");
  std::vector<double> xs(grid_size), ys(grid_size);
  const double h = grid_step(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double t = (j + 1 == grid_size) ? 1.0 : static_cast<double>(j) * h;
    xs[j] = benchmark::x_at(z, t);
    ys[j] = benchmark::y_at(z, t);
  }
  xs[grid_size - 1] = xs[0];
  ys[grid_size - 1] = ys[0];
  return make_contour(z, std::move(xs), std::move(ys), true);
}

}  // namespace ecm

/// \file contour.hpp
/// \brief Closed planar contours as paired coordinate functions of t in [0,1].

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ecm/types.hpp"

namespace ecm {

using Point2 = std::array<double, 2>;

/// A planar contour at height z: x(t), y(t) on a shared uniform grid.
/// A closed contour repeats its start point at t = 1.
struct ContourLayer {
  double z = 0.0;
  SampledFunction x;
  SampledFunction y;
  bool closed = true;

  std::size_t grid_size() const { return x.grid_size(); }
};

inline ContourLayer make_contour(double z, std::vector<double> xs, std::vector<double> ys,
                                 bool closed = true) {
  ContourLayer c{z, SampledFunction(std::move(xs)), SampledFunction(std::move(ys)), closed};
  if (c.x.grid_size() != c.y.grid_size())
    throw invalid_input("ContourLayer: x and y must share the grid");
  if (closed) {
    if (std::fabs(c.x[c.x.grid_size() - 1] - c.x[0]) > 1e-9 ||
        std::fabs(c.y[c.y.grid_size() - 1] - c.y[0]) > 1e-9)
      throw invalid_input("ContourLayer: closed contour must return to its start");
  }
  return c;
}

/// Signed (shoelace) area of a polygon given without a repeated end point.
inline double polygon_area(const std::vector<Point2>& pts) {
  double s = 0.0;
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = pts[i];
    const Point2& b = pts[(i + 1) % m];
    s += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * s;
}

inline double polygon_perimeter(const std::vector<Point2>& pts) {
  double s = 0.0;
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = pts[i];
    const Point2& b = pts[(i + 1) % m];
    s += std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  return s;
}

/// Resamples a closed polygon by arc length onto the uniform t-grid,
/// starting at the polygon's first vertex; t=0 and t=1 coincide.
inline ContourLayer resample_closed_polygon(const std::vector<Point2>& pts, double z,
                                            std::size_t grid_size) {
  const std::size_t m = pts.size();
  if (m < 3) throw invalid_input("resample_closed_polygon: need at least 3 vertices");
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = pts[i];
    const Point2& b = pts[(i + 1) % m];
    cum[i + 1] = cum[i] + std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  const double total = cum[m];
  if (!(total > 0.0)) throw invalid_input("resample_closed_polygon: zero perimeter");

  std::vector<double> xs(grid_size), ys(grid_size);
  std::size_t seg = 0;
  for (std::size_t j = 0; j + 1 < grid_size; ++j) {
    const double s = total * static_cast<double>(j) / static_cast<double>(grid_size - 1);
    while (seg + 1 < m && cum[seg + 1] < s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double frac = (len > 0.0) ? (s - cum[seg]) / len : 0.0;
    const Point2& a = pts[seg];
    const Point2& b = pts[(seg + 1) % m];
    xs[j] = a[0] + frac * (b[0] - a[0]);
    ys[j] = a[1] + frac * (b[1] - a[1]);
  }
  xs[grid_size - 1] = pts[0][0];
  ys[grid_size - 1] = pts[0][1];
  return make_contour(z, std::move(xs), std::move(ys), true);
}

}  // namespace ecm

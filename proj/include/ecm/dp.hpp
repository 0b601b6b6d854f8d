/// \file dp.hpp
/// \brief Optimal warping between SRSFs by dynamic programming.
///
/// The amplitude distance D_a([q1],[q2]) = inf over warps of
/// ||q1 - (q2,gamma)|| is solved on the n x n lattice of grid nodes.
/// Lattice edges connect nodes by coprime offsets (k,l); along an edge the
/// warp is linear with slope l/k and the mismatch is integrated by the
/// trapezoidal rule on the t-samples it covers. Summed edge costs therefore
/// reproduce the trapezoidal integral of the full path, so splitting an edge
/// at a collinear lattice node never changes the cost. On small grids the
/// stencil widens to cover every slope, making the search an exact minimum
/// over all monotone lattice paths.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "ecm/srsf.hpp"
#include "ecm/types.hpp"

namespace ecm {

struct DpOptions {
  int stencil_max = 7;   ///< largest neighbor offset per axis on large grids
  bool refine = false;   ///< re-run once after composing with the optimum
  int band_levels = 32;  ///< vertical subdivisions for the banded polish; 0 = lattice only
  int band_width = 2;    ///< polish search band in grid steps around the lattice path
};

/// Restricts the solver to pure lattice paths (no banded polish).
inline DpOptions lattice_only(DpOptions opts = {}) {
  opts.band_levels = 0;
  return opts;
}

struct AlignmentResult {
  double distance;  ///< sqrt of the minimal lattice path cost
  Warping warp;     ///< gamma* minimizing ||q1 - (q2, gamma)||
};

namespace detail {

inline std::vector<std::pair<int, int>> dp_stencil(std::size_t n, int stencil_max) {
  const int bound = (n <= 16) ? static_cast<int>(n - 1)
                              : std::min(stencil_max, static_cast<int>(n - 1));
  std::vector<std::pair<int, int>> offs;
  for (int k = 1; k <= bound; ++k)
    for (int l = 1; l <= bound; ++l)
      if (std::gcd(k, l) == 1) offs.emplace_back(k, l);
  return offs;
}

/// Trapezoidal mismatch along the edge (i0,j0) -> (i0+k, j0+l).
inline double dp_edge_cost(const std::vector<double>& q1, const std::vector<double>& q2,
                           int i0, int j0, int k, int l, double h) {
  const double slope = static_cast<double>(l) / static_cast<double>(k);
  const double sq = std::sqrt(slope);
  double acc = 0.0;
  for (int s = 0; s <= k; ++s) {
    const double jj = static_cast<double>(j0) + slope * static_cast<double>(s);
    const int idx = std::min(static_cast<int>(jj), static_cast<int>(q2.size()) - 2);
    const double frac = jj - static_cast<double>(idx);
    const double q2v = q2[idx] + frac * (q2[idx + 1] - q2[idx]);
    const double g = q1[static_cast<std::size_t>(i0 + s)] - sq * q2v;
    const double w = (s == 0 || s == k) ? 0.5 : 1.0;
    acc += w * g * g;
  }
  return acc * h;
}

/// Refines a lattice path on a fine vertical grid within a band around it.
/// The search space contains the input path, so the cost never increases;
/// the finer slope resolution removes most of the lattice staircase error.
inline double band_refine(const std::vector<double>& q1, const std::vector<double>& q2,
                          std::vector<double>& gamma, const DpOptions& opts) {
  const int n = static_cast<int>(q1.size());
  const double h = grid_step(q1.size());
  const double fine = h / static_cast<double>(opts.band_levels);
  const int half = opts.band_width * opts.band_levels;
  const int width = 2 * half + 1;
  const double inf = std::numeric_limits<double>::infinity();

  auto level_value = [&](int col, int d) {
    if (col == 0) return 0.0;
    if (col == n - 1) return 1.0;
    const double v = gamma[static_cast<std::size_t>(col)] + fine * static_cast<double>(d - half);
    return std::min(std::max(v, 0.0), 1.0);
  };
  auto q2_at = [&](double v) {
    const double u = v * static_cast<double>(q1.size() - 1);
    const int idx = std::min(static_cast<int>(u), n - 2);
    const double frac = u - static_cast<double>(idx);
    return q2[static_cast<std::size_t>(idx)] +
           frac * (q2[static_cast<std::size_t>(idx) + 1] - q2[static_cast<std::size_t>(idx)]);
  };

  std::vector<double> cost_prev(width, inf), cost_cur(width, inf);
  std::vector<std::int32_t> from(static_cast<std::size_t>(n) * width, -1);
  std::vector<double> vals_prev(width), vals_cur(width), q2_prev(width), q2_cur(width);
  for (int d = 0; d < width; ++d) {
    vals_prev[d] = level_value(0, d);
    q2_prev[d] = q2_at(vals_prev[d]);
  }
  cost_prev[half] = 0.0;  // column 0 pinned at gamma = 0

  // state values are affine in the level index away from the [0,1] clamps,
  // so the sqrt of the transition slope depends only on d - e per column
  std::vector<double> sq_table(static_cast<std::size_t>(2 * width - 1));
  for (int col = 1; col < n; ++col) {
    for (int d = 0; d < width; ++d) {
      vals_cur[d] = level_value(col, d);
      q2_cur[d] = q2_at(vals_cur[d]);
      cost_cur[d] = inf;
    }
    bool clipped = (vals_cur[0] == 0.0 || vals_cur[width - 1] == 1.0 || vals_prev[0] == 0.0 ||
                    vals_prev[width - 1] == 1.0 || col == 1 || col == n - 1);
    const double base = gamma[static_cast<std::size_t>(col)] -
                        gamma[static_cast<std::size_t>(col - 1)];
    for (int delta = -(width - 1); delta <= width - 1; ++delta) {
      const double slope = (base + fine * static_cast<double>(delta)) / h;
      sq_table[static_cast<std::size_t>(delta + width - 1)] =
          (slope > 0.0) ? std::sqrt(slope) : -1.0;
    }
    const int lo = (col == n - 1) ? half : 0;
    const int hi = (col == n - 1) ? half : width - 1;
    for (int d = lo; d <= hi; ++d) {
      const double vb = vals_cur[d];
      const double q1b = q1[static_cast<std::size_t>(col)];
      const double q1a = q1[static_cast<std::size_t>(col - 1)];
      double best = inf;
      std::int32_t best_from = -1;
      for (int e = 0; e < width; ++e) {
        if (cost_prev[e] == inf) continue;
        const double va = vals_prev[e];
        if (!(vb > va)) continue;
        double sq;
        if (clipped) {
          sq = std::sqrt((vb - va) / h);
        } else {
          sq = sq_table[static_cast<std::size_t>(d - e + width - 1)];
          if (sq < 0.0) continue;
        }
        const double g0 = q1a - sq * q2_prev[e];
        const double g1 = q1b - sq * q2_cur[d];
        const double c = cost_prev[e] + 0.5 * h * (g0 * g0 + g1 * g1);
        if (c < best) {
          best = c;
          best_from = e;
        }
      }
      cost_cur[d] = best;
      from[static_cast<std::size_t>(col) * width + d] = best_from;
    }
    cost_prev.swap(cost_cur);
    vals_prev.swap(vals_cur);
    q2_prev.swap(q2_cur);
  }

  const double total = cost_prev[half];
  if (!std::isfinite(total)) return inf;
  int d = half;
  for (int col = n - 1; col >= 0; --col) {
    gamma[static_cast<std::size_t>(col)] = level_value(col, d);
    if (col > 0) d = from[static_cast<std::size_t>(col) * width + d];
  }
  gamma.front() = 0.0;
  gamma.back() = 1.0;
  return total;
}

}  // namespace detail

/// Amplitude distance and the minimizing warp: gamma* aligns q2 toward q1.
inline AlignmentResult amplitude_distance(const Srsf& q1, const Srsf& q2,
                                          const DpOptions& opts = {}) {
  if (q1.grid_size() != q2.grid_size())
    throw invalid_input("amplitude_distance: grids must match");
  const int n = static_cast<int>(q1.grid_size());
  const double h = grid_step(q1.grid_size());
  const auto& a = q1.values();
  const auto& b = q2.values();
  const auto stencil = detail::dp_stencil(q1.grid_size(), opts.stencil_max);

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(static_cast<std::size_t>(n) * n, inf);
  std::vector<std::int32_t> prev(static_cast<std::size_t>(n) * n, -1);
  cost[0] = 0.0;
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      double best = inf;
      std::int32_t best_prev = -1;
      for (const auto& [k, l] : stencil) {
        if (k > i || l > j) continue;
        const int pi = i - k, pj = j - l;
        if (pi == 0 && pj != 0) continue;  // paths start at the corner
        if (pj == 0 && pi != 0) continue;
        const double base = cost[static_cast<std::size_t>(pi) * n + pj];
        if (base == inf) continue;
        const double c = base + detail::dp_edge_cost(a, b, pi, pj, k, l, h);
        if (c < best) {
          best = c;
          best_prev = static_cast<std::int32_t>(pi * n + pj);
        }
      }
      cost[static_cast<std::size_t>(i) * n + j] = best;
      prev[static_cast<std::size_t>(i) * n + j] = best_prev;
    }
  }

  const double total = cost[static_cast<std::size_t>(n) * n - 1];
  if (!std::isfinite(total)) throw invalid_input("amplitude_distance: lattice has no path");

  // walk the path back and interpolate gamma on unvisited columns
  std::vector<double> gamma(static_cast<std::size_t>(n));
  std::vector<int> node_i, node_j;
  for (std::int32_t at = static_cast<std::int32_t>(n) * n - 1; at >= 0;
       at = prev[static_cast<std::size_t>(at)]) {
    node_i.push_back(at / n);
    node_j.push_back(at % n);
    if (at == 0) break;
  }
  for (std::size_t s = node_i.size(); s-- > 1;) {
    const int i0 = node_i[s], j0 = node_j[s];
    const int i1 = node_i[s - 1], j1 = node_j[s - 1];
    const double slope = static_cast<double>(j1 - j0) / static_cast<double>(i1 - i0);
    for (int i = i0; i <= i1; ++i)
      gamma[static_cast<std::size_t>(i)] = (static_cast<double>(j0) +
                                            slope * static_cast<double>(i - i0)) * h;
  }
  gamma.front() = 0.0;
  gamma.back() = 1.0;

  double final_cost = total;
  if (opts.band_levels > 0) {
    const double refined = detail::band_refine(a, b, gamma, opts);
    if (std::isfinite(refined) && refined < final_cost) final_cost = refined;
  }
  AlignmentResult result{std::sqrt(std::max(final_cost, 0.0)), Warping(std::move(gamma))};

  if (opts.refine) {
    const Srsf warped = group_action(q2, result.warp);
    DpOptions inner = opts;
    inner.refine = false;
    AlignmentResult second = amplitude_distance(q1, warped, inner);
    if (second.distance < result.distance) {
      result.distance = second.distance;
      result.warp = result.warp.compose(second.warp);
    }
  }
  return result;
}

}  // namespace ecm

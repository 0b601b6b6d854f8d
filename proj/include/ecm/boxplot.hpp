/// \file boxplot.hpp
/// \brief Functional boxplots per component and the combined outlier report.
///
/// The translation, amplitude, and phase components of a sample each get a
/// boxplot in their own space. Amplitude and phase share one linear-space
/// construction: order by distance to the median, keep the closest half as
/// the central region, pick the quartile pair maximizing a weighted
/// spread-plus-opposition objective, and place cutoffs at
/// quartile + whisker_factor * IQR along the quartile direction, where
/// IQR = d(Q1, median) + d(Q3, median).

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ecm/median.hpp"
#include "ecm/sphere.hpp"

namespace ecm {

struct BoxplotConfig {
  double lambda = 0.5;
  double whisker_factor = 1.5;
  bool conservative = false;  ///< threshold by the min of the extreme distances
};

namespace detail {

struct LinearBoxplot {
  std::vector<double> distances;
  std::vector<std::size_t> central;
  std::size_t q1_index = 0, q3_index = 0;
  std::vector<double> whisker1, whisker3;
  std::optional<std::size_t> extreme1, extreme3;
  double iqr = 0.0;
  double threshold = std::numeric_limits<double>::infinity();
  bool degenerate = false;
};

/// Boxplot construction in a linear space: points around a center under the
/// trapezoidal L2 metric. Works on amplitude SRSFs directly and on phase
/// tangent vectors (center = origin).
inline LinearBoxplot build_linear_boxplot(const std::vector<std::vector<double>>& points,
                                          const std::vector<double>& center,
                                          const BoxplotConfig& cfg) {
  const std::size_t nsamp = points.size();
  const std::size_t n = center.size();
  if (nsamp < 4) throw invalid_input("boxplot: need at least 4 samples");

  LinearBoxplot box;
  box.distances.resize(nsamp);
  std::vector<std::vector<double>> dirs(nsamp);
  for (std::size_t i = 0; i < nsamp; ++i) {
    std::vector<double> diff(n);
    for (std::size_t j = 0; j < n; ++j) diff[j] = points[i][j] - center[j];
    box.distances[i] = norm2(diff);
    if (box.distances[i] > 0.0) {
      for (double& x : diff) x /= box.distances[i];
      dirs[i] = std::move(diff);
    }
  }

  std::vector<std::size_t> order(nsamp);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (box.distances[a] != box.distances[b]) return box.distances[a] < box.distances[b];
    return a < b;
  });
  box.central.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(nsamp / 2));

  double big = 0.0;  // max distance inside the central region
  std::vector<std::size_t> candidates;
  for (std::size_t idx : box.central) {
    if (box.distances[idx] > 0.0) {
      candidates.push_back(idx);
      big = std::max(big, box.distances[idx]);
    }
  }
  if (candidates.size() < 2) {
    box.degenerate = true;  // no spread beyond the median: nothing to flag
    return box;
  }

  // exhaustive quartile search over central-region pairs
  double best_obj = -std::numeric_limits<double>::infinity();
  std::size_t best_a = candidates[0], best_b = candidates[1];
  for (std::size_t ai = 0; ai < candidates.size(); ++ai) {
    for (std::size_t bi = ai + 1; bi < candidates.size(); ++bi) {
      const std::size_t a = candidates[ai], b = candidates[bi];
      const double spread = (box.distances[a] + box.distances[b]) / big;
      const double opposition = inner(dirs[a], dirs[b]) + 1.0;
      const double obj = cfg.lambda * spread - (1.0 - cfg.lambda) * opposition;
      if (obj > best_obj) {
        best_obj = obj;
        best_a = a;
        best_b = b;
      }
    }
  }
  // label the pair: q1 is the side lying lower on average
  const double mean_a = trapz(dirs[best_a]);
  const double mean_b = trapz(dirs[best_b]);
  box.q1_index = (mean_a <= mean_b) ? best_a : best_b;
  box.q3_index = (mean_a <= mean_b) ? best_b : best_a;

  box.iqr = box.distances[box.q1_index] + box.distances[box.q3_index];
  const double reach = cfg.whisker_factor * box.iqr;
  box.whisker1.resize(n);
  box.whisker3.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    box.whisker1[j] = points[box.q1_index][j] + reach * dirs[box.q1_index][j];
    box.whisker3[j] = points[box.q3_index][j] + reach * dirs[box.q3_index][j];
  }
  const double w1 = box.distances[box.q1_index] + reach;
  const double w3 = box.distances[box.q3_index] + reach;

  // extremes: the sample members reaching closest to each cutoff from inside,
  // searched among non-central members on that side
  std::vector<bool> is_central(nsamp, false);
  for (std::size_t idx : box.central) is_central[idx] = true;
  double e1d = -1.0, e3d = -1.0;
  for (std::size_t i = 0; i < nsamp; ++i) {
    if (is_central[i] || box.distances[i] <= 0.0) continue;
    const double s1 = inner(dirs[i], dirs[box.q1_index]);
    const double s3 = inner(dirs[i], dirs[box.q3_index]);
    if (s1 >= s3) {
      if (box.distances[i] <= w1 && box.distances[i] > e1d) {
        e1d = box.distances[i];
        box.extreme1 = i;
      }
    } else {
      if (box.distances[i] <= w3 && box.distances[i] > e3d) {
        e3d = box.distances[i];
        box.extreme3 = i;
      }
    }
  }
  const double side1 = box.extreme1 ? e1d : w1;  // whisker distance stands in
  const double side3 = box.extreme3 ? e3d : w3;
  box.threshold = cfg.conservative ? std::min(side1, side3) : std::max(side1, side3);
  if (box.extreme1 && e1d > box.threshold) box.extreme1.reset();
  if (box.extreme3 && e3d > box.threshold) box.extreme3.reset();
  return box;
}

inline std::vector<bool> flags_from(const LinearBoxplot& box) {
  std::vector<bool> f(box.distances.size(), false);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = box.distances[i] > box.threshold;
  return f;
}

}  // namespace detail

/// Amplitude-space boxplot descriptors.
struct FunctionBoxplot {
  std::vector<double> median, q1, q3, whisker1, whisker3;
  std::optional<std::size_t> q1_index, q3_index, extreme1, extreme3;
  std::vector<double> distances;
  double iqr = 0.0;
  double lambda = 0.5;
  double whisker_factor = 1.5;
  double threshold = std::numeric_limits<double>::infinity();
  bool conservative = false;
  bool degenerate = false;
};

inline FunctionBoxplot amplitude_boxplot(const AlignedSample& aligned,
                                         const BoxplotConfig& cfg = {}) {
  std::vector<std::vector<double>> points;
  points.reserve(aligned.aligned_srsfs.size());
  for (const Srsf& q : aligned.aligned_srsfs) points.push_back(q.values());
  detail::LinearBoxplot box =
      detail::build_linear_boxplot(points, aligned.median_srsf.values(), cfg);

  FunctionBoxplot out;
  out.median = aligned.median_srsf.values();
  out.distances = box.distances;
  out.lambda = cfg.lambda;
  out.whisker_factor = cfg.whisker_factor;
  out.conservative = cfg.conservative;
  out.degenerate = box.degenerate;
  out.threshold = box.threshold;
  out.iqr = box.iqr;
  if (!box.degenerate) {
    out.q1 = points[box.q1_index];
    out.q3 = points[box.q3_index];
    out.q1_index = box.q1_index;
    out.q3_index = box.q3_index;
    out.whisker1 = std::move(box.whisker1);
    out.whisker3 = std::move(box.whisker3);
    out.extreme1 = box.extreme1;
    out.extreme3 = box.extreme3;
  } else {
    out.q1 = out.q3 = out.whisker1 = out.whisker3 = out.median;
  }
  return out;
}

inline std::vector<bool> classify_amplitude(const AlignedSample& aligned,
                                            const FunctionBoxplot& box) {
  std::vector<bool> f(aligned.aligned_srsfs.size(), false);
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<double> diff(box.median.size());
    for (std::size_t j = 0; j < diff.size(); ++j)
      diff[j] = aligned.aligned_srsfs[i][j] - box.median[j];
    f[i] = norm2(diff) > box.threshold;
  }
  return f;
}

/// Phase-space boxplot: constructed in the tangent space at the phase median
/// and mapped back through the exponential map. Whisker descriptors may
/// leave the positive orthant; they are then marked non-invertible.
struct PhaseBoxplot {
  std::vector<double> median_srt, q1_srt, q3_srt, whisker1_srt, whisker3_srt;
  std::vector<double> median_warp, q1_warp, q3_warp;
  std::optional<std::vector<double>> whisker1_warp, whisker3_warp;
  bool whisker1_invertible = true, whisker3_invertible = true;
  std::optional<std::size_t> q1_index, q3_index, extreme1, extreme3;
  std::vector<double> distances;
  double iqr = 0.0;
  double lambda = 0.5;
  double whisker_factor = 1.5;
  double threshold = std::numeric_limits<double>::infinity();
  bool conservative = false;
  bool degenerate = false;
};

inline PhaseBoxplot phase_boxplot(const AlignedSample& aligned, const BoxplotConfig& cfg = {}) {
  const std::size_t nsamp = aligned.warpings.size();
  if (nsamp < 4) throw invalid_input("phase_boxplot: need at least 4 samples");
  const std::size_t n = aligned.warpings.front().grid_size();

  PhaseMedianResult med = karcher_median_phase(aligned.warpings);
  std::vector<SrtPoint> psi;
  psi.reserve(nsamp);
  for (const Warping& g : aligned.warpings) psi.push_back(to_srt(g));
  for (std::size_t i = 0; i < nsamp; ++i) {
    const double d = sphere_distance(psi[i], med.median);
    if (d >= std::numbers::pi / 2.0)
      throw invalid_input("phase_boxplot: warp " + std::to_string(i) +
                          " lies too far from the phase median");
  }

  std::vector<std::vector<double>> tangents(nsamp);
  for (std::size_t i = 0; i < nsamp; ++i) tangents[i] = inv_exp_map(med.median, psi[i]).values();
  const std::vector<double> origin(n, 0.0);
  detail::LinearBoxplot box = detail::build_linear_boxplot(tangents, origin, cfg);

  PhaseBoxplot out;
  out.median_srt = med.median.values();
  out.median_warp = from_srt(med.median).values();
  out.distances = box.distances;
  out.lambda = cfg.lambda;
  out.whisker_factor = cfg.whisker_factor;
  out.conservative = cfg.conservative;
  out.degenerate = box.degenerate;
  out.threshold = box.threshold;
  out.iqr = box.iqr;
  if (box.degenerate) {
    out.q1_srt = out.q3_srt = out.whisker1_srt = out.whisker3_srt = out.median_srt;
    out.q1_warp = out.q3_warp = out.median_warp;
    return out;
  }
  out.q1_index = box.q1_index;
  out.q3_index = box.q3_index;
  out.extreme1 = box.extreme1;
  out.extreme3 = box.extreme3;

  auto back_to_sphere = [&](const std::vector<double>& v) {
    return exp_map(med.median, make_tangent(med.median, v));
  };
  // quartiles are sample warps; only roundoff can push them off the orthant
  const SrtPoint q1p = clamp_to_orthant(back_to_sphere(tangents[box.q1_index]));
  const SrtPoint q3p = clamp_to_orthant(back_to_sphere(tangents[box.q3_index]));
  const SrtPoint w1p = back_to_sphere(box.whisker1);
  const SrtPoint w3p = back_to_sphere(box.whisker3);
  out.q1_srt = q1p.values();
  out.q3_srt = q3p.values();
  out.whisker1_srt = w1p.values();
  out.whisker3_srt = w3p.values();
  out.q1_warp = from_srt(q1p).values();
  out.q3_warp = from_srt(q3p).values();
  auto invertible = [](const SrtPoint& p) {
    double lo = 0.0;
    for (double x : p.values()) lo = std::min(lo, x);
    return lo >= -1e-9;
  };
  out.whisker1_invertible = invertible(w1p);
  out.whisker3_invertible = invertible(w3p);
  if (out.whisker1_invertible) out.whisker1_warp = from_srt(clamp_to_orthant(w1p)).values();
  if (out.whisker3_invertible) out.whisker3_warp = from_srt(clamp_to_orthant(w3p)).values();
  return out;
}

inline std::vector<bool> classify_phase(const AlignedSample& aligned, const PhaseBoxplot& box) {
  const SrtPoint center{std::vector<double>(box.median_srt)};
  std::vector<bool> f(aligned.warpings.size(), false);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = sphere_distance(to_srt(aligned.warpings[i]), center) > box.threshold;
  return f;
}

enum class TranslationStatistic { mean, f0 };

/// Classical Tukey boxplot of the per-sample translation scalars.
struct TranslationBoxplot {
  std::vector<double> values;
  double median = 0.0, q1 = 0.0, q3 = 0.0, iqr = 0.0;
  double lo = 0.0, hi = 0.0;  ///< fences at quartile -/+ whisker_factor * IQR
  double whisker_factor = 1.5;
};

inline TranslationBoxplot translation_boxplot(const std::vector<SampledFunction>& sample,
                                              double whisker_factor = 1.5,
                                              TranslationStatistic stat = TranslationStatistic::mean) {
  if (sample.size() < 4) throw invalid_input("translation_boxplot: need at least 4 samples");
  TranslationBoxplot box;
  box.whisker_factor = whisker_factor;
  box.values.reserve(sample.size());
  for (const SampledFunction& f : sample)
    box.values.push_back(stat == TranslationStatistic::mean ? f.mean() : f[0]);
  box.median = median_of(box.values);
  box.q1 = quantile(box.values, 0.25);
  box.q3 = quantile(box.values, 0.75);
  box.iqr = box.q3 - box.q1;
  box.lo = box.q1 - whisker_factor * box.iqr;
  box.hi = box.q3 + whisker_factor * box.iqr;
  return box;
}

inline std::vector<bool> classify_translation(const TranslationBoxplot& box) {
  std::vector<bool> f(box.values.size(), false);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = box.values[i] < box.lo || box.values[i] > box.hi;
  return f;
}

}  // namespace ecm

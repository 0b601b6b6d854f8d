/// \file median.hpp
/// \brief Karcher medians in amplitude and phase space, and sample alignment.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "ecm/dp.hpp"
#include "ecm/parallel.hpp"
#include "ecm/sphere.hpp"
#include "ecm/srsf.hpp"
#include "ecm/types.hpp"

namespace ecm {

struct MedianOptions {
  double step = 0.3;          ///< first candidate step toward the pointwise median
  double tol = 1e-5;          ///< relative objective decrease for convergence
  int max_iter = 30;
  int backtracks = 5;         ///< step halvings before giving up on an iteration
  int init_grid = 17;         ///< coarsened grid for the pairwise initializer
  DpOptions dp;
};

struct AmplitudeMedianResult {
  Srsf median;
  std::vector<double> objective_history;  ///< accepted objectives, non-increasing
  bool converged = true;
};

struct PhaseMedianResult {
  SrtPoint median;
  std::vector<double> objective_history;
  bool converged = true;
};

namespace detail {

inline void check_common_grid(std::size_t n, std::size_t other, const char* what) {
  if (n != other) throw invalid_input(std::string(what) + ": grids must match");
}

/// Index of the sample with minimal summed pairwise amplitude distance.
/// Small samples are swept exactly on the full grid; large samples use a
/// coarsened grid and the near-symmetry of the distance to halve the work.
inline std::size_t min_pairwise_da_index(const std::vector<Srsf>& sample,
                                         const MedianOptions& opts) {
  const std::size_t nsamp = sample.size();
  std::vector<double> sums(nsamp, 0.0);
  if (nsamp <= 32) {
    std::vector<double> d(nsamp * nsamp, 0.0);
    parallel_for(nsamp, [&](std::size_t i) {
      for (std::size_t j = 0; j < nsamp; ++j) {
        if (j != i) d[i * nsamp + j] = amplitude_distance(sample[i], sample[j], opts.dp).distance;
      }
    });
    for (std::size_t i = 0; i < nsamp; ++i)
      for (std::size_t j = 0; j < nsamp; ++j) sums[i] += d[i * nsamp + j];
  } else {
    const std::size_t coarse = std::min<std::size_t>(sample.front().grid_size(),
                                                     static_cast<std::size_t>(opts.init_grid));
    std::vector<Srsf> low;
    low.reserve(nsamp);
    for (const Srsf& q : sample) low.emplace_back(resample(q.values(), coarse));
    DpOptions cheap = lattice_only(opts.dp);
    cheap.stencil_max = 5;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < nsamp; ++i)
      for (std::size_t j = i + 1; j < nsamp; ++j) pairs.emplace_back(i, j);
    std::vector<double> d(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t p) {
      d[p] = amplitude_distance(low[pairs[p].first], low[pairs[p].second], cheap).distance;
    });
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      sums[pairs[p].first] += d[p];
      sums[pairs[p].second] += d[p];
    }
  }
  return static_cast<std::size_t>(std::min_element(sums.begin(), sums.end()) - sums.begin());
}

/// One alignment pass of the whole sample toward a candidate median.
inline double align_pass(const std::vector<Srsf>& sample, const Srsf& med, const DpOptions& dp,
                         std::vector<Srsf>& aligned, std::vector<Warping>& warps) {
  const std::size_t nsamp = sample.size();
  std::vector<double> dist(nsamp);
  aligned.assign(nsamp, med);
  warps.assign(nsamp, Warping::identity(med.grid_size()));
  parallel_for(nsamp, [&](std::size_t i) {
    AlignmentResult r = amplitude_distance(med, sample[i], dp);
    aligned[i] = group_action(sample[i], r.warp);
    warps[i] = std::move(r.warp);
    dist[i] = r.distance;
  });
  return std::accumulate(dist.begin(), dist.end(), 0.0);
}

}  // namespace detail

/// Karcher median of SRSFs under the amplitude distance.
///
/// Starts from the sample member with minimal summed pairwise D_a and steps
/// toward the pointwise median of the aligned SRSFs; a step is accepted only
/// if the objective does not increase, so the recorded history is monotone.
inline AmplitudeMedianResult karcher_median_amplitude(const std::vector<Srsf>& sample,
                                                      const MedianOptions& opts = {}) {
  if (sample.size() < 2) throw invalid_input("karcher_median_amplitude: need at least 2 SRSFs");
  const std::size_t n = sample.front().grid_size();
  for (const Srsf& q : sample) detail::check_common_grid(n, q.grid_size(), "karcher_median_amplitude");

  AmplitudeMedianResult result{sample[detail::min_pairwise_da_index(sample, opts)], {}, true};
  std::vector<Srsf> aligned;
  std::vector<Warping> warps;
  double objective = detail::align_pass(sample, result.median, opts.dp, aligned, warps);
  result.objective_history.push_back(objective);

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    std::vector<std::vector<double>> rows;
    rows.reserve(aligned.size());
    for (const Srsf& q : aligned) rows.push_back(q.values());
    const std::vector<double> target = pointwise_median(rows);

    double step = opts.step;
    bool accepted = false;
    for (int bt = 0; bt <= opts.backtracks; ++bt) {
      std::vector<double> cand(n);
      for (std::size_t i = 0; i < n; ++i)
        cand[i] = result.median[i] + step * (target[i] - result.median[i]);
      Srsf candidate(std::move(cand));
      std::vector<Srsf> cand_aligned;
      std::vector<Warping> cand_warps;
      const double cand_obj =
          detail::align_pass(sample, candidate, opts.dp, cand_aligned, cand_warps);
      if (cand_obj <= objective) {
        const double drop = (objective > 0.0) ? (objective - cand_obj) / objective : 0.0;
        result.median = std::move(candidate);
        aligned = std::move(cand_aligned);
        warps = std::move(cand_warps);
        objective = cand_obj;
        result.objective_history.push_back(objective);
        accepted = true;
        if (drop < opts.tol) return result;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return result;  // local minimum under this step rule
  }
  result.converged = false;  // ran out of iterations without meeting tol
  return result;
}

/// Karcher median of warps on the sphere of SRTs, using D_p.
inline PhaseMedianResult karcher_median_phase(const std::vector<Warping>& warps,
                                              const MedianOptions& opts = {}) {
  if (warps.empty()) throw invalid_input("karcher_median_phase: empty sample");
  const std::size_t n = warps.front().grid_size();
  for (const Warping& g : warps) detail::check_common_grid(n, g.grid_size(), "karcher_median_phase");

  std::vector<SrtPoint> psi;
  psi.reserve(warps.size());
  for (const Warping& g : warps) psi.push_back(to_srt(g));
  if (psi.size() == 1) return PhaseMedianResult{psi.front(), {0.0}, true};

  auto objective_at = [&](const SrtPoint& c) {
    double s = 0.0;
    for (const SrtPoint& p : psi) s += sphere_distance(p, c);
    return s;
  };

  // initialize at the member with minimal summed D_p
  std::size_t best = 0;
  double best_obj = objective_at(psi[0]);
  for (std::size_t i = 1; i < psi.size(); ++i) {
    const double o = objective_at(psi[i]);
    if (o < best_obj) {
      best_obj = o;
      best = i;
    }
  }
  PhaseMedianResult result{psi[best], {best_obj}, true};
  double objective = best_obj;

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    std::vector<std::vector<double>> rows;
    rows.reserve(psi.size());
    for (const SrtPoint& p : psi) rows.push_back(inv_exp_map(result.median, p).values());
    std::vector<double> target = pointwise_median(rows);

    double step = opts.step;
    bool accepted = false;
    for (int bt = 0; bt <= opts.backtracks; ++bt) {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = step * target[i];
      const SrtPoint candidate = clamp_to_orthant(
          exp_map(result.median, make_tangent(result.median, std::move(v))));
      const double cand_obj = objective_at(candidate);
      if (cand_obj <= objective) {
        const double drop = (objective > 0.0) ? (objective - cand_obj) / objective : 0.0;
        result.median = candidate;
        objective = cand_obj;
        result.objective_history.push_back(objective);
        accepted = true;
        if (drop < opts.tol) return result;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return result;
  }
  result.converged = false;
  return result;
}

/// A sample aligned to its amplitude median.
struct AlignedSample {
  std::vector<SampledFunction> aligned_functions;  ///< f_i o gamma_i
  std::vector<Srsf> aligned_srsfs;                 ///< (q_i, gamma_i)
  std::vector<double> distances;                   ///< D_a to the median
  std::vector<Warping> warpings;                   ///< optimal warps
  Srsf median_srsf;
  SampledFunction median_function;
  bool converged = true;
};

/// Aligns a sample to its Karcher median with orbit centering.
///
/// The median orbit representative is chosen so that the tangent-space mean
/// of the optimal warps is the identity: the median is acted on by the
/// inverse of the mean warp and the sample re-aligned.
inline AlignedSample align_sample(const std::vector<SampledFunction>& sample,
                                  const MedianOptions& opts = {}) {
  if (sample.size() < 2) throw invalid_input("align_sample: need at least 2 functions");
  const std::size_t n = sample.front().grid_size();
  for (const SampledFunction& f : sample) detail::check_common_grid(n, f.grid_size(), "align_sample");

  std::vector<Srsf> qs;
  qs.reserve(sample.size());
  for (const SampledFunction& f : sample) qs.push_back(to_srsf(f));

  AmplitudeMedianResult med = karcher_median_amplitude(qs, opts);

  std::vector<Srsf> aligned;
  std::vector<Warping> warps;
  detail::align_pass(qs, med.median, opts.dp, aligned, warps);

  // orbit centering: act by the inverse of the mean warp, then re-align
  const Warping mean_warp = srt_tangent_mean(warps);
  const Srsf centered = group_action(med.median, mean_warp.inverse());
  detail::align_pass(qs, centered, opts.dp, aligned, warps);

  AlignedSample out{{}, std::move(aligned), {}, std::move(warps), centered,
                    SampledFunction(std::vector<double>(n, 0.0)), med.converged};
  out.distances.resize(sample.size());
  out.aligned_functions.reserve(sample.size());
  std::vector<double> fn_means(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    std::vector<double> diff(n);
    for (std::size_t j = 0; j < n; ++j) diff[j] = out.aligned_srsfs[i][j] - centered[j];
    out.distances[i] = norm2(diff);
    out.aligned_functions.push_back(apply_warp(sample[i], out.warpings[i]));
    fn_means[i] = out.aligned_functions.back().mean();
  }
  // pick the integration constant so the median function sits at the
  // median level of the aligned sample
  SampledFunction raw = from_srsf(centered, 0.0);
  const double shift = median_of(fn_means) - raw.mean();
  std::vector<double> shifted = raw.values();
  for (double& x : shifted) x += shift;
  out.median_function = SampledFunction(std::move(shifted));
  return out;
}

}  // namespace ecm

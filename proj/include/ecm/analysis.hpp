/// \file analysis.hpp
/// \brief Full decomposition pipeline: translation, amplitude, and phase
/// verdicts for one functional stream, and the per-coordinate contour
/// analysis with an OR-merged product verdict.

#pragma once

#include <cstddef>
#include <vector>

#include "ecm/boxplot.hpp"
#include "ecm/contour.hpp"
#include "ecm/median.hpp"

namespace ecm {

struct ReportConfig {
  BoxplotConfig box;
  TranslationStatistic translation_statistic = TranslationStatistic::mean;
  MedianOptions median;
};

struct SampleVerdict {
  double translation = 0.0;
  double amplitude_distance = 0.0;
  double phase_distance = 0.0;
  bool translation_outlier = false;
  bool amplitude_outlier = false;
  bool phase_outlier = false;
  bool overall() const { return translation_outlier || amplitude_outlier || phase_outlier; }
};

struct OutlierReport {
  std::size_t n_samples = 0;
  std::vector<SampleVerdict> verdicts;
  double translation_lo = 0.0, translation_hi = 0.0;
  double amplitude_threshold = 0.0;
  double phase_threshold = 0.0;
  bool converged = true;
};

/// One coordinate stream, fully decomposed.
struct StreamAnalysis {
  OutlierReport report;
  TranslationBoxplot translation;
  FunctionBoxplot amplitude;
  PhaseBoxplot phase;
  AlignedSample aligned;
};

/// Decomposes a sample of functions into translation, amplitude, and phase,
/// builds the three boxplots, and classifies every sample in each component.
/// Translation is removed (per the configured statistic) before alignment.
inline StreamAnalysis full_report(const std::vector<SampledFunction>& sample,
                                  const ReportConfig& cfg = {}) {
  if (sample.size() < 4) throw invalid_input("full_report: need at least 4 samples");

  TranslationBoxplot trans =
      translation_boxplot(sample, cfg.box.whisker_factor, cfg.translation_statistic);
  std::vector<SampledFunction> centered;
  centered.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    std::vector<double> v = sample[i].values();
    for (double& x : v) x -= trans.values[i];
    centered.emplace_back(std::move(v));
  }

  AlignedSample aligned = align_sample(centered, cfg.median);
  FunctionBoxplot amp = amplitude_boxplot(aligned, cfg.box);
  PhaseBoxplot pha = phase_boxplot(aligned, cfg.box);

  const std::vector<bool> tf = classify_translation(trans);
  const std::vector<bool> af = classify_amplitude(aligned, amp);
  const std::vector<bool> pf = classify_phase(aligned, pha);

  StreamAnalysis out{{}, std::move(trans), std::move(amp), std::move(pha), std::move(aligned)};
  out.report.n_samples = sample.size();
  out.report.translation_lo = out.translation.lo;
  out.report.translation_hi = out.translation.hi;
  out.report.amplitude_threshold = out.amplitude.threshold;
  out.report.phase_threshold = out.phase.threshold;
  out.report.converged = out.aligned.converged;
  out.report.verdicts.resize(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    SampleVerdict& v = out.report.verdicts[i];
    v.translation = out.translation.values[i];
    v.amplitude_distance = out.amplitude.distances[i];
    v.phase_distance = out.phase.distances[i];
    v.translation_outlier = tf[i];
    v.amplitude_outlier = af[i];
    v.phase_outlier = pf[i];
  }
  return out;
}

/// Per-coordinate contour analysis: x(t) and y(t) are analyzed as independent
/// streams and a sample is a product outlier if flagged in either one.
struct ContourAnalysis {
  StreamAnalysis x;
  StreamAnalysis y;
  std::vector<bool> merged_flags;
};

inline ContourAnalysis analyze_contours(const std::vector<ContourLayer>& contours,
                                        const ReportConfig& cfg = {}) {
  if (contours.size() < 4) throw invalid_input("analyze_contours: need at least 4 contours");
  const std::size_t n = contours.front().x.grid_size();
  for (const ContourLayer& c : contours) {
    if (c.x.grid_size() != n || c.y.grid_size() != n)
      throw grid_mismatch("analyze_contours: contour grids do not match");
  }
  std::vector<SampledFunction> xs, ys;
  xs.reserve(contours.size());
  ys.reserve(contours.size());
  for (const ContourLayer& c : contours) {
    xs.push_back(c.x);
    ys.push_back(c.y);
  }
  ContourAnalysis out{full_report(xs, cfg), full_report(ys, cfg), {}};
  out.merged_flags.resize(contours.size());
  for (std::size_t i = 0; i < contours.size(); ++i)
    out.merged_flags[i] = out.x.report.verdicts[i].overall() || out.y.report.verdicts[i].overall();
  return out;
}

}  // namespace ecm

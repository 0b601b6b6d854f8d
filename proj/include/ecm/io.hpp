/// \file io.hpp
/// \brief File formats: contour CSV, model and report JSON, manifests.
///
/// Doubles are written with shortest round-trip formatting (to_chars), so a
/// file read back yields bitwise-identical values. All writes go through a
/// temp-file rename.

#pragma once

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ecm/analysis.hpp"
#include "ecm/contour.hpp"
#include "ecm/errors.hpp"
#include "ecm/fourier.hpp"
#include "ecm/simulate.hpp"
#include "ecm/version.hpp"

namespace ecm {

inline std::string format_double(double x) {
  char buf[32];
  const auto [end, err] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

inline double parse_double(const std::string& s) {
  double x = 0.0;
  const auto [ptr, err] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (err != std::errc{}) throw invalid_input("cannot parse number: " + s);
  return x;
}

/// Write-temp-then-rename so partially written files never appear.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw missing_file("cannot write file: " + path.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw missing_file("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// FNV-1a 64-bit digest, hex-encoded; used for manifest entries.
inline std::string fnv1a_digest(const std::string& data) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// ---------------------------------------------------------------- contours

inline std::string contour_to_csv(const ContourLayer& c) {
  std::string out = "# z=" + format_double(c.z) + "\nt,x,y\n";
  const double h = grid_step(c.grid_size());
  for (std::size_t j = 0; j < c.grid_size(); ++j) {
    const double t = (j + 1 == c.grid_size()) ? 1.0 : static_cast<double>(j) * h;
    out += format_double(t);
    out += ',';
    out += format_double(c.x[j]);
    out += ',';
    out += format_double(c.y[j]);
    out += '\n';
  }
  return out;
}

inline void write_contour_csv(const std::filesystem::path& path, const ContourLayer& c) {
  atomic_write(path, contour_to_csv(c));
}

inline ContourLayer read_contour_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  double z = 0.0;
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# z=", 0) == 0) {
      z = parse_double(line.substr(4));
      continue;
    }
    if (line.rfind("t,", 0) == 0) continue;
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw invalid_input("malformed contour row in " + path.string() + ": " + line);
    xs.push_back(parse_double(line.substr(c1 + 1, c2 - c1 - 1)));
    ys.push_back(parse_double(line.substr(c2 + 1)));
  }
  if (xs.size() < 3) throw invalid_input("contour file too short: " + path.string());
  const bool closed = std::fabs(xs.back() - xs.front()) <= 1e-9 &&
                      std::fabs(ys.back() - ys.front()) <= 1e-9;
  return ContourLayer{z, SampledFunction(std::move(xs)), SampledFunction(std::move(ys)), closed};
}

// ---------------------------------------------------------------- models

inline nlohmann::json model_to_json(const FourierContourModel& m) {
  return nlohmann::json{{"K", m.harmonics},
                        {"x", {{"a0", m.a0}, {"a", m.a}, {"b", m.b}}},
                        {"y", {{"c0", m.c0}, {"c", m.c}, {"d", m.d}}}};
}

inline FourierContourModel model_from_json(const nlohmann::json& j) {
  FourierContourModel m;
  m.harmonics = j.at("K").get<int>();
  m.a0 = j.at("x").at("a0").get<double>();
  m.a = j.at("x").at("a").get<std::vector<double>>();
  m.b = j.at("x").at("b").get<std::vector<double>>();
  m.c0 = j.at("y").at("c0").get<double>();
  m.c = j.at("y").at("c").get<std::vector<double>>();
  m.d = j.at("y").at("d").get<std::vector<double>>();
  if (m.a.size() != static_cast<std::size_t>(m.harmonics) || m.b.size() != m.a.size() ||
      m.c.size() != m.a.size() || m.d.size() != m.a.size())
    throw invalid_input("model file: coefficient arrays must have length K");
  return m;
}

inline void write_model_json(const std::filesystem::path& path, const FourierContourModel& m) {
  atomic_write(path, model_to_json(m).dump(2) + "\n");
}

inline FourierContourModel read_model_json(const std::filesystem::path& path) {
  return model_from_json(nlohmann::json::parse(read_file(path)));
}

// ---------------------------------------------------------------- scenarios

inline ScenarioConfig scenario_from_json(const nlohmann::json& j) {
  ScenarioConfig cfg;
  if (j.contains("preset")) cfg = preset(j.at("preset").get<std::string>());
  if (j.contains("scenario")) {
    const std::string s = j.at("scenario").get<std::string>();
    if (s == "roughness") cfg.scenario = Scenario::roughness;
    else if (s == "amplitude") cfg.scenario = Scenario::amplitude;
    else if (s == "phase") cfg.scenario = Scenario::phase;
    else throw config_error("scenario field: expected roughness|amplitude|phase, got " + s);
  }
  if (j.contains("n_samples")) cfg.n_samples = j.at("n_samples").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("bernoulli_p")) cfg.bernoulli_p = j.at("bernoulli_p").get<double>();
  if (j.contains("shape")) {
    const std::string s = j.at("shape").get<std::string>();
    if (s == "benchmark") cfg.use_benchmark = true;
    else if (s == "fourier") cfg.use_benchmark = false;
    else throw config_error("shape field: expected benchmark|fourier, got " + s);
  }
  if (j.contains("z")) cfg.z = j.at("z").get<double>();
  if (j.contains("grid")) cfg.grid = j.at("grid").get<std::size_t>();
  if (j.contains("roughness")) {
    const auto& r = j.at("roughness");
    if (r.contains("var_x")) cfg.rough.var_x = r.at("var_x").get<double>();
    if (r.contains("var_y")) cfg.rough.var_y = r.at("var_y").get<double>();
    if (r.contains("cov_coeff")) cfg.rough.cov_coeff = r.at("cov_coeff").get<double>();
    if (r.contains("outlier_var")) cfg.rough.outlier_var = r.at("outlier_var").get<double>();
  }
  if (j.contains("amplitude")) {
    const auto& a = j.at("amplitude");
    if (a.contains("safe_lo")) cfg.amp.safe_lo = a.at("safe_lo").get<double>();
    if (a.contains("safe_hi")) cfg.amp.safe_hi = a.at("safe_hi").get<double>();
    if (a.contains("out_lo")) cfg.amp.out_lo = a.at("out_lo").get<double>();
    if (a.contains("out_hi")) cfg.amp.out_hi = a.at("out_hi").get<double>();
    if (a.contains("nuisance_alpha")) cfg.amp.nuisance_alpha = a.at("nuisance_alpha").get<double>();
    if (a.contains("sim_harmonics")) cfg.amp.sim_harmonics = a.at("sim_harmonics").get<int>();
  }
  if (j.contains("phase")) {
    const auto& p = j.at("phase");
    if (p.contains("common_lo")) cfg.phase.common_lo = p.at("common_lo").get<double>();
    if (p.contains("common_hi")) cfg.phase.common_hi = p.at("common_hi").get<double>();
    if (p.contains("alpha_lo")) cfg.phase.alpha_lo = p.at("alpha_lo").get<double>();
    if (p.contains("alpha_hi")) cfg.phase.alpha_hi = p.at("alpha_hi").get<double>();
    if (p.contains("beta_lo")) cfg.phase.beta_lo = p.at("beta_lo").get<double>();
    if (p.contains("beta_hi")) cfg.phase.beta_hi = p.at("beta_hi").get<double>();
  }
  return cfg;
}

inline nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
  const char* scen = cfg.scenario == Scenario::roughness ? "roughness"
                     : cfg.scenario == Scenario::amplitude ? "amplitude"
                                                           : "phase";
  nlohmann::json j{{"scenario", scen},
                   {"n_samples", cfg.n_samples},
                   {"seed", cfg.seed},
                   {"bernoulli_p", cfg.bernoulli_p},
                   {"shape", cfg.use_benchmark ? "benchmark" : "fourier"},
                   {"z", cfg.z},
                   {"grid", cfg.grid}};
  if (!cfg.preset_name.empty()) j["preset"] = cfg.preset_name;
  switch (cfg.scenario) {
    case Scenario::roughness:
      j["roughness"] = {{"var_x", cfg.rough.var_x},
                        {"var_y", cfg.rough.var_y},
                        {"cov_coeff", cfg.rough.cov_coeff},
                        {"outlier_var", cfg.rough.outlier_var}};
      break;
    case Scenario::amplitude:
      j["amplitude"] = {{"safe_lo", cfg.amp.safe_lo},
                        {"safe_hi", cfg.amp.safe_hi},
                        {"out_lo", cfg.amp.out_lo},
                        {"out_hi", cfg.amp.out_hi},
                        {"nuisance_alpha", cfg.amp.nuisance_alpha},
                        {"sim_harmonics", cfg.amp.sim_harmonics}};
      break;
    case Scenario::phase:
      j["phase"] = {{"common_lo", cfg.phase.common_lo},
                    {"common_hi", cfg.phase.common_hi},
                    {"alpha_lo", cfg.phase.alpha_lo},
                    {"alpha_hi", cfg.phase.alpha_hi},
                    {"beta_lo", cfg.phase.beta_lo},
                    {"beta_hi", cfg.phase.beta_hi}};
      break;
  }
  return j;
}

// ---------------------------------------------------------------- reports

namespace detail {

inline std::vector<double> downsample_display(const std::vector<double>& v, std::size_t cap = 129) {
  if (v.size() <= cap) return v;
  return resample(v, cap);
}

inline nlohmann::json stream_to_json(const StreamAnalysis& s) {
  nlohmann::json j;
  j["translation"] = {{"values", s.translation.values}, {"median", s.translation.median},
                      {"q1", s.translation.q1},         {"q3", s.translation.q3},
                      {"iqr", s.translation.iqr},       {"lo", s.translation.lo},
                      {"hi", s.translation.hi}};
  nlohmann::json amp{{"distances", s.amplitude.distances},
                     {"threshold", s.amplitude.threshold},
                     {"iqr", s.amplitude.iqr},
                     {"degenerate", s.amplitude.degenerate},
                     {"median", downsample_display(s.amplitude.median)},
                     {"q1", downsample_display(s.amplitude.q1)},
                     {"q3", downsample_display(s.amplitude.q3)},
                     {"whisker1", downsample_display(s.amplitude.whisker1)},
                     {"whisker3", downsample_display(s.amplitude.whisker3)}};
  nlohmann::json pha{{"distances", s.phase.distances},
                     {"threshold", s.phase.threshold},
                     {"iqr", s.phase.iqr},
                     {"degenerate", s.phase.degenerate},
                     {"median_warp", downsample_display(s.phase.median_warp)},
                     {"q1_warp", downsample_display(s.phase.q1_warp)},
                     {"q3_warp", downsample_display(s.phase.q3_warp)},
                     {"whisker1_invertible", s.phase.whisker1_invertible},
                     {"whisker3_invertible", s.phase.whisker3_invertible}};
  if (s.phase.whisker1_warp) pha["whisker1_warp"] = downsample_display(*s.phase.whisker1_warp);
  if (s.phase.whisker3_warp) pha["whisker3_warp"] = downsample_display(*s.phase.whisker3_warp);

  nlohmann::json verdicts = nlohmann::json::array();
  nlohmann::json flagged_srsfs = nlohmann::json::array();
  nlohmann::json flagged_warps = nlohmann::json::array();
  for (std::size_t i = 0; i < s.report.verdicts.size(); ++i) {
    const SampleVerdict& v = s.report.verdicts[i];
    verdicts.push_back({{"translation", v.translation},
                        {"amplitude_distance", v.amplitude_distance},
                        {"phase_distance", v.phase_distance},
                        {"translation_outlier", v.translation_outlier},
                        {"amplitude_outlier", v.amplitude_outlier},
                        {"phase_outlier", v.phase_outlier}});
    if (v.amplitude_outlier)
      flagged_srsfs.push_back(
          {{"index", i}, {"curve", downsample_display(s.aligned.aligned_srsfs[i].values())}});
    if (v.phase_outlier)
      flagged_warps.push_back(
          {{"index", i}, {"curve", downsample_display(s.aligned.warpings[i].values())}});
  }
  amp["flagged"] = std::move(flagged_srsfs);
  pha["flagged"] = std::move(flagged_warps);
  j["amplitude"] = std::move(amp);
  j["phase"] = std::move(pha);
  j["verdicts"] = std::move(verdicts);

  nlohmann::json curves = nlohmann::json::array();
  for (const SampledFunction& f : s.aligned.aligned_functions)
    curves.push_back(detail::downsample_display(f.values()));
  j["aligned_display"] = std::move(curves);
  j["median_display"] = downsample_display(s.aligned.median_function.values());
  j["converged"] = s.report.converged;
  return j;
}

}  // namespace detail

/// The self-contained analysis document: everything the CSV reports and the
/// SVG panels are generated from.
inline nlohmann::json report_to_json(const ContourAnalysis& analysis,
                                     const std::vector<SampledFunction>& raw_x,
                                     const std::vector<SampledFunction>& raw_y,
                                     const ReportConfig& cfg) {
  nlohmann::json j;
  j["version"] = version_string();
  j["n_samples"] = analysis.merged_flags.size();
  j["config"] = {{"lambda", cfg.box.lambda},
                 {"whisker_factor", cfg.box.whisker_factor},
                 {"conservative", cfg.box.conservative},
                 {"translation_statistic",
                  cfg.translation_statistic == TranslationStatistic::mean ? "mean" : "f0"}};
  j["merged_flags"] = analysis.merged_flags;
  j["x"] = detail::stream_to_json(analysis.x);
  j["y"] = detail::stream_to_json(analysis.y);
  nlohmann::json sx = nlohmann::json::array(), sy = nlohmann::json::array();
  for (const SampledFunction& f : raw_x) sx.push_back(detail::downsample_display(f.values()));
  for (const SampledFunction& f : raw_y) sy.push_back(detail::downsample_display(f.values()));
  j["x"]["samples_display"] = std::move(sx);
  j["y"]["samples_display"] = std::move(sy);
  return j;
}

/// Flat per-sample rows for one coordinate stream.
inline std::string report_to_csv(const OutlierReport& r) {
  std::string out =
      "index,translation,amplitude_distance,phase_distance,"
      "translation_outlier,amplitude_outlier,phase_outlier\n";
  for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
    const SampleVerdict& v = r.verdicts[i];
    out += std::to_string(i) + ',' + format_double(v.translation) + ',' +
           format_double(v.amplitude_distance) + ',' + format_double(v.phase_distance) + ',' +
           (v.translation_outlier ? '1' : '0') + std::string(1, ',') +
           (v.amplitude_outlier ? '1' : '0') + std::string(1, ',') +
           (v.phase_outlier ? '1' : '0') + '\n';
  }
  return out;
}

inline std::string merged_to_csv(const ContourAnalysis& a) {
  std::string out = "index,x_outlier,y_outlier,outlier\n";
  for (std::size_t i = 0; i < a.merged_flags.size(); ++i) {
    out += std::to_string(i) + ',' + (a.x.report.verdicts[i].overall() ? '1' : '0') +
           std::string(1, ',') + (a.y.report.verdicts[i].overall() ? '1' : '0') +
           std::string(1, ',') + (a.merged_flags[i] ? '1' : '0') + '\n';
  }
  return out;
}

// ---------------------------------------------------------------- manifests

class ManifestWriter {
 public:
  ManifestWriter(std::string command, std::uint64_t seed, const std::string& config_dump)
      : command_(std::move(command)), seed_(seed), config_hash_(fnv1a_digest(config_dump)) {}

  void add_input(const std::filesystem::path& path) {
    inputs_[path.filename().string()] = fnv1a_digest(read_file(path));
  }
  void add_output(const std::filesystem::path& path) {
    outputs_[path.filename().string()] = fnv1a_digest(read_file(path));
  }

  void write(const std::filesystem::path& path) const {
    nlohmann::json j{{"command", command_}, {"tool_version", version_string()},
                     {"seed", seed_},       {"config_hash", config_hash_},
                     {"inputs", inputs_},   {"outputs", outputs_},
                     {"timestamp", now_iso8601()}};
    atomic_write(path, j.dump(2) + "\n");
  }

 private:
  static std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  std::string command_;
  std::uint64_t seed_;
  std::string config_hash_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
};

}  // namespace ecm

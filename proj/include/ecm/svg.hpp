/// \file svg.hpp
/// \brief Static SVG boxplot panels generated from a report document.
///
/// Panels are pure functions of the report JSON: re-rendering the same
/// report produces byte-identical files. One panel per component and
/// coordinate; fixed palette, no styling beyond it.

#pragma once

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "ecm/errors.hpp"

namespace ecm {

namespace svg_detail {

inline std::string num(double x) {
  if (!std::isfinite(x)) x = 0.0;
  char buf[32];
  const auto [end, err] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, 2);
  return std::string(buf, end);
}

struct Frame {
  double width = 640, height = 420;
  double left = 50, right = 14, top = 26, bottom = 34;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;

  double px(double x) const {
    return left + (x - x_lo) / (x_hi - x_lo) * (width - left - right);
  }
  double py(double y) const {
    return height - bottom - (y - y_lo) / (y_hi - y_lo) * (height - top - bottom);
  }
};

class Builder {
 public:
  explicit Builder(const Frame& f) : frame_(f) {
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(f.width) +
             "\" height=\"" + num(f.height) + "\" viewBox=\"0 0 " + num(f.width) + " " +
             num(f.height) + "\">\n";
    body_ += "<rect width=\"" + num(f.width) + "\" height=\"" + num(f.height) +
             "\" fill=\"white\"/>\n";
  }

  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& color, double stroke_width, const std::string& dash = "") {
    if (xs.size() < 2) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
             num(stroke_width) + "\"";
    if (!dash.empty()) body_ += " stroke-dasharray=\"" + dash + "\"";
    body_ += " points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) body_ += ' ';
      body_ += num(frame_.px(xs[i])) + "," + num(frame_.py(ys[i]));
    }
    body_ += "\"/>\n";
  }

  void curve(const std::vector<double>& values, const std::string& color, double stroke_width,
             const std::string& dash = "") {
    std::vector<double> ts(values.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
      ts[i] = static_cast<double>(i) / static_cast<double>(ts.size() - 1);
    polyline(ts, values, color, stroke_width, dash);
  }

  void line(double x0, double y0, double x1, double y1, const std::string& color, double w) {
    body_ += "<line x1=\"" + num(frame_.px(x0)) + "\" y1=\"" + num(frame_.py(y0)) + "\" x2=\"" +
             num(frame_.px(x1)) + "\" y2=\"" + num(frame_.py(y1)) + "\" stroke=\"" + color +
             "\" stroke-width=\"" + num(w) + "\"/>\n";
  }

  void dot(double x, double y, const std::string& color) {
    body_ += "<circle cx=\"" + num(frame_.px(x)) + "\" cy=\"" + num(frame_.py(y)) +
             "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
  }

  void text(double px, double py, const std::string& s, const std::string& anchor = "start") {
    body_ += "<text x=\"" + num(px) + "\" y=\"" + num(py) +
             "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"" + anchor + "\">" +
             s + "</text>\n";
  }

  void axes(const std::string& title) {
    const Frame& f = frame_;
    line(f.x_lo, f.y_lo, f.x_hi, f.y_lo, "#444444", 1.0);
    body_ += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.top) + "\" x2=\"" + num(f.left) +
             "\" y2=\"" + num(f.height - f.bottom) + "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    text(f.left, 16, title);
    text(f.left - 4, f.height - f.bottom + 2, num(f.y_lo), "end");
    text(f.left - 4, f.top + 8, num(f.y_hi), "end");
    text(f.left, f.height - f.bottom + 14, num(f.x_lo));
    text(f.width - f.right, f.height - f.bottom + 14, num(f.x_hi), "end");
  }

  std::string finish() { return body_ + "</svg>\n"; }

 private:
  Frame frame_;
  std::string body_;
};

inline void fit_range(const std::vector<double>& v, double& lo, double& hi) {
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
}

inline std::vector<double> values_of(const nlohmann::json& arr) {
  return arr.get<std::vector<double>>();
}

}  // namespace svg_detail

/// Original sample spaghetti plus the classical translation box.
inline std::string render_translation_panel(const nlohmann::json& stream,
                                            const std::string& coordinate) {
  using namespace svg_detail;
  const auto& tr = stream.at("translation");
  double lo = 1e300, hi = -1e300;
  std::vector<std::vector<double>> curves;
  for (const auto& c : stream.at("samples_display")) {
    curves.push_back(values_of(c));
    fit_range(curves.back(), lo, hi);
  }
  fit_range({tr.at("lo").get<double>(), tr.at("hi").get<double>()}, lo, hi);
  if (!(hi > lo)) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);

  Frame f;
  f.x_lo = 0.0;
  f.x_hi = 1.25;  // right margin hosts the box glyph
  f.y_lo = lo - pad;
  f.y_hi = hi + pad;
  Builder b(f);

  const auto& verdicts = stream.at("verdicts");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const bool flagged = verdicts.at(i).at("translation_outlier").get<bool>();
    std::vector<double> ts(curves[i].size());
    for (std::size_t k = 0; k < ts.size(); ++k)
      ts[k] = static_cast<double>(k) / static_cast<double>(ts.size() - 1);
    b.polyline(ts, curves[i], flagged ? "#E69F00" : "#B0C4DE", flagged ? 1.4 : 0.7);
  }
  // box glyph over [1.05, 1.2]
  const double bx0 = 1.05, bx1 = 1.2, bxm = 0.5 * (bx0 + bx1);
  const double q1 = tr.at("q1").get<double>(), q3 = tr.at("q3").get<double>();
  const double med = tr.at("median").get<double>();
  const double wlo = tr.at("lo").get<double>(), whi = tr.at("hi").get<double>();
  b.line(bx0, q1, bx1, q1, "#0072B2", 1.5);
  b.line(bx0, q3, bx1, q3, "#0072B2", 1.5);
  b.line(bx0, q1, bx0, q3, "#0072B2", 1.5);
  b.line(bx1, q1, bx1, q3, "#0072B2", 1.5);
  b.line(bx0, med, bx1, med, "#000000", 2.0);
  b.line(bxm, q3, bxm, whi, "#D55E00", 1.2);
  b.line(bxm, q1, bxm, wlo, "#D55E00", 1.2);
  for (const auto& v : tr.at("values")) {
    const double tv = v.get<double>();
    if (tv < wlo || tv > whi) b.dot(bxm, tv, "#E69F00");
  }
  b.axes(coordinate + "(t): samples and translation boxplot");
  return b.finish();
}

/// Amplitude median, quartiles, and cutoffs in SRSF space.
inline std::string render_amplitude_panel(const nlohmann::json& stream,
                                          const std::string& coordinate) {
  using namespace svg_detail;
  const auto& amp = stream.at("amplitude");
  double lo = 1e300, hi = -1e300;
  for (const char* key : {"median", "q1", "q3", "whisker1", "whisker3"})
    fit_range(values_of(amp.at(key)), lo, hi);
  for (const auto& fc : amp.at("flagged")) fit_range(values_of(fc.at("curve")), lo, hi);
  if (!(hi > lo)) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);

  Frame f;
  f.y_lo = lo - pad;
  f.y_hi = hi + pad;
  Builder b(f);
  for (const auto& fc : amp.at("flagged")) b.curve(values_of(fc.at("curve")), "#E69F00", 1.2);
  b.curve(values_of(amp.at("whisker1")), "#D55E00", 1.3, "5,3");
  b.curve(values_of(amp.at("whisker3")), "#D55E00", 1.3, "5,3");
  b.curve(values_of(amp.at("q1")), "#0072B2", 1.3);
  b.curve(values_of(amp.at("q3")), "#0072B2", 1.3);
  b.curve(values_of(amp.at("median")), "#000000", 2.0);
  b.axes(coordinate + "(t): amplitude boxplot (SRSF space)");
  return b.finish();
}

/// Phase median, quartile, and cutoff warps.
inline std::string render_phase_panel(const nlohmann::json& stream,
                                      const std::string& coordinate) {
  using namespace svg_detail;
  const auto& pha = stream.at("phase");
  Frame f;
  Builder b(f);
  b.polyline({0.0, 1.0}, {0.0, 1.0}, "#BBBBBB", 0.8, "2,3");  // identity reference
  for (const auto& fc : pha.at("flagged")) b.curve(values_of(fc.at("curve")), "#E69F00", 1.2);
  if (pha.contains("whisker1_warp")) b.curve(values_of(pha.at("whisker1_warp")), "#D55E00", 1.3, "5,3");
  if (pha.contains("whisker3_warp")) b.curve(values_of(pha.at("whisker3_warp")), "#D55E00", 1.3, "5,3");
  b.curve(values_of(pha.at("q1_warp")), "#0072B2", 1.3);
  b.curve(values_of(pha.at("q3_warp")), "#0072B2", 1.3);
  b.curve(values_of(pha.at("median_warp")), "#000000", 2.0);
  std::string title = coordinate + "(t): phase boxplot (warping functions)";
  if (!pha.at("whisker1_invertible").get<bool>() || !pha.at("whisker3_invertible").get<bool>())
    title += " [cutoff not invertible]";
  b.axes(title);
  return b.finish();
}

/// All six panels: 3 components x 2 coordinates. Returns name -> content.
inline std::vector<std::pair<std::string, std::string>> render_report_panels(
    const nlohmann::json& report) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const char* coord : {"x", "y"}) {
    const auto& stream = report.at(coord);
    out.emplace_back(std::string("boxplot_") + coord + "_translation.svg",
                     render_translation_panel(stream, coord));
    out.emplace_back(std::string("boxplot_") + coord + "_amplitude.svg",
                     render_amplitude_panel(stream, coord));
    out.emplace_back(std::string("boxplot_") + coord + "_phase.svg",
                     render_phase_panel(stream, coord));
  }
  return out;
}

}  // namespace ecm

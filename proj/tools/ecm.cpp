// Command-line front end: generate, slice, fit, simulate, analyze, render.
//
// Exit codes: 0 success, 2 missing input, 3 mesh error, 4 fit error,
// 5 grid mismatch; any other failure reports 1.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "ecm/analysis.hpp"
#include "ecm/benchmark.hpp"
#include "ecm/fourier.hpp"
#include "ecm/io.hpp"
#include "ecm/mesh.hpp"
#include "ecm/simulate.hpp"
#include "ecm/svg.hpp"
#include "ecm/version.hpp"

namespace fs = std::filesystem;

namespace {

struct AnalyzeFlags {
  double lambda = 0.5;
  double whisker_factor = 1.5;
  bool conservative = false;
  std::string translation = "mean";

  ecm::ReportConfig to_config() const {
    ecm::ReportConfig cfg;
    cfg.box.lambda = lambda;
    cfg.box.whisker_factor = whisker_factor;
    cfg.box.conservative = conservative;
    cfg.translation_statistic =
        translation == "f0" ? ecm::TranslationStatistic::f0 : ecm::TranslationStatistic::mean;
    return cfg;
  }
};

std::vector<fs::path> sample_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const std::string& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      for (const auto& entry : fs::directory_iterator(p)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("contour_", 0) == 0 && entry.path().extension() == ".csv")
          files.push_back(entry.path());
      }
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ecm::missing_file("no contour files among the inputs");
  return files;
}

int cmd_generate(const std::string& shape, const std::string& model_file, double z,
                 std::size_t grid, const std::string& out) {
  ecm::ContourLayer contour = [&]() {
    if (shape == "benchmark") return ecm::benchmark_contour(z, grid);
    if (shape == "model") {
      if (model_file.empty()) throw ecm::config_error("--shape model requires --model <file>");
      return ecm::eval_fourier(ecm::read_model_json(model_file), grid, z);
    }
    throw ecm::config_error("unknown shape: " + shape + " (expected benchmark|model)");
  }();
  ecm::write_contour_csv(out, contour);
  std::cout << "wrote " << out << " (" << grid << " rows)\n";
  return 0;
}

int cmd_slice(const std::string& mesh_file, double z, std::size_t grid, const std::string& out,
              bool all_loops) {
  const ecm::TriangleMesh mesh = ecm::read_stl(mesh_file);
  const auto loops = ecm::slice_mesh(mesh, z);
  ecm::write_contour_csv(out, ecm::extract_external_contour(loops, z, grid));
  std::cout << "wrote " << out << " (" << loops.size() << " loop(s) at z=" << z << ")\n";
  if (all_loops) {
    const fs::path base(out);
    for (std::size_t i = 0; i < loops.size(); ++i) {
      fs::path p = base;
      p.replace_extension("");
      p += "_loop" + std::to_string(i) + ".csv";
      ecm::write_contour_csv(p, ecm::resample_closed_polygon(
                                    ecm::preprocess_polyline(loops[i]), z, grid));
      std::cout << "wrote " << p.string() << "\n";
    }
  }
  return 0;
}

int cmd_fit(const std::string& contour_file, int harmonics, const std::string& shape_preset,
            const std::string& out) {
  if (!shape_preset.empty()) {
    if (shape_preset == "gear") harmonics = 81;
    else if (shape_preset == "wheel") harmonics = 149;
    else if (shape_preset == "logo") harmonics = 21;
    else if (shape_preset == "tube") harmonics = 51;
    else throw ecm::config_error("unknown fit preset: " + shape_preset);
  }
  if (harmonics < 1) throw ecm::fit_error("fit: specify --harmonics or a preset");
  const ecm::ContourLayer contour = ecm::read_contour_csv(contour_file);
  const ecm::FourierContourModel model = ecm::fit_fourier(contour, harmonics);
  ecm::write_model_json(out, model);
  std::cout << "wrote " << out << "\nrms_residual " << ecm::format_double(
      ecm::fourier_rms_residual(model, contour)) << "\n";
  return 0;
}

int cmd_simulate(const std::string& preset_name, const std::string& config_file,
                 std::uint64_t seed, int n_samples, std::size_t grid, double z,
                 const std::string& model_file, const std::string& out_dir) {
  ecm::ScenarioConfig cfg;
  if (!config_file.empty()) {
    cfg = ecm::scenario_from_json(nlohmann::json::parse(ecm::read_file(config_file)));
  } else if (!preset_name.empty()) {
    cfg = ecm::preset(preset_name);
  } else {
    throw ecm::config_error("simulate: need --preset or --config");
  }
  if (seed != static_cast<std::uint64_t>(-1)) cfg.seed = seed;
  if (n_samples > 0) cfg.n_samples = n_samples;
  if (grid > 0) cfg.grid = grid;
  if (z >= 0.0) cfg.z = z;
  if (!model_file.empty()) cfg.model = ecm::read_model_json(model_file);

  const ecm::SimulatedSample sample = ecm::simulate(cfg);

  fs::create_directories(out_dir);
  const nlohmann::json config_json = ecm::scenario_to_json(cfg);
  ecm::ManifestWriter manifest("simulate", cfg.seed, config_json.dump());
  ecm::atomic_write(fs::path(out_dir) / "config.json", config_json.dump(2) + "\n");
  manifest.add_output(fs::path(out_dir) / "config.json");

  char name[32];
  for (std::size_t i = 0; i < sample.contours.size(); ++i) {
    std::snprintf(name, sizeof(name), "contour_%03zu.csv", i);
    const fs::path p = fs::path(out_dir) / name;
    ecm::write_contour_csv(p, sample.contours[i]);
    manifest.add_output(p);
  }
  std::string gt = "index,is_outlier\n";
  for (std::size_t i = 0; i < sample.ground_truth.size(); ++i)
    gt += std::to_string(i) + ',' + (sample.ground_truth[i] ? '1' : '0') + '\n';
  ecm::atomic_write(fs::path(out_dir) / "ground_truth.csv", gt);
  manifest.add_output(fs::path(out_dir) / "ground_truth.csv");
  manifest.write(fs::path(out_dir) / "manifest.json");

  for (const std::string& w : sample.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "wrote " << sample.contours.size() << " contours to " << out_dir << "\n";
  return 0;
}

int cmd_analyze(const std::vector<std::string>& inputs, const AnalyzeFlags& flags,
                const std::string& out_dir) {
  const std::vector<fs::path> files = sample_files(inputs);
  std::vector<ecm::ContourLayer> contours;
  contours.reserve(files.size());
  for (const fs::path& p : files) contours.push_back(ecm::read_contour_csv(p));

  const std::size_t grid = contours.front().grid_size();
  for (std::size_t i = 0; i < contours.size(); ++i) {
    if (contours[i].grid_size() != grid)
      throw ecm::grid_mismatch("grid mismatch: " + files[i].string() + " has " +
                               std::to_string(contours[i].grid_size()) + " rows, " +
                               files[0].string() + " has " + std::to_string(grid));
  }

  const ecm::ReportConfig cfg = flags.to_config();
  const ecm::ContourAnalysis analysis = ecm::analyze_contours(contours, cfg);

  std::vector<ecm::SampledFunction> raw_x, raw_y;
  for (const auto& c : contours) {
    raw_x.push_back(c.x);
    raw_y.push_back(c.y);
  }
  const nlohmann::json report = ecm::report_to_json(analysis, raw_x, raw_y, cfg);

  fs::create_directories(out_dir);
  ecm::ManifestWriter manifest("analyze", 0, report.at("config").dump());
  for (const fs::path& p : files) manifest.add_input(p);

  const fs::path out(out_dir);
  ecm::atomic_write(out / "report.json", report.dump(2) + "\n");
  ecm::atomic_write(out / "report_x.csv", ecm::report_to_csv(analysis.x.report));
  ecm::atomic_write(out / "report_y.csv", ecm::report_to_csv(analysis.y.report));
  ecm::atomic_write(out / "report.csv", ecm::merged_to_csv(analysis));
  for (const auto& [name, content] : ecm::render_report_panels(report))
    ecm::atomic_write(out / name, content);
  for (const char* name : {"report.json", "report_x.csv", "report_y.csv", "report.csv"})
    manifest.add_output(out / name);
  for (const auto& [name, content] : ecm::render_report_panels(report))
    manifest.add_output(out / name);
  manifest.write(out / "manifest.json");

  std::size_t flagged = 0;
  for (bool f : analysis.merged_flags) flagged += f ? 1 : 0;
  std::cout << "analyzed " << contours.size() << " contours; " << flagged
            << " flagged as outliers; reports in " << out_dir << "\n";
  return 0;
}

int cmd_render(const std::string& report_dir, std::string out_dir) {
  const fs::path report_path = fs::path(report_dir) / "report.json";
  if (!fs::exists(report_path)) throw ecm::missing_file("missing report: " + report_path.string());
  const nlohmann::json report = nlohmann::json::parse(ecm::read_file(report_path));
  if (out_dir.empty()) out_dir = report_dir;
  fs::create_directories(out_dir);
  for (const auto& [name, content] : ecm::render_report_panels(report))
    ecm::atomic_write(fs::path(out_dir) / name, content);
  std::cout << "rendered 6 panels to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elastic contour monitoring for layerwise manufacturing data"};
  app.set_version_flag("--version", std::string("ecm ") + ecm::version_string());
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write an analytic or model-based contour");
  std::string gen_shape = "benchmark", gen_model, gen_out = "contour.csv";
  double gen_z = 1.0;
  std::size_t gen_grid = 1024;
  gen->add_option("--shape", gen_shape, "benchmark|model");
  gen->add_option("--model", gen_model, "Fourier model file for --shape model");
  gen->add_option("--z", gen_z, "layer height in [0,1] for the benchmark");
  gen->add_option("--grid", gen_grid, "number of samples");
  gen->add_option("--out", gen_out, "output contour CSV");

  // slice
  auto* slc = app.add_subcommand("slice", "slice an STL mesh into a contour");
  std::string slc_mesh, slc_out = "contour.csv";
  double slc_z = 0.0;
  std::size_t slc_grid = 1024;
  bool slc_all = false;
  slc->add_option("--mesh", slc_mesh, "STL file (binary or text)")->required();
  slc->add_option("--z", slc_z, "slice height")->required();
  slc->add_option("--grid", slc_grid, "number of samples");
  slc->add_option("--out", slc_out, "output contour CSV");
  slc->add_flag("--all-loops", slc_all, "also write every loop to a suffixed file");

  // fit
  auto* fit = app.add_subcommand("fit", "fit a Fourier model to a contour");
  std::string fit_contour, fit_preset, fit_out = "model.json";
  int fit_k = 0;
  fit->add_option("--contour", fit_contour, "input contour CSV")->required();
  fit->add_option("--harmonics,-K", fit_k, "harmonic count");
  fit->add_option("--preset", fit_preset, "gear|wheel|logo|tube harmonic presets");
  fit->add_option("--out", fit_out, "output model JSON");

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw a seeded Monte Carlo sample");
  std::string sim_preset, sim_config, sim_model, sim_out = "sample";
  std::uint64_t sim_seed = static_cast<std::uint64_t>(-1);
  int sim_n = 0;
  std::size_t sim_grid = 0;
  double sim_z = -1.0;
  sim->add_option("--preset", sim_preset, "named scenario preset");
  sim->add_option("--config", sim_config, "scenario config JSON");
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--n", sim_n, "sample count override");
  sim->add_option("--grid", sim_grid, "grid override");
  sim->add_option("--z", sim_z, "layer height override");
  sim->add_option("--model", sim_model, "Fourier model for fourier-shape scenarios");
  sim->add_option("--out", sim_out, "output directory");

  // analyze
  auto* ana = app.add_subcommand("analyze", "run the outlier analysis on contours");
  std::vector<std::string> ana_inputs;
  std::string ana_out = "analysis";
  AnalyzeFlags flags;
  ana->add_option("inputs", ana_inputs, "sample directory or contour files")->required();
  ana->add_option("--lambda", flags.lambda, "quartile objective weight");
  ana->add_option("--whisker-factor", flags.whisker_factor, "IQR multiplier for cutoffs");
  ana->add_flag("--conservative", flags.conservative, "threshold by min of extreme distances");
  ana->add_option("--translation", flags.translation, "translation statistic: mean|f0");
  ana->add_option("--out", ana_out, "output directory");

  // render
  auto* ren = app.add_subcommand("render", "regenerate SVG panels from a stored report");
  std::string ren_report, ren_out;
  ren->add_option("--report", ren_report, "directory containing report.json")->required();
  ren->add_option("--out", ren_out, "output directory (default: report directory)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(gen_shape, gen_model, gen_z, gen_grid, gen_out);
    if (slc->parsed()) return cmd_slice(slc_mesh, slc_z, slc_grid, slc_out, slc_all);
    if (fit->parsed()) return cmd_fit(fit_contour, fit_k, fit_preset, fit_out);
    if (sim->parsed())
      return cmd_simulate(sim_preset, sim_config, sim_seed, sim_n, sim_grid, sim_z, sim_model,
                          sim_out);
    if (ana->parsed()) return cmd_analyze(ana_inputs, flags, ana_out);
    if (ren->parsed()) return cmd_render(ren_report, ren_out);
  } catch (const ecm::missing_file& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ecm::mesh_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ecm::fit_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ecm::grid_mismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "ecm/benchmark.hpp"
#include "ecm/io.hpp"
#include "ecm/rng.hpp"
#include "test_util.hpp"

using namespace ecm;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  const fs::path dir = fs::temp_directory_path() / "ecm_io_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("contour CSV round-trips bitwise") {
  RngStream rng(61, 0);
  const std::size_t n = 129;
  std::vector<double> xs(n), ys(n);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    xs[j] = rng.normal(0.3, 1.7);
    ys[j] = rng.normal(-2.0, 0.4);
  }
  xs[n - 1] = xs[0];
  ys[n - 1] = ys[0];
  const ContourLayer c = make_contour(0.6180339887498949, xs, ys, true);

  const fs::path p = test_dir() / "contour.csv";
  write_contour_csv(p, c);
  const ContourLayer back = read_contour_csv(p);
  REQUIRE(back.z == c.z);
  REQUIRE(back.closed);
  REQUIRE(back.x.values() == c.x.values());
  REQUIRE(back.y.values() == c.y.values());
}

TEST_CASE("contour CSV has the documented layout") {
  const ContourLayer c = benchmark_contour(0.5, 64);
  const std::string csv = contour_to_csv(c);
  REQUIRE(csv.rfind("# z=0.5\nt,x,y\n", 0) == 0);
  std::size_t rows = 0;
  for (char ch : csv) rows += (ch == '\n') ? 1 : 0;
  REQUIRE(rows == 2 + 64);  // two header lines plus one row per grid node
}

TEST_CASE("model JSON round-trips") {
  const FourierContourModel m = fit_fourier(benchmark_contour(1.0, 256), 7);
  const fs::path p = test_dir() / "model.json";
  write_model_json(p, m);
  const FourierContourModel back = read_model_json(p);
  REQUIRE(back.harmonics == m.harmonics);
  REQUIRE(back.a0 == m.a0);
  REQUIRE(back.a == m.a);
  REQUIRE(back.b == m.b);
  REQUIRE(back.c0 == m.c0);
  REQUIRE(back.c == m.c);
  REQUIRE(back.d == m.d);
}

TEST_CASE("malformed model JSON is rejected") {
  nlohmann::json j = model_to_json(fit_fourier(benchmark_contour(1.0, 256), 3));
  j["x"]["a"] = std::vector<double>{1.0};  // length no longer K
  REQUIRE_THROWS_AS(model_from_json(j), invalid_input);
}

TEST_CASE("scenario config JSON round-trips the published presets") {
  for (const char* name : {"benchmark-sim1", "benchmark-sim2", "benchmark-sim3", "gear-sim2"}) {
    const ScenarioConfig cfg = preset(name);
    const ScenarioConfig back = scenario_from_json(scenario_to_json(cfg));
    REQUIRE(back.scenario == cfg.scenario);
    REQUIRE(back.n_samples == cfg.n_samples);
    REQUIRE(back.bernoulli_p == cfg.bernoulli_p);
    REQUIRE(back.use_benchmark == cfg.use_benchmark);
    REQUIRE(back.rough.var_x == cfg.rough.var_x);
    REQUIRE(back.amp.out_hi == cfg.amp.out_hi);
    REQUIRE(back.phase.beta_hi == cfg.phase.beta_hi);
  }
}

TEST_CASE("config field diagnostics name the offending value") {
  nlohmann::json j{{"scenario", "melting"}};
  try {
    scenario_from_json(j);
    FAIL("expected config_error");
  } catch (const config_error& e) {
    REQUIRE(std::string(e.what()).find("melting") != std::string::npos);
  }
}

TEST_CASE("format_double round-trips through parse_double") {
  RngStream rng(62, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.normal(0.0, 1.0) * std::pow(10.0, rng.uniform(-12.0, 12.0));
    REQUIRE(parse_double(format_double(x)) == x);
  }
}

TEST_CASE("fnv digest is stable and content-sensitive") {
  REQUIRE(fnv1a_digest("") == "cbf29ce484222325");
  REQUIRE(fnv1a_digest("a") != fnv1a_digest("b"));
  REQUIRE(fnv1a_digest("abc") == fnv1a_digest("abc"));
}

TEST_CASE("manifest lists inputs and outputs with digests") {
  const fs::path dir = test_dir();
  atomic_write(dir / "in.txt", "hello");
  atomic_write(dir / "out.txt", "world");
  ManifestWriter mw("testcmd", 42, "{}");
  mw.add_input(dir / "in.txt");
  mw.add_output(dir / "out.txt");
  mw.write(dir / "manifest.json");
  const nlohmann::json j = nlohmann::json::parse(read_file(dir / "manifest.json"));
  REQUIRE(j.at("command") == "testcmd");
  REQUIRE(j.at("seed") == 42);
  REQUIRE(j.at("inputs").at("in.txt") == fnv1a_digest("hello"));
  REQUIRE(j.at("outputs").at("out.txt") == fnv1a_digest("world"));
  REQUIRE(j.contains("timestamp"));
  REQUIRE(j.contains("tool_version"));
}

TEST_CASE("atomic_write leaves no temp file behind") {
  const fs::path p = test_dir() / "atomic.txt";
  atomic_write(p, "data");
  REQUIRE(read_file(p) == "data");
  REQUIRE_FALSE(fs::exists(p.string() + ".tmp"));
}

TEST_CASE("missing files raise missing_file") {
  REQUIRE_THROWS_AS(read_file(test_dir() / "absent.bin"), missing_file);
  REQUIRE_THROWS_AS(read_contour_csv(test_dir() / "absent.csv"), missing_file);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "ecm/median.hpp"
#include "ecm/rng.hpp"
#include "test_util.hpp"

using namespace ecm;
using test_util::quadratic_warp;
using test_util::random_smooth_function;
using test_util::random_smooth_warp;

TEST_CASE("median of identical SRSFs is that SRSF") {
  RngStream rng(41, 0);
  const Srsf q = to_srsf(random_smooth_function(rng, 129));
  const std::vector<Srsf> sample(5, q);
  const AmplitudeMedianResult r = karcher_median_amplitude(sample);
  REQUIRE(r.objective_history.back() <= 1e-10);
  for (std::size_t i = 0; i < q.grid_size(); ++i)
    REQUIRE(r.median[i] == Catch::Approx(q[i]).margin(1e-9));
}

TEST_CASE("median of a single warping orbit has near-zero objective") {
  const std::size_t n = 129;
  RngStream rng(42, 0);
  const Srsf q = to_srsf(random_smooth_function(rng, n));
  const std::vector<Srsf> sample{q, group_action(q, quadratic_warp(0.3, n)),
                                 group_action(q, quadratic_warp(-0.25, n))};
  const AmplitudeMedianResult r = karcher_median_amplitude(sample);
  REQUIRE(r.objective_history.back() <= 1e-2 * q.norm() * static_cast<double>(sample.size()));
}

TEST_CASE("median objective beats every sample member as candidate") {
  const std::size_t n = 257;
  RngStream rng(43, 0);
  std::vector<Srsf> sample;
  for (int i = 0; i < 5; ++i) sample.push_back(to_srsf(random_smooth_function(rng, n)));
  const AmplitudeMedianResult r = karcher_median_amplitude(sample);

  // oracle: evaluate every member as the median candidate
  double best_member = std::numeric_limits<double>::infinity();
  for (const Srsf& cand : sample) {
    double obj = 0.0;
    for (const Srsf& q : sample) obj += amplitude_distance(cand, q).distance;
    best_member = std::min(best_member, obj);
  }
  REQUIRE(r.objective_history.back() <= best_member + 1e-9);
}

TEST_CASE("median objective history is non-increasing") {
  const std::size_t n = 129;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    RngStream rng(44, seed);
    std::vector<Srsf> sample;
    for (int i = 0; i < 8; ++i) sample.push_back(to_srsf(random_smooth_function(rng, n)));
    const AmplitudeMedianResult r = karcher_median_amplitude(sample);
    for (std::size_t k = 1; k < r.objective_history.size(); ++k)
      REQUIRE(r.objective_history[k] <= r.objective_history[k - 1] + 1e-12);
  }
}

TEST_CASE("phase median") {
  const std::size_t n = 257;

  SECTION("identical warps give their own SRT") {
    const Warping g = quadratic_warp(0.4, n);
    const PhaseMedianResult r = karcher_median_phase({g, g, g});
    const SrtPoint psi = to_srt(g);
    REQUIRE(sphere_distance(r.median, psi) <= 1e-10);
  }
  SECTION("a single warp is its own median") {
    const Warping g = quadratic_warp(-0.3, n);
    const PhaseMedianResult r = karcher_median_phase({g});
    REQUIRE(sphere_distance(r.median, to_srt(g)) == 0.0);
  }
  SECTION("an inverse pair centers near the identity") {
    const Warping g = quadratic_warp(0.2, n);
    const PhaseMedianResult r = karcher_median_phase({g, g.inverse()});
    REQUIRE(sphere_distance(r.median, SrtPoint::identity(n)) <= 1e-2);

    // oracle: dense search along the connecting geodesic finds no point with
    // an objective more than numerically below the returned one
    const SrtPoint a = to_srt(g);
    const SrtPoint b = to_srt(g.inverse());
    const double returned_obj =
        sphere_distance(r.median, a) + sphere_distance(r.median, b);
    const TangentVector dir = inv_exp_map(a, b);
    double best = returned_obj;
    for (int s = 0; s <= 200; ++s) {
      std::vector<double> v = dir.values();
      for (double& x : v) x *= static_cast<double>(s) / 200.0;
      const SrtPoint pt = exp_map(a, TangentVector(v, a));
      best = std::min(best, sphere_distance(pt, a) + sphere_distance(pt, b));
    }
    REQUIRE(returned_obj <= best + 1e-6);
  }
  SECTION("objective history is non-increasing") {
    RngStream rng(45, 0);
    std::vector<Warping> warps;
    for (int i = 0; i < 10; ++i) warps.push_back(random_smooth_warp(rng, n));
    const PhaseMedianResult r = karcher_median_phase(warps);
    for (std::size_t k = 1; k < r.objective_history.size(); ++k)
      REQUIRE(r.objective_history[k] <= r.objective_history[k - 1] + 1e-12);
  }
}

TEST_CASE("align_sample on identical inputs is trivial") {
  RngStream rng(46, 0);
  const SampledFunction f = random_smooth_function(rng, 129);
  const std::vector<SampledFunction> sample(5, f);
  const AlignedSample a = align_sample(sample);
  const auto id = grid_points(129);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    REQUIRE(a.distances[i] <= 1e-9);
    for (std::size_t j = 0; j < id.size(); ++j)
      REQUIRE(a.warpings[i][j] == Catch::Approx(id[j]).margin(1e-9));
  }
}

TEST_CASE("align_sample collapses a warping orbit") {
  const std::size_t n = 129;
  RngStream rng(47, 0);
  const SampledFunction f = random_smooth_function(rng, n);
  std::vector<SampledFunction> sample;
  for (int i = 0; i < 6; ++i)
    sample.push_back(apply_warp(f, quadratic_warp(-0.5 + 0.2 * i, n)));
  const AlignedSample a = align_sample(sample);

  double span = 0.0;  // range of the aligned functions
  const double scale = std::max(1.0, f.mean());
  for (std::size_t j = 0; j < n; ++j) {
    double lo = a.aligned_functions[0][j], hi = lo;
    for (const SampledFunction& g : a.aligned_functions) {
      lo = std::min(lo, g[j]);
      hi = std::max(hi, g[j]);
    }
    span = std::max(span, hi - lo);
  }
  REQUIRE(span <= 1e-2 * scale * 10.0);  // sup-norm collapse up to DP resolution

  // orbit centering leaves the mean warp near the identity
  const auto id = grid_points(n);
  double sup = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double m = 0.0;
    for (const Warping& w : a.warpings) m += w[j];
    m /= static_cast<double>(a.warpings.size());
    sup = std::max(sup, std::fabs(m - id[j]));
  }
  REQUIRE(sup <= 5e-2);
}

TEST_CASE("align_sample is deterministic") {
  const std::size_t n = 65;
  RngStream rng(48, 0);
  std::vector<SampledFunction> sample;
  for (int i = 0; i < 6; ++i) sample.push_back(random_smooth_function(rng, n));
  const AlignedSample a = align_sample(sample);
  const AlignedSample b = align_sample(sample);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    REQUIRE(a.distances[i] == b.distances[i]);
    REQUIRE(a.aligned_srsfs[i].values() == b.aligned_srsfs[i].values());
    REQUIRE(a.warpings[i].values() == b.warpings[i].values());
  }
  REQUIRE(a.median_srsf.values() == b.median_srsf.values());
}

TEST_CASE("alignment preconditions") {
  REQUIRE_THROWS_AS(karcher_median_amplitude({to_srsf(SampledFunction(grid_points(9)))}),
                    invalid_input);
  REQUIRE_THROWS_AS(align_sample({SampledFunction(grid_points(9))}), invalid_input);
  REQUIRE_THROWS_AS(karcher_median_phase({}), invalid_input);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "ecm/rng.hpp"
#include "ecm/srsf.hpp"
#include "test_util.hpp"

using namespace ecm;
using test_util::quadratic_warp;
using test_util::random_smooth_function;
using test_util::random_smooth_warp;

TEST_CASE("linear function has unit SRSF") {
  const Srsf q = to_srsf(SampledFunction(grid_points(65)));
  for (std::size_t i = 0; i < q.grid_size(); ++i)
    REQUIRE(q[i] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("constant function has zero SRSF") {
  const Srsf q = to_srsf(SampledFunction(std::vector<double>(17, 4.2)));
  for (std::size_t i = 0; i < q.grid_size(); ++i) REQUIRE(q[i] == 0.0);
}

TEST_CASE("SRSF of t^2 matches sqrt(2t) away from zero") {
  const std::size_t n = 1025;
  const auto t = grid_points(n);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = t[i] * t[i];
  const Srsf q = to_srsf(SampledFunction(f));
  for (std::size_t i = 0; i < n; ++i) {
    if (t[i] < 0.05) continue;
    REQUIRE(q[i] == Catch::Approx(std::sqrt(2.0 * t[i])).margin(1e-2));
  }
}

TEST_CASE("from_srsf inverts the transform") {
  SECTION("zero SRSF gives a constant") {
    const SampledFunction f = from_srsf(Srsf(std::vector<double>(33, 0.0)), 5.0);
    for (std::size_t i = 0; i < f.grid_size(); ++i) REQUIRE(f[i] == 5.0);
  }
  SECTION("unit SRSF gives the identity") {
    const SampledFunction f = from_srsf(Srsf(std::vector<double>(33, 1.0)), 0.0);
    const auto t = grid_points(33);
    for (std::size_t i = 0; i < f.grid_size(); ++i)
      REQUIRE(f[i] == Catch::Approx(t[i]).margin(1e-10));
  }
  SECTION("roundtrip on sin(2 pi t)") {
    const std::size_t n = 1025;
    const auto t = grid_points(n);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::sin(2.0 * std::numbers::pi * t[i]);
    const SampledFunction back = from_srsf(to_srsf(SampledFunction(f)), f[0]);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::fabs(back[i] - f[i]));
    REQUIRE(err <= 1e-3);
  }
}

TEST_CASE("apply_warp composes by interpolation") {
  const std::size_t n = 513;
  RngStream rng(11, 0);
  const SampledFunction f = random_smooth_function(rng, n);

  SECTION("identity warp reproduces the input exactly on nodes") {
    const SampledFunction g = apply_warp(f, Warping::identity(n));
    for (std::size_t i = 0; i < n; ++i) REQUIRE(g[i] == Catch::Approx(f[i]).margin(1e-12));
  }
  SECTION("warping then inverse warping recovers the input") {
    const Warping gamma = random_smooth_warp(rng, n);
    const SampledFunction back = apply_warp(apply_warp(f, gamma), gamma.inverse());
    for (std::size_t i = 0; i < n; ++i) REQUIRE(back[i] == Catch::Approx(f[i]).margin(2e-3));
  }
  SECTION("f(t)=t warped by t^2 gives t^2") {
    const SampledFunction lin{grid_points(n)};
    const auto t = grid_points(n);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = t[i] * t[i];
    g[0] = 0.0;
    g[n - 1] = 1.0;
    const SampledFunction warped = apply_warp(lin, Warping(g));
    for (std::size_t i = 0; i < n; ++i)
      REQUIRE(warped[i] == Catch::Approx(t[i] * t[i]).margin(1e-6));
  }
}

TEST_CASE("group action properties") {
  const std::size_t n = 1025;
  RngStream rng(12, 0);
  const SampledFunction f = random_smooth_function(rng, n);
  const Srsf q = to_srsf(f);

  SECTION("identity warp acts trivially") {
    const Srsf r = group_action(q, Warping::identity(n));
    for (std::size_t i = 0; i < n; ++i) REQUIRE(r[i] == Catch::Approx(q[i]).margin(1e-10));
  }
  SECTION("the action preserves the norm") {
    const Warping gamma = random_smooth_warp(rng, n);
    REQUIRE(group_action(q, gamma).norm() == Catch::Approx(q.norm()).margin(1e-3));
  }
  SECTION("consistent with warping in function space") {
    const Warping gamma = random_smooth_warp(rng, n);
    const Srsf via_function = to_srsf(apply_warp(f, gamma));
    const Srsf via_action = group_action(q, gamma);
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = via_function[i] - via_action[i];
    REQUIRE(norm2(diff) <= 2e-2 * q.norm());
  }
}

TEST_CASE("reparameterization acts by isometry") {
  auto isometry_error = [](std::size_t n, std::uint64_t seed) {
    RngStream rng(seed, 0);
    const Srsf q1 = to_srsf(random_smooth_function(rng, n));
    const Srsf q2 = to_srsf(random_smooth_function(rng, n));
    const Warping gamma = random_smooth_warp(rng, n);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = q1[i] - q2[i];
    const double lhs = norm2(d);
    const Srsf a1 = group_action(q1, gamma);
    const Srsf a2 = group_action(q2, gamma);
    for (std::size_t i = 0; i < n; ++i) d[i] = a1[i] - a2[i];
    return std::make_pair(std::fabs(lhs - norm2(d)), lhs);
  };

  SECTION("relative error at 1025 points is below 1e-2") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto [err, lhs] = isometry_error(1025, s);
      REQUIRE(err <= 1e-2 * lhs);
    }
  }
  SECTION("error shrinks as the grid refines") {
    double acc257 = 0.0, acc513 = 0.0, acc1025 = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
      acc257 += isometry_error(257, s).first;
      acc513 += isometry_error(513, s).first;
      acc1025 += isometry_error(1025, s).first;
    }
    REQUIRE(acc513 < acc257);
    REQUIRE(acc1025 < acc513);
  }
}

TEST_CASE("SRSF is invariant to translation") {
  SECTION("bitwise on dyadic samples with an integer shift") {
    const std::size_t n = 129;
    std::vector<double> f(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = static_cast<double>(i) / 128.0;  // exact dyadic values
      g[i] = f[i] + 5.0;
    }
    const Srsf qf = to_srsf(SampledFunction(f));
    const Srsf qg = to_srsf(SampledFunction(g));
    REQUIRE(qf.values() == qg.values());
  }
  SECTION("to rounding on generic samples") {
    const std::size_t n = 257;
    RngStream rng(13, 0);
    const SampledFunction f = random_smooth_function(rng, n);
    std::vector<double> g = f.values();
    for (double& x : g) x += 0.7391;
    const Srsf qf = to_srsf(f);
    const Srsf qg = to_srsf(SampledFunction(g));
    for (std::size_t i = 0; i < n; ++i)
      REQUIRE(qg[i] == Catch::Approx(qf[i]).margin(1e-6));
  }
}

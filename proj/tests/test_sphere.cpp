#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "ecm/rng.hpp"
#include "ecm/sphere.hpp"
#include "test_util.hpp"

using namespace ecm;
using test_util::quadratic_warp;
using test_util::random_smooth_warp;

TEST_CASE("identity warp maps to the constant SRT") {
  const SrtPoint psi = to_srt(Warping::identity(65));
  for (std::size_t i = 0; i < psi.grid_size(); ++i)
    REQUIRE(psi[i] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("SRT of t^2 is sqrt(2t) after normalization") {
  const std::size_t n = 1025;
  const auto t = grid_points(n);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = t[i] * t[i];
  g[0] = 0.0;
  g[n - 1] = 1.0;
  const SrtPoint psi = to_srt(Warping(g));
  for (std::size_t i = 0; i < n; ++i) {
    if (t[i] < 0.05) continue;
    REQUIRE(psi[i] == Catch::Approx(std::sqrt(2.0 * t[i])).margin(1e-2));
  }
}

TEST_CASE("SRT roundtrip recovers smooth warps") {
  const std::size_t n = 1025;
  RngStream rng(21, 0);
  const Warping gamma = random_smooth_warp(rng, n);
  const Warping back = from_srt(to_srt(gamma));
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) sup = std::max(sup, std::fabs(back[i] - gamma[i]));
  REQUIRE(sup <= 1e-3);
}

TEST_CASE("phase distance is a bounded symmetric metric") {
  const std::size_t n = 257;
  RngStream rng(22, 0);
  const Warping id = Warping::identity(n);

  SECTION("identical warps are at distance zero") {
    const Warping g = random_smooth_warp(rng, n);
    REQUIRE(phase_distance(g, g) == Catch::Approx(0.0).margin(1e-7));
  }
  SECTION("symmetry is exact and values lie in [0, pi]") {
    for (int rep = 0; rep < 10; ++rep) {
      const Warping g1 = random_smooth_warp(rng, n);
      const Warping g2 = random_smooth_warp(rng, n);
      const double d12 = phase_distance(g1, g2);
      const double d21 = phase_distance(g2, g1);
      REQUIRE(d12 == d21);  // the inner product is evaluated identically
      REQUIRE(d12 >= 0.0);
      REQUIRE(d12 <= std::numbers::pi);
    }
  }
  SECTION("identity vs t^2 matches the quadrature oracle") {
    // oracle: D_p = arccos of the integral of sqrt(gamma1' gamma2') by
    // high-resolution midpoint quadrature
    const std::size_t m = 2'000'000;
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
      acc += std::sqrt(2.0 * t) / static_cast<double>(m);
    }
    const double oracle = std::acos(acc);
    const std::size_t n2 = 1025;
    const auto t = grid_points(n2);
    std::vector<double> g(n2);
    for (std::size_t i = 0; i < n2; ++i) g[i] = t[i] * t[i];
    g[0] = 0.0;
    g[n2 - 1] = 1.0;
    REQUIRE(phase_distance(Warping::identity(n2), Warping(g)) ==
            Catch::Approx(oracle).margin(1e-3));
  }
  SECTION("distance to the identity equals distance of the inverse") {
    const Warping g = random_smooth_warp(rng, n);
    REQUIRE(phase_distance(id, g) == Catch::Approx(phase_distance(id, g.inverse())).margin(2e-3));
  }
}

TEST_CASE("exponential map pair") {
  const std::size_t n = 257;
  RngStream rng(23, 0);

  SECTION("log of the base point is zero") {
    const SrtPoint base = to_srt(random_smooth_warp(rng, n));
    const TangentVector nu = inv_exp_map(base, base);
    REQUIRE(nu.norm() <= 1e-8);
  }
  SECTION("log-map norm equals the geodesic distance") {
    for (int rep = 0; rep < 50; ++rep) {
      const Warping g1 = random_smooth_warp(rng, n);
      const Warping g2 = random_smooth_warp(rng, n);
      const SrtPoint base = to_srt(g1);
      const SrtPoint psi = to_srt(g2);
      REQUIRE(inv_exp_map(base, psi).norm() ==
              Catch::Approx(sphere_distance(base, psi)).margin(1e-8));
    }
  }
  SECTION("exp then log round-trips tangent vectors, exp output is unit") {
    for (int rep = 0; rep < 50; ++rep) {
      const SrtPoint base = to_srt(random_smooth_warp(rng, n));
      const SrtPoint psi = to_srt(random_smooth_warp(rng, n));
      const TangentVector nu = inv_exp_map(base, psi);
      if (nu.norm() >= std::numbers::pi / 2.0) continue;
      const SrtPoint back = exp_map(base, nu);
      REQUIRE(norm2(back.values()) == Catch::Approx(1.0).margin(1e-12));
      for (std::size_t i = 0; i < n; ++i)
        REQUIRE(back[i] == Catch::Approx(psi[i]).margin(1e-8));
      const TangentVector nu2 = inv_exp_map(base, back);
      for (std::size_t i = 0; i < n; ++i)
        REQUIRE(nu2.values()[i] == Catch::Approx(nu.values()[i]).margin(1e-8));
    }
  }
  SECTION("zero tangent vector maps to the base") {
    const SrtPoint base = to_srt(random_smooth_warp(rng, n));
    const SrtPoint out = exp_map(base, make_tangent(base, std::vector<double>(n, 0.0)));
    for (std::size_t i = 0; i < n; ++i) REQUIRE(out[i] == base[i]);
  }
  SECTION("antipodal input is rejected") {
    std::vector<double> pos(n, 1.0);
    std::vector<double> neg(n, -1.0);
    REQUIRE_THROWS_AS(inv_exp_map(SrtPoint(pos), SrtPoint(neg)), invalid_input);
  }
}

TEST_CASE("tangent vectors must be orthogonal to their base") {
  const std::size_t n = 65;
  const SrtPoint base = SrtPoint::identity(n);
  REQUIRE_THROWS_AS(TangentVector(std::vector<double>(n, 1.0), base), invalid_input);
  REQUIRE_NOTHROW(make_tangent(base, std::vector<double>(n, 1.0)));
}

TEST_CASE("warp composition stays in the group") {
  const std::size_t n = 257;
  RngStream rng(24, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const Warping g1 = random_smooth_warp(rng, n);
    const Warping g2 = random_smooth_warp(rng, n);
    const Warping c = g1.compose(g2);  // constructor enforces the invariants
    REQUIRE(c[0] == 0.0);
    REQUIRE(c[n - 1] == 1.0);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "ecm/dp.hpp"
#include "ecm/rng.hpp"
#include "test_util.hpp"

using namespace ecm;
using test_util::random_smooth_function;
using test_util::random_smooth_warp;

namespace {

// Independent oracle: recursively enumerate every strictly monotone lattice
// chain from (0,0) to (n-1,n-1) and integrate the mismatch along each chain
// by the trapezoidal rule.
double oracle_segment_cost(const std::vector<double>& a, const std::vector<double>& b, int i0,
                           int j0, int i1, int j1) {
  const int n = static_cast<int>(a.size());
  const double h = 1.0 / (n - 1);
  const double slope = static_cast<double>(j1 - j0) / static_cast<double>(i1 - i0);
  const double root = std::sqrt(slope);
  double acc = 0.0;
  for (int s = 0; s <= i1 - i0; ++s) {
    const double pos = j0 + slope * s;
    int lo = static_cast<int>(pos);
    if (lo > n - 2) lo = n - 2;
    const double frac = pos - lo;
    const double bval = b[lo] * (1.0 - frac) + b[lo + 1] * frac;
    const double diff = a[i0 + s] - root * bval;
    acc += (s == 0 || s == i1 - i0 ? 0.5 : 1.0) * diff * diff;
  }
  return acc * h;
}

void oracle_walk(const std::vector<double>& a, const std::vector<double>& b, int i, int j,
                 double cost_so_far, double& best) {
  const int n = static_cast<int>(a.size());
  if (i == n - 1 && j == n - 1) {
    best = std::min(best, cost_so_far);
    return;
  }
  for (int i2 = i + 1; i2 < n; ++i2) {
    for (int j2 = j + 1; j2 < n; ++j2) {
      const bool final_node = (i2 == n - 1 && j2 == n - 1);
      const bool interior = (i2 < n - 1 && j2 < n - 1);
      if (!final_node && !interior) continue;  // paths end only at the corner
      oracle_walk(a, b, i2, j2,
                  cost_so_far + oracle_segment_cost(a, b, i, j, i2, j2), best);
    }
  }
}

double oracle_min_distance(const Srsf& q1, const Srsf& q2) {
  double best = std::numeric_limits<double>::infinity();
  oracle_walk(q1.values(), q2.values(), 0, 0, 0.0, best);
  return std::sqrt(best);
}

Srsf random_srsf(RngStream& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return Srsf(std::move(v));
}

}  // namespace

TEST_CASE("identical SRSFs align at distance zero with the identity warp") {
  RngStream rng(31, 0);
  const Srsf q = to_srsf(random_smooth_function(rng, 101));
  const AlignmentResult r = amplitude_distance(q, q);
  REQUIRE(r.distance == Catch::Approx(0.0).margin(1e-12));
  for (std::size_t i = 0; i < q.grid_size(); ++i)
    REQUIRE(r.warp[i] == Catch::Approx(grid_points(101)[i]).margin(1e-12));
}

TEST_CASE("aligning a warped copy recovers the inverse warp") {
  const std::size_t n = 257;
  RngStream rng(32, 0);
  const Srsf q = to_srsf(random_smooth_function(rng, n));
  const Warping gamma = random_smooth_warp(rng, n);
  const Srsf q2 = group_action(q, gamma);

  const AlignmentResult r = amplitude_distance(q, q2);
  REQUIRE(r.distance <= 1e-2 * q.norm());

  const Warping ginv = gamma.inverse();
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) sup = std::max(sup, std::fabs(r.warp[i] - ginv[i]));
  REQUIRE(sup <= 2.0 * grid_step(n));
}

TEST_CASE("returned distance matches the recomputed aligned residual") {
  const std::size_t n = 257;
  RngStream rng(33, 0);
  const Srsf q1 = to_srsf(random_smooth_function(rng, n));
  const Srsf q2 = to_srsf(random_smooth_function(rng, n));
  const AlignmentResult r = amplitude_distance(q1, q2);
  const Srsf aligned = group_action(q2, r.warp);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = q1[i] - aligned[i];
  REQUIRE(norm2(d) == Catch::Approx(r.distance).epsilon(0.25));
}

TEST_CASE("lattice-restricted DP equals the exhaustive path minimum") {
  SECTION("on the 9-point grid") {
    RngStream rng(34, 0);
    for (int rep = 0; rep < 10; ++rep) {
      const Srsf q1 = random_srsf(rng, 9);
      const Srsf q2 = random_srsf(rng, 9);
      const AlignmentResult r = amplitude_distance(q1, q2, lattice_only());
      REQUIRE(r.distance == Catch::Approx(oracle_min_distance(q1, q2)).margin(1e-12));
    }
  }
  SECTION("on every grid size up to 12") {
    RngStream rng(35, 0);
    for (std::size_t n = 4; n <= 12; ++n) {
      for (int rep = 0; rep < 2; ++rep) {
        const Srsf q1 = random_srsf(rng, n);
        const Srsf q2 = random_srsf(rng, n);
        const AlignmentResult r = amplitude_distance(q1, q2, lattice_only());
        REQUIRE(r.distance == Catch::Approx(oracle_min_distance(q1, q2)).margin(1e-12));
      }
    }
  }
}

TEST_CASE("distance is nearly symmetric") {
  const std::size_t n = 129;
  RngStream rng(36, 0);
  const Srsf q1 = to_srsf(random_smooth_function(rng, n));
  const Srsf q2 = to_srsf(random_smooth_function(rng, n));
  const double d12 = amplitude_distance(q1, q2).distance;
  const double d21 = amplitude_distance(q2, q1).distance;
  REQUIRE(d12 == Catch::Approx(d21).epsilon(0.1));
}

TEST_CASE("the optional second pass never increases the distance") {
  const std::size_t n = 129;
  RngStream rng(37, 0);
  for (int rep = 0; rep < 5; ++rep) {
    const Srsf q1 = to_srsf(random_smooth_function(rng, n));
    const Srsf q2 = to_srsf(random_smooth_function(rng, n));
    DpOptions twice;
    twice.refine = true;
    REQUIRE(amplitude_distance(q1, q2, twice).distance <=
            amplitude_distance(q1, q2).distance + 1e-12);
  }
}

TEST_CASE("mismatched grids are rejected") {
  const Srsf a(std::vector<double>(9, 1.0));
  const Srsf b(std::vector<double>(11, 1.0));
  REQUIRE_THROWS_AS(amplitude_distance(a, b), invalid_input);
}

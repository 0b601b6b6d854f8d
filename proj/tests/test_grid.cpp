#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ecm/grid.hpp"

using namespace ecm;

TEST_CASE("grid points span [0,1] uniformly") {
  const auto t = grid_points(5);
  REQUIRE(t.front() == 0.0);
  REQUIRE(t.back() == 1.0);
  REQUIRE(t[2] == Catch::Approx(0.5));
}

TEST_CASE("derivative is exact for quadratics") {
  const std::size_t n = 33;
  const auto t = grid_points(n);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = 3.0 * t[i] * t[i] - 2.0 * t[i] + 1.0;
  const auto d = derivative(f);
  for (std::size_t i = 0; i < n; ++i)
    REQUIRE(d[i] == Catch::Approx(6.0 * t[i] - 2.0).margin(1e-10));
}

TEST_CASE("trapz integrates linear functions exactly") {
  const std::size_t n = 17;
  const auto t = grid_points(n);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = 2.0 * t[i] + 1.0;
  REQUIRE(trapz(f) == Catch::Approx(2.0).margin(1e-14));
}

TEST_CASE("cumtrapz of a constant is linear") {
  std::vector<double> f(9, 3.0);
  const auto g = cumtrapz(f);
  REQUIRE(g.front() == 0.0);
  REQUIRE(g.back() == Catch::Approx(3.0).margin(1e-14));
}

TEST_CASE("interp1 clamps and interpolates") {
  std::vector<double> f{0.0, 1.0, 4.0};
  REQUIRE(interp1(f, 0.25) == Catch::Approx(0.5));
  REQUIRE(interp1(f, -1.0) == 0.0);
  REQUIRE(interp1(f, 2.0) == 4.0);
}

TEST_CASE("type-7 quantile matches hand computation") {
  std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  REQUIRE(quantile(v, 0.5) == Catch::Approx(2.5));
  REQUIRE(quantile(v, 0.25) == Catch::Approx(1.75));
  REQUIRE(quantile(v, 0.75) == Catch::Approx(3.25));
  REQUIRE(quantile(v, 0.0) == 1.0);
  REQUIRE(quantile(v, 1.0) == 4.0);
}

TEST_CASE("pointwise median across rows") {
  std::vector<std::vector<double>> rows{{1.0, 10.0}, {2.0, 20.0}, {9.0, 0.0}};
  const auto m = pointwise_median(rows);
  REQUIRE(m[0] == 2.0);
  REQUIRE(m[1] == 10.0);
}

TEST_CASE("resample preserves endpoints") {
  std::vector<double> f{0.0, 1.0, 0.0, -1.0, 0.0};
  const auto g = resample(f, 9);
  REQUIRE(g.front() == f.front());
  REQUIRE(g.back() == f.back());
  REQUIRE(g.size() == 9);
}

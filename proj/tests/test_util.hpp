// Shared generators for randomized tests: smooth functions with sign-changing
// derivatives and smooth endpoint-fixed warps.

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "ecm/grid.hpp"
#include "ecm/rng.hpp"
#include "ecm/types.hpp"

namespace test_util {

inline ecm::SampledFunction random_smooth_function(ecm::RngStream& rng, std::size_t n) {
  const std::vector<double> t = ecm::grid_points(n);
  std::vector<double> f(n, 0.0);
  const double drift = rng.uniform(-1.0, 1.0);
  for (int k = 1; k <= 4; ++k) {
    const double a = rng.uniform(-1.0, 1.0) / k;
    const double b = rng.uniform(-1.0, 1.0) / k;
    for (std::size_t i = 0; i < n; ++i) {
      const double ang = 2.0 * std::numbers::pi * k * t[i];
      f[i] += a * std::sin(ang) + b * std::cos(ang);
    }
  }
  for (std::size_t i = 0; i < n; ++i) f[i] += drift * t[i];
  return ecm::SampledFunction(std::move(f));
}

/// Strictly monotone warp: gamma = cumulative integral of exp(w) normalized.
inline ecm::Warping random_smooth_warp(ecm::RngStream& rng, std::size_t n, double strength = 1.0) {
  const std::vector<double> t = ecm::grid_points(n);
  std::vector<double> w(n, 0.0);
  for (int k = 1; k <= 3; ++k) {
    const double a = strength * rng.uniform(-0.5, 0.5) / k;
    for (std::size_t i = 0; i < n; ++i) w[i] += a * std::sin(std::numbers::pi * k * t[i]);
  }
  for (double& x : w) x = std::exp(x);
  std::vector<double> g = ecm::cumtrapz(w);
  const double total = g.back();
  for (double& x : g) x /= total;
  g.front() = 0.0;
  g.back() = 1.0;
  return ecm::Warping(std::move(g));
}

inline ecm::Warping quadratic_warp(double a, std::size_t n) {
  const std::vector<double> t = ecm::grid_points(n);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = t[i] + a * t[i] * (t[i] - 1.0);
  g.front() = 0.0;
  g.back() = 1.0;
  return ecm::Warping(std::move(g));
}

}  // namespace test_util

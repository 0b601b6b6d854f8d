/// \file srsf.hpp
/// \brief Square-root slope transform and the warping group action.
///
/// The map q = sgn(f') sqrt(|f'|) sends functions to L2, where
/// reparameterization acts by the isometry (q, g) -> (q o g) sqrt(g').

#pragma once

#include <cmath>
#include <vector>

#include "ecm/grid.hpp"
#include "ecm/types.hpp"

namespace ecm {

inline Srsf to_srsf(const SampledFunction& f) {
  std::vector<double> d = derivative(f.values());
  for (double& x : d) {
    if (!std::isfinite(x)) throw invalid_input("to_srsf: non-finite derivative estimate");
    x = (x >= 0.0 ? 1.0 : -1.0) * std::sqrt(std::fabs(x));
  }
  return Srsf(std::move(d));
}

/// Inverse transform: f(t) = f0 + integral of q|q|.
inline SampledFunction from_srsf(const Srsf& q, double f0) {
  std::vector<double> integrand(q.grid_size());
  for (std::size_t i = 0; i < integrand.size(); ++i) integrand[i] = q[i] * std::fabs(q[i]);
  std::vector<double> f = cumtrapz(integrand);
  for (double& x : f) x += f0;
  return SampledFunction(std::move(f));
}

/// f o gamma by piecewise-linear interpolation at the warped nodes.
inline SampledFunction apply_warp(const SampledFunction& f, const Warping& gamma) {
  std::vector<double> out(gamma.grid_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = interp1(f.values(), gamma[i]);
  return SampledFunction(std::move(out));
}

/// Group action (q, gamma) = (q o gamma) sqrt(gamma').
inline Srsf group_action(const Srsf& q, const Warping& gamma) {
  const std::vector<double> dgamma = derivative(gamma.values());
  std::vector<double> out(gamma.grid_size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double g = std::max(dgamma[i], 0.0);
    out[i] = interp1(q.values(), gamma[i]) * std::sqrt(g);
  }
  return Srsf(std::move(out));
}

}  // namespace ecm

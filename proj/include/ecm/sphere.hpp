/// \file sphere.hpp
/// \brief Geometry of warping functions on the unit Hilbert sphere.
///
/// The square-root transform psi = sqrt(gamma') maps warps to the positive
/// orthant of the unit sphere in L2. Distances, exponential maps, and
/// tangent-space statistics for the phase component live here.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ecm/grid.hpp"
#include "ecm/types.hpp"

namespace ecm {

/// A point of the unit Hilbert sphere (discrete trapezoidal norm 1).
///
/// Points produced by to_srt lie in the closed positive orthant; descriptors
/// produced by exp_map may leave it, which nonnegative() reports.
class SrtPoint {
 public:
  explicit SrtPoint(std::vector<double> values) : values_(std::move(values)) {
    detail::require_grid(values_, "SrtPoint");
    const double nrm = norm2(values_);
    if (!(nrm > 0.0)) throw invalid_input("SrtPoint: zero norm");
    for (double& x : values_) x /= nrm;
  }

  static SrtPoint identity(std::size_t n) { return SrtPoint(std::vector<double>(n, 1.0)); }

  std::size_t grid_size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool nonnegative() const {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return x >= 0.0; });
  }

 private:
  std::vector<double> values_;
};

/// A tangent vector at a base point of the sphere: <v, base> = 0.
class TangentVector {
 public:
  TangentVector(std::vector<double> values, SrtPoint base)
      : values_(std::move(values)), base_(std::move(base)) {
    detail::require_finite(values_, "TangentVector");
    const double ip = inner(values_, base_.values());
    if (std::fabs(ip) > 1e-8 * std::max(1.0, norm2(values_)))
      throw invalid_input("TangentVector: not orthogonal to base point");
  }

  std::size_t grid_size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const SrtPoint& base() const { return base_; }
  double norm() const { return norm2(values_); }

 private:
  std::vector<double> values_;
  SrtPoint base_;
};

/// Projects v onto the tangent space at base and wraps it.
inline TangentVector make_tangent(const SrtPoint& base, std::vector<double> v) {
  const double ip = inner(v, base.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= ip * base[i];
  return TangentVector(std::move(v), base);
}

/// psi = sqrt(gamma'), normalized to unit norm after discretization.
inline SrtPoint to_srt(const Warping& gamma) {
  std::vector<double> d = derivative(gamma.values());
  for (double& x : d) x = std::sqrt(std::max(x, 0.0));
  return SrtPoint(std::move(d));
}

/// gamma(t) = integral of psi^2, rescaled so gamma(1) = 1 exactly.
inline Warping from_srt(const SrtPoint& psi) {
  if (!psi.nonnegative()) throw invalid_input("from_srt: point leaves the positive orthant");
  std::vector<double> sq(psi.grid_size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = psi[i] * psi[i];
  std::vector<double> g = cumtrapz(sq);
  const double total = g.back();
  if (!(total > 0.0)) throw invalid_input("from_srt: degenerate point");
  for (double& x : g) x /= total;
  g.front() = 0.0;
  g.back() = 1.0;
  return Warping(std::move(g));
}

inline double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

/// Geodesic distance between two sphere points.
inline double sphere_distance(const SrtPoint& a, const SrtPoint& b) {
  return std::acos(clamp_unit(inner(a.values(), b.values())));
}

/// Phase distance D_p = arccos <psi_1, psi_2>.
inline double phase_distance(const Warping& g1, const Warping& g2) {
  return sphere_distance(to_srt(g1), to_srt(g2));
}

/// Inverse exponential map at base. Requires theta < pi (not antipodal).
inline TangentVector inv_exp_map(const SrtPoint& base, const SrtPoint& psi) {
  const double theta = std::acos(clamp_unit(inner(psi.values(), base.values())));
  if (theta >= std::numbers::pi - 1e-6)
    throw invalid_input("inv_exp_map: antipodal point, map undefined");
  std::vector<double> v(psi.grid_size());
  if (theta < 1e-8) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = psi[i] - base[i];
    return make_tangent(base, std::move(v));
  }
  const double scale = theta / std::sin(theta);
  const double c = std::cos(theta);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * (psi[i] - c * base[i]);
  return TangentVector(std::move(v), base);
}

/// Exponential map at base; output renormalized onto the sphere.
inline SrtPoint exp_map(const SrtPoint& base, const TangentVector& nu) {
  const double r = nu.norm();
  if (r < 1e-8) return base;
  const double c = std::cos(r);
  const double s = std::sin(r) / r;
  std::vector<double> out(base.grid_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * base[i] + s * nu.values()[i];
  return SrtPoint(std::move(out));
}

/// Zeroes negative entries and renormalizes. Points that represent warps lie
/// in the closed positive orthant; this removes numerical leakage only.
inline SrtPoint clamp_to_orthant(const SrtPoint& p) {
  std::vector<double> v = p.values();
  bool touched = false;
  for (double& x : v) {
    if (x < 0.0) {
      x = 0.0;
      touched = true;
    }
  }
  return touched ? SrtPoint(std::move(v)) : p;
}

/// Mean warp in the SRT tangent space at the identity.
inline Warping srt_tangent_mean(const std::vector<Warping>& warps) {
  const std::size_t n = warps.front().grid_size();
  const SrtPoint id = SrtPoint::identity(n);
  std::vector<double> acc(n, 0.0);
  for (const Warping& g : warps) {
    const TangentVector nu = inv_exp_map(id, to_srt(g));
    for (std::size_t i = 0; i < n; ++i) acc[i] += nu.values()[i];
  }
  for (double& x : acc) x /= static_cast<double>(warps.size());
  const SrtPoint mean_psi = exp_map(id, make_tangent(id, std::move(acc)));
  // clamp stray negative entries so extreme inputs still yield a usable warp
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::max(mean_psi[i], 0.0);
    sq[i] = p * p;
  }
  std::vector<double> g = cumtrapz(sq);
  const double total = g.back();
  if (!(total > 0.0)) throw invalid_input("srt_tangent_mean: degenerate mean");
  for (double& x : g) x /= total;
  g.front() = 0.0;
  g.back() = 1.0;
  return Warping(std::move(g));
}

}  // namespace ecm

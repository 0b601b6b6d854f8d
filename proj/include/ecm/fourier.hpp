/// \file fourier.hpp
/// \brief Real Fourier-series models of closed contours, fit by least squares.
///
/// Each coordinate is modeled independently on the period-normalized
/// parameter t in [0,1]. Angles are phase-reduced so evaluation at t = 0 and
/// t = 1 is identical, not merely close.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "ecm/contour.hpp"
#include "ecm/errors.hpp"

namespace ecm {

struct FourierContourModel {
  int harmonics = 0;              ///< K
  double a0 = 0.0;                ///< x constant term
  std::vector<double> a, b;       ///< x cos/sin coefficients, length K
  double c0 = 0.0;                ///< y constant term
  std::vector<double> c, d;       ///< y cos/sin coefficients, length K
};

namespace detail {

/// cos/sin of 2 pi k t with the angle reduced mod 1 for exact periodicity.
inline void fourier_angle(int k, double t, double& cv, double& sv) {
  const double kt = static_cast<double>(k) * t;
  const double frac = kt - std::floor(kt);
  const double ang = 2.0 * std::numbers::pi * frac;
  cv = std::cos(ang);
  sv = std::sin(ang);
}

inline double eval_series(double a0, const std::vector<double>& ac, const std::vector<double>& as,
                          double t, int harmonics) {
  double v = a0;
  const int kmax = std::min<int>(harmonics, static_cast<int>(ac.size()));
  for (int k = 1; k <= kmax; ++k) {
    double cv, sv;
    fourier_angle(k, t, cv, sv);
    v += ac[static_cast<std::size_t>(k - 1)] * cv + as[static_cast<std::size_t>(k - 1)] * sv;
  }
  return v;
}

}  // namespace detail

inline double eval_fourier_x(const FourierContourModel& m, double t, int harmonics = -1) {
  return detail::eval_series(m.a0, m.a, m.b, t, harmonics < 0 ? m.harmonics : harmonics);
}

inline double eval_fourier_y(const FourierContourModel& m, double t, int harmonics = -1) {
  return detail::eval_series(m.c0, m.c, m.d, t, harmonics < 0 ? m.harmonics : harmonics);
}

/// Least-squares fit of a K-harmonic series to each coordinate.
///
/// Normal equations with a 1e-12 ridge on the Gram diagonal; the duplicated
/// seam sample of a closed contour is dropped so it is not counted twice.
inline FourierContourModel fit_fourier(const ContourLayer& contour, int harmonics) {
  if (harmonics < 1) throw fit_error("fit_fourier: need at least one harmonic");
  const std::size_t n = contour.grid_size();
  const std::size_t rows = contour.closed ? n - 1 : n;
  const std::size_t cols = 2 * static_cast<std::size_t>(harmonics) + 1;
  if (rows <= cols) throw fit_error("fit_fourier: grid too small for requested harmonics");

  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd bx(rows), by(rows);
  const double h = grid_step(n);
  for (std::size_t r = 0; r < rows; ++r) {
    const double t = static_cast<double>(r) * h;
    design(r, 0) = 1.0;
    for (int k = 1; k <= harmonics; ++k) {
      double cv, sv;
      detail::fourier_angle(k, t, cv, sv);
      design(r, static_cast<std::size_t>(2 * k - 1)) = cv;
      design(r, static_cast<std::size_t>(2 * k)) = sv;
    }
    bx(r) = contour.x[r];
    by(r) = contour.y[r];
  }

  Eigen::MatrixXd gram = design.transpose() * design;
  gram.diagonal().array() += 1e-12;
  Eigen::LDLT<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) throw fit_error("fit_fourier: normal equations singular");
  const Eigen::VectorXd cx = solver.solve(design.transpose() * bx);
  const Eigen::VectorXd cy = solver.solve(design.transpose() * by);

  FourierContourModel model;
  model.harmonics = harmonics;
  model.a0 = cx(0);
  model.c0 = cy(0);
  model.a.resize(static_cast<std::size_t>(harmonics));
  model.b.resize(static_cast<std::size_t>(harmonics));
  model.c.resize(static_cast<std::size_t>(harmonics));
  model.d.resize(static_cast<std::size_t>(harmonics));
  for (int k = 1; k <= harmonics; ++k) {
    model.a[static_cast<std::size_t>(k - 1)] = cx(2 * k - 1);
    model.b[static_cast<std::size_t>(k - 1)] = cx(2 * k);
    model.c[static_cast<std::size_t>(k - 1)] = cy(2 * k - 1);
    model.d[static_cast<std::size_t>(k - 1)] = cy(2 * k);
  }
  return model;
}

/// Samples the model on a uniform t-grid as a closed contour.
inline ContourLayer eval_fourier(const FourierContourModel& m, std::size_t grid_size,
                                 double z = 0.0) {
  std::vector<double> xs(grid_size), ys(grid_size);
  const double h = grid_step(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double t = (j + 1 == grid_size) ? 1.0 : static_cast<double>(j) * h;
    xs[j] = eval_fourier_x(m, t);
    ys[j] = eval_fourier_y(m, t);
  }
  return make_contour(z, std::move(xs), std::move(ys), true);
}

/// Root-mean-square residual of the model against a contour, pooled over
/// both coordinates.
inline double fourier_rms_residual(const FourierContourModel& m, const ContourLayer& contour) {
  const std::size_t n = contour.grid_size();
  const std::size_t rows = contour.closed ? n - 1 : n;
  const double h = grid_step(n);
  double acc = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double t = static_cast<double>(r) * h;
    const double dx = contour.x[r] - eval_fourier_x(m, t);
    const double dy = contour.y[r] - eval_fourier_y(m, t);
    acc += dx * dx + dy * dy;
  }
  return std::sqrt(acc / (2.0 * static_cast<double>(rows)));
}

}  // namespace ecm

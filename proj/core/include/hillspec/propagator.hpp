#pragma once

#include <cmath>

namespace hillspec {

struct Vec2 {
  double first = 0.0;
  double second = 0.0;
};

/// Row-major 2x2 matrix.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;

  static constexpr Mat2 identity() { return {}; }

  constexpr double det() const { return a11 * a22 - a12 * a21; }
  constexpr double trace() const { return a11 + a22; }

  constexpr Vec2 operator*(const Vec2& v) const {
    return {a11 * v.first + a12 * v.second, a21 * v.first + a22 * v.second};
  }
  constexpr Mat2 operator*(const Mat2& m) const {
    return {a11 * m.a11 + a12 * m.a21, a11 * m.a12 + a12 * m.a22,
            a21 * m.a11 + a22 * m.a21, a21 * m.a12 + a22 * m.a22};
  }
  constexpr Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
  constexpr Mat2 operator+(const Mat2& m) const {
    return {a11 + m.a11, a12 + m.a12, a21 + m.a21, a22 + m.a22};
  }
  constexpr Mat2 operator-(const Mat2& m) const {
    return {a11 - m.a11, a12 - m.a12, a21 - m.a21, a22 - m.a22};
  }
};

using TransferMatrix = Mat2;

/// |tau| t^2 below this switches phi, phi' and d(phi)/d(lambda) to their
/// power series.
inline constexpr double kSeriesThreshold = 1e-2;

/// Intervals with tau < -scaling_epsilon(lambda) are rescaled by exp(omega h).
inline double scaling_epsilon(double lambda) { return 1e-12 * std::fmax(1.0, std::fabs(lambda)); }

struct PhiPair {
  double phi;    // sin(wt)/w, sinh(wt)/w or t
  double phi_x;  // its t-derivative
};

/// Fundamental solution of -y'' = tau y with y(0)=0, y'(0)=1, evaluated at t.
PhiPair phi_pair(double tau, double t);

/// d(phi)/d(lambda) at t, i.e. (t phi_x - phi) / (2 tau), with a series
/// near tau = 0.
double phi_lambda(double tau, double t);

/// Propagates (y, y') across one subinterval of width h: [[phi', phi], [-tau phi, phi']].
TransferMatrix step_matrix(double tau, double h);
TransferMatrix step_matrix_inverse(double tau, double h);
/// d/d(lambda) of step_matrix (tau = lambda - q, so d tau / d lambda = 1).
TransferMatrix step_matrix_lambda(double tau, double h);
TransferMatrix step_matrix_inverse_lambda(double tau, double h);

/// Everything a sweep needs about one constant-potential subinterval at a
/// fixed lambda. The *_scaled fields hold the entries divided by sigma,
/// computed without forming sigma so they stay finite for huge omega h.
struct IntervalKernel {
  double tau = 0.0;
  double omega = 0.0;
  double h = 0.0;
  double phi = 0.0;
  double phi_x = 1.0;
  double phi_lambda = 0.0;
  double sigma = 1.0;
  double log_sigma = 0.0;  // omega h when scaled, else 0

  double phi_scaled = 0.0;
  double phi_x_scaled = 1.0;
  double phi_lambda_scaled = 0.0;

  static IntervalKernel make(double lambda, double q, double h);

  bool scaled() const noexcept { return log_sigma > 0.0; }

  /// A / sigma (or A when use_scaling is false).
  Mat2 forward(bool use_scaling = true) const;
  /// A^{-1} / sigma.
  Mat2 backward(bool use_scaling = true) const;
  /// A_lambda / sigma.
  Mat2 forward_lambda(bool use_scaling = true) const;
  /// (A^{-1})_lambda / sigma.
  Mat2 backward_lambda(bool use_scaling = true) const;
};

}  // namespace hillspec

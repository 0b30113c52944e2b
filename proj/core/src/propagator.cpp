#include "hillspec/propagator.hpp"

#include <array>
#include <cmath>

namespace hillspec {

namespace {

// Seven terms keep the truncation error below 1e-22 relative for |z| < 1e-2,
// so the series and closed-form branches agree to roundoff at the switch.
constexpr int kSeriesTerms = 7;

// sum_{k} (-z)^k / (2k)!  and  sum_{k} (-z)^k / (2k+1)!
struct SeriesPair {
  double even;
  double odd;
};

SeriesPair trig_series(double z) {
  double even = 0.0;
  double odd = 0.0;
  for (int k = kSeriesTerms - 1; k >= 0; --k) {
    even = 1.0 - z * even / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
    odd = 1.0 - z * odd / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return {even, odd};
}

// d(phi)/d(tau) / t^3 = -sum_{j>=0} (j+1) (-z)^j / (2j+3)!
double phi_lambda_series(double z) {
  std::array<double, kSeriesTerms> coeff{};
  double fact = 6.0;  // 3!
  for (int j = 0; j < kSeriesTerms; ++j) {
    coeff[static_cast<std::size_t>(j)] = (j + 1.0) / fact;
    fact *= (2.0 * j + 4.0) * (2.0 * j + 5.0);
  }
  double sum = 0.0;
  for (int j = kSeriesTerms - 1; j >= 0; --j) sum = coeff[static_cast<std::size_t>(j)] - z * sum;
  return -sum;
}

bool use_series(double tau, double t) { return std::fabs(tau) * t * t < kSeriesThreshold; }

}  // namespace

PhiPair phi_pair(double tau, double t) {
  if (use_series(tau, t)) {
    const auto s = trig_series(tau * t * t);
    return {t * s.odd, s.even};
  }
  const double w = std::sqrt(std::fabs(tau));
  if (tau > 0.0) return {std::sin(w * t) / w, std::cos(w * t)};
  return {std::sinh(w * t) / w, std::cosh(w * t)};
}

double phi_lambda(double tau, double t) {
  if (use_series(tau, t)) return t * t * t * phi_lambda_series(tau * t * t);
  const auto p = phi_pair(tau, t);
  return (t * p.phi_x - p.phi) / (2.0 * tau);
}

TransferMatrix step_matrix(double tau, double h) {
  const auto p = phi_pair(tau, h);
  return {p.phi_x, p.phi, -tau * p.phi, p.phi_x};
}

TransferMatrix step_matrix_inverse(double tau, double h) {
  const auto p = phi_pair(tau, h);
  return {p.phi_x, -p.phi, tau * p.phi, p.phi_x};
}

TransferMatrix step_matrix_lambda(double tau, double h) {
  const auto p = phi_pair(tau, h);
  const double phi_l = phi_lambda(tau, h);
  const double phi_xl = -0.5 * h * p.phi;
  return {phi_xl, phi_l, -p.phi - tau * phi_l, phi_xl};
}

TransferMatrix step_matrix_inverse_lambda(double tau, double h) {
  const auto p = phi_pair(tau, h);
  const double phi_l = phi_lambda(tau, h);
  const double phi_xl = -0.5 * h * p.phi;
  return {phi_xl, -phi_l, p.phi + tau * phi_l, phi_xl};
}

IntervalKernel IntervalKernel::make(double lambda, double q, double h) {
  IntervalKernel k;
  k.tau = lambda - q;
  k.omega = std::sqrt(std::fabs(k.tau));
  k.h = h;
  const auto p = phi_pair(k.tau, h);
  k.phi = p.phi;
  k.phi_x = p.phi_x;
  k.phi_lambda = hillspec::phi_lambda(k.tau, h);

  if (k.tau < -scaling_epsilon(lambda)) {
    const double x = k.omega * h;
    k.log_sigma = x;
    k.sigma = std::exp(x);
    if (use_series(k.tau, h)) {
      k.phi_scaled = k.phi / k.sigma;
      k.phi_x_scaled = k.phi_x / k.sigma;
      k.phi_lambda_scaled = k.phi_lambda / k.sigma;
    } else {
      // cosh(x)/e^x and sinh(x)/e^x without overflow.
      const double e = std::exp(-2.0 * x);
      k.phi_x_scaled = 0.5 * (1.0 + e);
      k.phi_scaled = -0.5 * std::expm1(-2.0 * x) / k.omega;
      k.phi_lambda_scaled = (h * k.phi_x_scaled - k.phi_scaled) / (2.0 * k.tau);
    }
  } else {
    k.phi_scaled = k.phi;
    k.phi_x_scaled = k.phi_x;
    k.phi_lambda_scaled = k.phi_lambda;
  }
  return k;
}

Mat2 IntervalKernel::forward(bool use_scaling) const {
  const double ph = use_scaling ? phi_scaled : phi;
  const double px = use_scaling ? phi_x_scaled : phi_x;
  return {px, ph, -tau * ph, px};
}

Mat2 IntervalKernel::backward(bool use_scaling) const {
  const double ph = use_scaling ? phi_scaled : phi;
  const double px = use_scaling ? phi_x_scaled : phi_x;
  return {px, -ph, tau * ph, px};
}

Mat2 IntervalKernel::forward_lambda(bool use_scaling) const {
  const double ph = use_scaling ? phi_scaled : phi;
  const double pl = use_scaling ? phi_lambda_scaled : phi_lambda;
  const double pxl = -0.5 * h * ph;
  return {pxl, pl, -ph - tau * pl, pxl};
}

Mat2 IntervalKernel::backward_lambda(bool use_scaling) const {
  const double ph = use_scaling ? phi_scaled : phi;
  const double pl = use_scaling ? phi_lambda_scaled : phi_lambda;
  const double pxl = -0.5 * h * ph;
  return {pxl, -pl, ph + tau * pl, pxl};
}

}  // namespace hillspec

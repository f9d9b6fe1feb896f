#include "zfr/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "zfr/error.hpp"
#include "zfr/quadrature.hpp"

namespace zfr::mollifier {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr int kScanPoints = 2000;

// 1 - x cot x, with the Taylor series where the direct form cancels.
double one_minus_x_cot_x(double x) noexcept {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x2 * (1.0 / 3.0 + x2 * (1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 / 4725.0)));
  }
  return 1.0 - x / std::tan(x);
}

double residual_derivative(double theta, double ratio) noexcept {
  const double s = std::sin(theta);
  return std::sin(2.0 * theta) - ratio * (theta / (s * s) - 1.0 / std::tan(theta));
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < kHalfPi))
    fail(ErrorCode::InvalidArgument, "theta must lie in (0, pi/2), got " + std::to_string(theta));
}

}  // namespace

double theta_residual(double theta, double ratio) noexcept {
  const double s = std::sin(theta);
  return s * s - ratio * one_minus_x_cot_x(theta);
}

double solve_theta(double b0, double b1) {
  if (!(b0 > 0.0) || !(b1 > 0.0)) fail(ErrorCode::InvalidArgument, "solve_theta: b0 and b1 must be positive");
  const double ratio = b1 / b0;
  if (!(ratio > 1.0 && ratio < 3.0))
    fail(ErrorCode::RatioOutOfRange, "solve_theta: b1/b0 = " + std::to_string(ratio) + " is outside (1, 3)");

  // Scan the open interval for sign changes; the endpoints behave like
  // theta^2 (1 - ratio/3) > 0 and 1 - ratio < 0.
  double lo = 0.0, hi = 0.0;
  int changes = 0;
  double prev_x = kHalfPi / kScanPoints;
  double prev_h = theta_residual(prev_x, ratio);
  for (int i = 2; i < kScanPoints; ++i) {
    const double x = kHalfPi * i / kScanPoints;
    const double h = theta_residual(x, ratio);
    if ((prev_h > 0.0) != (h > 0.0)) {
      ++changes;
      lo = prev_x;
      hi = x;
    }
    prev_x = x;
    prev_h = h;
  }
  const double last_x = kHalfPi * (1.0 - 1e-9);
  const double last_h = theta_residual(last_x, ratio);
  if ((prev_h > 0.0) != (last_h > 0.0)) {
    ++changes;
    lo = prev_x;
    hi = last_x;
  }
  if (changes == 0) {
    // Ratio very close to 3 pushes the root below the first scan point.
    lo = 1e-6;
    hi = kHalfPi / kScanPoints;
    if (!(theta_residual(lo, ratio) > 0.0 && theta_residual(hi, ratio) <= 0.0))
      fail(ErrorCode::RatioOutOfRange, "solve_theta: no sign change found for b1/b0 = " + std::to_string(ratio));
    changes = 1;
  }
  if (changes > 1)
    fail(ErrorCode::MultipleRoots,
         "solve_theta: " + std::to_string(changes) + " sign changes for b1/b0 = " + std::to_string(ratio));

  // residual is positive at lo, nonpositive at hi
  for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (theta_residual(mid, ratio) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double x = 0.5 * (lo + hi);
  double hx = theta_residual(x, ratio);
  for (int it = 0; it < 4; ++it) {
    const double step = hx / residual_derivative(x, ratio);
    const double cand = x - step;
    if (!(cand > 0.0 && cand < kHalfPi)) break;
    const double hc = theta_residual(cand, ratio);
    if (std::abs(hc) >= std::abs(hx)) break;
    x = cand;
    hx = hc;
  }
  return x;
}

double g_eval(double theta, double u) noexcept {
  const double t = std::tan(theta);
  const double support = theta / t;
  if (!(std::abs(u) < support)) return 0.0;
  const double c = std::cos(theta);
  return (std::cos(u * t) - c) / (c * c);
}

double w_eval(double theta, double u) noexcept {
  const double a = theta / std::tan(theta);
  const double lo = std::max(-a, u - a);
  const double hi = std::min(a, u + a);
  if (!(hi > lo)) return 0.0;
  return quad::fixed_gauss(
      quad::gauss_legendre_24(), [&](double v) { return g_eval(theta, v) * g_eval(theta, u - v); }, lo, hi);
}

double w0_closed(double theta) noexcept {
  const double t = std::tan(theta);
  const double c = std::cos(theta);
  return (theta * t + 3.0 * theta / t - 3.0) / (c * c);
}

double F0_closed(double theta) noexcept {
  const double t = std::tan(theta);
  return 2.0 * t * t + 3.0 - 3.0 * theta * (t + 1.0 / t);
}

double negWprime0_closed(double theta) noexcept {
  const double csc = 1.0 / std::sin(theta);
  const double sec = 1.0 / std::cos(theta);
  const double cot = 1.0 / std::tan(theta);
  const double th2 = theta * theta;
  return csc * ((15.0 - 12.0 * th2 + theta * (-15.0 + 4.0 * th2) * cot) * csc + 3.0 * theta * sec) / 3.0;
}

TransformValue W_eval(double theta, std::complex<double> s) {
  check_theta(theta);
  const double support = 2.0 * theta / std::tan(theta);
  const double scale = w0_closed(theta) * support * std::exp(std::max(0.0, -s.real()) * support);
  auto r = quad::adaptive_gk15(
      [&](double u) { return w_eval(theta, u) * std::exp(-s * u); }, 0.0, support, 1e-12 * std::max(1.0, scale), 1e-14);
  return {r.value, r.error};
}

MollifierShape::MollifierShape(double theta) : theta_(theta) {
  check_theta(theta);
  g_support_ = theta / std::tan(theta);
  w0_ = w0_closed(theta);
  F0val_ = F0_closed(theta);
  negWp0_ = negWprime0_closed(theta);
}

MollifierShape MollifierShape::from_coefficients(double b0, double b1) { return MollifierShape(solve_theta(b0, b1)); }

MollifierShape MollifierShape::with_lambda(double lambda) const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(ErrorCode::InvalidArgument, "lambda must be positive and finite");
  MollifierShape out = *this;
  out.lambda_ = lambda;
  return out;
}

double MollifierShape::require_lambda() const {
  if (!lambda_) fail(ErrorCode::InvalidArgument, "mollifier shape has no lambda attached");
  return *lambda_;
}

double f_eval(const MollifierShape& shape, double u) {
  const double lambda = shape.require_lambda();
  if (u < 0.0) return 0.0;
  return lambda * std::exp(lambda * u) * w_eval(shape.theta(), lambda * u);
}

std::complex<double> F_eval(const MollifierShape& shape, std::complex<double> z) {
  const double lambda = shape.require_lambda();
  return W_eval(shape.theta(), z / lambda - 1.0).value;
}

std::complex<double> F0_eval(const MollifierShape& shape, std::complex<double> z) {
  if (z == std::complex<double>(0.0, 0.0)) fail(ErrorCode::DivisionByZero, "F0 is undefined at z = 0");
  return F_eval(shape, z) - shape.f0() / z;
}

}  // namespace zfr::mollifier

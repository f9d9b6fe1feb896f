#include "zfr/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "zfr/error.hpp"
#include "zfr/mollifier.hpp"

namespace zfr::asymptotics {

namespace {

void require_objective_input(const trigpoly::CosinePolynomial& p) {
  if (p.degree() < 1) fail(ErrorCode::InvalidArgument, "polynomial must have degree >= 1");
  if (!(p[0] > 0.0) || !(p[1] > 0.0)) fail(ErrorCode::InvalidArgument, "b0 and b1 must be positive");
}

void require_log_log(double t) {
  if (!(t > std::numbers::e) || !std::isfinite(t))
    fail(ErrorCode::DomainError, "t must exceed e so that log log t > 0, got " + std::to_string(t));
}

}  // namespace

MValue compute_M_unchecked(const trigpoly::CosinePolynomial& p) {
  require_objective_input(p);
  const double theta = mollifier::solve_theta(p[0], p[1]);
  const double s0 = p.sum_from(0);
  const double s1 = p.sum_from(1);
  const double c = std::cos(theta);
  const double M = p[0] * c * c / std::pow(0.75 * s1 * std::sqrt(s0), 2.0 / 3.0);
  return {M, theta};
}

MValue compute_M(const trigpoly::CosinePolynomial& p) {
  require_objective_input(p);
  const auto check = trigpoly::verify_nonneg(p);
  if (const auto* v = std::get_if<trigpoly::Violation>(&check))
    fail(ErrorCode::NonnegativityFailure, "polynomial is negative at angle " + std::to_string(v->angle) +
                                              " (value " + std::to_string(v->value) + ")");
  return compute_M_unchecked(p);
}

double compute_C(const trigpoly::CosinePolynomial& p, double B) {
  require_objective_input(p);
  if (!(B > 0.0)) fail(ErrorCode::InvalidArgument, "B must be positive");
  return std::pow(4.0 * p.sum_from(0) / (3.0 * B * p.sum_from(1)), 2.0 / 3.0);
}

double eta_of(double t, double C) {
  require_log_log(t);
  if (!(C > 0.0)) fail(ErrorCode::InvalidArgument, "C must be positive");
  const double lt = std::log(t);
  return C * std::pow(std::log(lt) / lt, 2.0 / 3.0);
}

double lambda_of(double t, double B, double M) {
  require_log_log(t);
  if (!(B > 0.0)) fail(ErrorCode::InvalidArgument, "B must be positive");
  if (!(M > 0.0)) fail(ErrorCode::InvalidArgument, "M must be positive");
  const double lt = std::log(t);
  return M / (std::pow(B * lt, 2.0 / 3.0) * std::cbrt(std::log(lt)));
}

AsymptoticParams make_params(const trigpoly::CosinePolynomial& p, double A, double B, double t) {
  if (!(A > 0.0)) fail(ErrorCode::InvalidArgument, "A must be positive");
  const auto m = compute_M(p);
  AsymptoticParams out{};
  out.A = A;
  out.B = B;
  out.t = t;
  out.M = m.M;
  out.C = compute_C(p, B);
  out.eta = eta_of(t, out.C);
  out.lambda = lambda_of(t, B, m.M);
  out.lambda_condition_holds = out.lambda < out.eta / 250.0;
  return out;
}

std::vector<RegionRow> region_table(const trigpoly::CosinePolynomial& p, double A, double B,
                                    std::span<const double> t_values) {
  if (!(A > 0.0)) fail(ErrorCode::InvalidArgument, "A must be positive");
  for (double t : t_values)
    if (!(t > 100.0)) fail(ErrorCode::DomainError, "region table ordinates must exceed 100, got " + std::to_string(t));
  const double M = compute_M(p).M;
  const double C = compute_C(p, B);
  std::vector<RegionRow> rows;
  rows.reserve(t_values.size());
  for (double t : t_values) {
    RegionRow row{};
    row.t = t;
    row.eta = eta_of(t, C);
    row.lambda = lambda_of(t, B, M);
    row.beta_bound = 1.0 - row.lambda;
    if (row.lambda >= row.eta / 250.0) row.flags |= kLambdaTooLarge;
    if (t <= 10000.0) row.flags |= kSmallOrdinate;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace zfr::asymptotics

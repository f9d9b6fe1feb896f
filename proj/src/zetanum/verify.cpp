#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zfr/error.hpp"
#include "zfr/zetanum.hpp"

namespace zfr::zetanum {

namespace {

void check_lemma_inputs(std::complex<double> z, double eta, double tol) {
  if (!(z.real() >= 1.25)) fail(ErrorCode::DomainError, "lemma evaluation needs Re z >= 1.25");
  if (!(eta > 0.0) || !std::isfinite(eta)) fail(ErrorCode::InvalidArgument, "eta must be positive");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
}

}  // namespace

SideValue lemma_rhs(std::complex<double> z, double eta, double tol) {
  check_lemma_inputs(z, eta, tol);
  const double line = z.real() + eta;

  // |log|zeta(s)|| <= log zeta(Re s) on the line, and
  // int_{|u|>U} cosh^{-2} = 2 (1 - tanh U) <= 4 e^{-2U}.
  const auto zline = zeta_em(line);
  const double sup_log = std::log(zline.value.real() + zline.error);
  const double U = std::max(2.0, 0.5 * std::log(4.0 * sup_log / (eta * tol)));
  const double tail = sup_log / (4.0 * eta) * 2.0 * (1.0 - std::tanh(U));

  double worst_rel = 0.0;
  auto integrand = [&](double u) {
    const auto zv = zeta_em(std::complex<double>(line, z.imag() + 2.0 * eta * u / std::numbers::pi));
    const double a = std::abs(zv.value);
    worst_rel = std::max(worst_rel, zv.error / a);
    return std::log(a);
  };
  double quad_err = 0.0;
  const double value = cosh2_weighted(integrand, eta, U, tol / 4.0, &quad_err);

  // A relative error r in |zeta| moves log|zeta| by at most r/(1-r); the
  // weight has total mass 2/(4 eta).
  const double eval_err = worst_rel / (1.0 - worst_rel) / (2.0 * eta);

  SideValue out;
  out.value = value;
  out.error_bound = tail + quad_err + eval_err;
  out.cutoff = U;
  return out;
}

VerificationReport verify_lemma(std::complex<double> z, double eta, double tol, const DirichletOptions& opts) {
  check_lemma_inputs(z, eta, tol);
  const auto lhs = lemma_lhs(z, eta, tol, opts);
  const auto rhs = lemma_rhs(z, eta, tol);
  VerificationReport r;
  r.kind = "telescoping";
  r.lhs = lhs.value;
  r.rhs = rhs.value;
  r.abs_diff = std::abs(lhs.value - rhs.value);
  r.lhs_error_bound = lhs.error_bound;
  r.rhs_error_bound = rhs.error_bound;
  r.tol = tol;
  r.margin = tol + lhs.error_bound + rhs.error_bound - r.abs_diff;
  r.pass = r.margin >= 0.0;
  r.params = {{"z_re", z.real()},
              {"z_im", z.imag()},
              {"eta", eta},
              {"truncation_n", static_cast<double>(lhs.truncation)},
              {"cutoff_u", rhs.cutoff}};
  r.note = "series evaluated on Re z >= 1.25, where Dirichlet tails admit explicit bounds";
  return r;
}

VerificationReport midpoint_bound_check(double sigma, double eta, double tol, const DirichletOptions& opts) {
  if (!(sigma >= 1.25)) fail(ErrorCode::DomainError, "midpoint check needs sigma >= 1.25");
  if (!(eta > 0.0 && eta < 1.0)) fail(ErrorCode::InvalidArgument, "midpoint check needs eta in (0, 1)");
  const auto lhs = lemma_lhs(sigma, eta, tol, opts);
  const auto zv = zeta_em(sigma + eta);
  const double zeta_val = zv.value.real();
  const double rel = zv.error / zeta_val;
  VerificationReport r;
  r.kind = "midpoint";
  r.lhs = lhs.value;
  r.rhs = std::log(zeta_val) / (2.0 * eta);
  r.abs_diff = std::abs(r.rhs - r.lhs);
  r.lhs_error_bound = lhs.error_bound;
  r.rhs_error_bound = rel / (1.0 - rel) / (2.0 * eta) + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(r.rhs);
  r.tol = tol;
  r.margin = r.rhs - r.lhs - r.lhs_error_bound - r.rhs_error_bound;
  r.pass = r.margin > 0.0;
  r.params = {{"sigma", sigma}, {"eta", eta}, {"truncation_n", static_cast<double>(lhs.truncation)}};
  r.note = "strict inequality lhs < rhs after subtracting both error bounds";
  return r;
}

VerificationReport applied_trig_sum(const trigpoly::CosinePolynomial& p, double x, double y, double tol,
                                    const DirichletOptions& opts) {
  if (!(x >= 1.25)) fail(ErrorCode::DomainError, "applied trig sum needs x >= 1.25");
  if (!std::isfinite(y)) fail(ErrorCode::InvalidArgument, "y must be finite");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  const auto nonneg_check = trigpoly::verify_nonneg(p);
  if (const auto* v = std::get_if<trigpoly::Violation>(&nonneg_check))
    fail(ErrorCode::NonnegativityFailure, "polynomial is negative at angle " + std::to_string(v->angle));

  double abs_b = 0.0;
  for (double b : p.coeffs()) abs_b += std::abs(b);
  const std::size_t N = dirichlet_truncation(x, 0.49 * tol / abs_b, opts);

  // Dirichlet side: one series per harmonic.
  double lhs = 0.0, lhs_err = 0.0;
  for (std::size_t j = 0; j <= p.degree(); ++j) {
    if (p[j] == 0.0) continue;
    const auto v = neg_zeta_logderiv_at(std::complex<double>(x, static_cast<double>(j) * y), N, opts);
    lhs += p[j] * v.value.real();
    lhs_err += std::abs(p[j]) * v.error_bound;
  }

  // Sieve side: polynomial evaluated at y log n, one pass over prime powers.
  const auto list = shared_prime_powers(N, opts.max_n);
  long double rhs = 0.0L;
  double abs_rhs = 0.0;
  for (const auto& e : list->entries()) {
    if (e.n > N) break;
    const double term = e.log_p * std::exp(-x * e.log_n) * p(y * e.log_n);
    rhs += term;
    abs_rhs += std::abs(term);
  }
  const double rhs_err = abs_b * dirichlet_tail_bound(x, N, list->psi(N)) +
                         abs_rhs * std::numeric_limits<double>::epsilon() *
                             (32.0 + static_cast<double>(p.degree()) * std::abs(y) * std::log(static_cast<double>(N)));

  VerificationReport r;
  r.kind = "applied-trig";
  r.lhs = lhs;
  r.rhs = static_cast<double>(rhs);
  r.abs_diff = std::abs(r.lhs - r.rhs);
  r.lhs_error_bound = lhs_err;
  r.rhs_error_bound = rhs_err;
  r.tol = tol;
  r.margin = tol + lhs_err + rhs_err - r.abs_diff;
  const bool nonneg = r.lhs >= -lhs_err && r.rhs >= -rhs_err;
  r.pass = r.margin >= 0.0 && nonneg;
  r.params = {{"x", x}, {"y", y}, {"truncation_n", static_cast<double>(N)}, {"nonnegative", nonneg ? 1.0 : 0.0}};
  r.note = "Dirichlet-side and sieve-side sums share the truncation point";
  return r;
}

}  // namespace zfr::zetanum

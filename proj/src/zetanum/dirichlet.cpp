#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zfr/error.hpp"
#include "zfr/zetanum.hpp"

namespace zfr::zetanum {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kMinTruncation = 3;

// Lower estimate of psi(N), used only to pick a truncation point; the
// reported bound always uses the exact psi(N).
double psi_estimate(std::size_t N) {
  if (N < 41) return -1.0;
  const double x = static_cast<double>(N);
  return x * (1.0 - 1.0 / std::log(x));
}

// Neumaier-compensated complex accumulator.
struct CompensatedSum {
  double re = 0.0, re_c = 0.0, im = 0.0, im_c = 0.0;
  static void add(double& s, double& c, double v) {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  void add(double vr, double vi) {
    add(re, re_c, vr);
    add(im, im_c, vi);
  }
  std::complex<double> value() const { return {re + re_c, im + im_c}; }
};

void check_series_domain(std::complex<double> s) {
  if (!(s.real() >= 1.1) || !std::isfinite(s.imag()))
    fail(ErrorCode::DomainError, "Dirichlet series evaluation needs Re s >= 1.1, got " + std::to_string(s.real()));
}

}  // namespace

double dirichlet_tail_bound(double sigma, std::size_t N, double psi_N) {
  N = std::max(N, kMinTruncation);
  const double a = sigma - 1.0;
  const double x = static_cast<double>(N);
  const double p = std::pow(x, -a);
  double bound = p * (std::log(x) / a + 1.0 / (a * a));
  if (psi_N >= 0.0) bound = std::min(bound, kChebyshevPsiConstant * sigma * p / a - psi_N * p / x);
  return bound * (1.0 + 1e-12);
}

std::size_t dirichlet_truncation(double sigma, double tol, const DirichletOptions& opts) {
  if (!(sigma > 1.0)) fail(ErrorCode::DomainError, "tail bound requires sigma > 1");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  auto ok = [&](std::size_t n) { return dirichlet_tail_bound(sigma, n, psi_estimate(n)) <= tol; };
  std::size_t hi = 16;
  while (!ok(hi)) {
    if (hi >= opts.max_n)
      fail(ErrorCode::CapacityError, "tail bound " + std::to_string(tol) + " at sigma " + std::to_string(sigma) +
                                         " needs more than " + std::to_string(opts.max_n) + " terms");
    hi = std::min(opts.max_n, 2 * hi);
  }
  std::size_t lo = kMinTruncation - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

SeriesValue neg_zeta_logderiv_at(std::complex<double> s, std::size_t N, const DirichletOptions& opts) {
  check_series_domain(s);
  N = std::max(N, kMinTruncation);
  const auto list = shared_prime_powers(N, opts.max_n);
  const double sigma = s.real(), t = s.imag();
  CompensatedSum sum;
  double abs_sum = 0.0;
  long double psi = 0.0L;
  for (const auto& e : list->entries()) {
    if (e.n > N) break;
    const double mag = e.log_p * std::exp(-sigma * e.log_n);
    const double ph = t * e.log_n;
    sum.add(mag * std::cos(ph), -mag * std::sin(ph));
    abs_sum += mag;
    psi += e.log_p;
  }
  const double rounding = abs_sum * kEps * (16.0 + std::abs(t) * std::log(static_cast<double>(N)));
  return {sum.value(), dirichlet_tail_bound(sigma, N, static_cast<double>(psi)) + rounding, N};
}

SeriesValue neg_zeta_logderiv(std::complex<double> s, double tol, const DirichletOptions& opts) {
  check_series_domain(s);
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  // Leave a sliver of the budget for the rounding allowance.
  const std::size_t N = dirichlet_truncation(s.real(), 0.99 * tol, opts);
  return neg_zeta_logderiv_at(s, N, opts);
}

namespace {

// sum_{k>=1} T(N, sigma + 2k eta): tail bound of the rearranged k-sum.
double shifted_tail_sum(double sigma, double eta, std::size_t N, double psi_N) {
  const double ratio = std::pow(static_cast<double>(std::max(N, kMinTruncation)), -2.0 * eta);
  double total = 0.0;
  double term = 0.0;
  for (int k = 1; k < 10'000'000; ++k) {
    term = dirichlet_tail_bound(sigma + 2.0 * k * eta, N, psi_N);
    total += term;
    if (term <= 1e-18 * total) break;
  }
  // Each later term is at most `ratio` times the previous one.
  return total + term * ratio / (1.0 - ratio);
}

}  // namespace

SideValue lemma_lhs(std::complex<double> z, double eta, double tol, const DirichletOptions& opts) {
  if (!(z.real() >= 1.25)) fail(ErrorCode::DomainError, "lemma evaluation needs Re z >= 1.25");
  if (!(eta > 0.0) || !std::isfinite(eta)) fail(ErrorCode::InvalidArgument, "eta must be positive");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  const double sigma = z.real(), t = z.imag();

  // sum_k Lambda(n) n^{-z-2k eta} = Lambda(n) n^{-z} / (n^{2 eta} - 1), so the
  // whole k-sum is one Dirichlet series with a common truncation.
  auto ok = [&](std::size_t n) { return shifted_tail_sum(sigma, eta, n, psi_estimate(n)) <= 0.99 * tol; };
  std::size_t hi = 16;
  while (!ok(hi)) {
    if (hi >= opts.max_n)
      fail(ErrorCode::CapacityError, "lemma sum at tolerance " + std::to_string(tol) + " needs more than " +
                                         std::to_string(opts.max_n) + " terms");
    hi = std::min(opts.max_n, 2 * hi);
  }
  std::size_t lo = kMinTruncation - 1;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  const std::size_t N = hi;

  const auto list = shared_prime_powers(N, opts.max_n);
  CompensatedSum sum;
  double abs_sum = 0.0;
  long double psi = 0.0L;
  for (const auto& e : list->entries()) {
    if (e.n > N) break;
    const double mag = e.log_p * std::exp(-sigma * e.log_n) / std::expm1(2.0 * eta * e.log_n);
    const double ph = t * e.log_n;
    sum.add(mag * std::cos(ph), 0.0);
    abs_sum += mag;
    psi += e.log_p;
  }
  const double rounding = abs_sum * kEps * (32.0 + std::abs(t) * std::log(static_cast<double>(N)));
  SideValue out;
  out.value = sum.value().real();
  out.error_bound = shifted_tail_sum(sigma, eta, N, static_cast<double>(psi)) + rounding;
  out.truncation = N;
  out.terms = 0;
  return out;
}

SideValue lemma_lhs_termwise(std::complex<double> z, double eta, double tol, const DirichletOptions& opts) {
  if (!(z.real() >= 1.25)) fail(ErrorCode::DomainError, "lemma evaluation needs Re z >= 1.25");
  if (!(eta > 0.0) || !std::isfinite(eta)) fail(ErrorCode::InvalidArgument, "eta must be positive");
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  // |sum_n Lambda(n) n^{-s}| <= log 2 2^{-x} + log 3 3^{-x} + int_3^inf log u u^{-x} du, x = Re s;
  // consecutive k shrink this by at least 2^{-2 eta}.
  auto crude = [](double x) {
    const double a = x - 1.0;
    const double l2 = std::log(2.0), l3 = std::log(3.0);
    return l2 * std::pow(2.0, -x) + l3 * std::pow(3.0, -x) + std::pow(3.0, -a) * (l3 / a + 1.0 / (a * a));
  };
  const double q = std::pow(2.0, -2.0 * eta);
  std::size_t K = 1;
  while (crude(z.real() + 2.0 * eta * static_cast<double>(K + 1)) / (1.0 - q) > tol / 4.0) ++K;
  const double remainder = crude(z.real() + 2.0 * eta * static_cast<double>(K + 1)) / (1.0 - q);

  SideValue out;
  double value = 0.0, bound = remainder;
  for (std::size_t k = 1; k <= K; ++k) {
    const auto term = neg_zeta_logderiv(z + 2.0 * eta * static_cast<double>(k), tol / (2.0 * K), opts);
    value += term.value.real();
    bound += term.error_bound;
    out.truncation = std::max(out.truncation, term.N);
  }
  out.value = value;
  out.error_bound = bound;
  out.terms = K;
  return out;
}

}  // namespace zfr::zetanum

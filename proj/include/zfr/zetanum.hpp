#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "zfr/trigpoly.hpp"

namespace zfr::zetanum {

inline constexpr std::size_t kDefaultSieveCap = 100'000'000;

/// Rosser-Schoenfeld: psi(x) < 1.03883 x for every x > 0.
inline constexpr double kChebyshevPsiConstant = 1.03883;

/// Dense Lambda(n) for 0 <= n <= N, built by a linear sieve.
class VonMangoldtTable {
 public:
  std::size_t N() const noexcept { return values_.size() - 1; }
  /// Lambda(n); 0 for n < 2 or n > N.
  double operator()(std::size_t n) const noexcept { return n < values_.size() ? values_[n] : 0.0; }
  /// Chebyshev psi(x) = sum_{n <= x} Lambda(n), for x <= N.
  double psi(std::size_t x) const;

 private:
  friend VonMangoldtTable von_mangoldt(std::size_t, std::size_t);
  std::vector<double> values_;
};

/// Throws InvalidArgument for N < 2 and CapacityError above `cap`.
VonMangoldtTable von_mangoldt(std::size_t N, std::size_t cap = kDefaultSieveCap);

/// Process-wide read-only table covering at least N (grown on demand).
std::shared_ptr<const VonMangoldtTable> shared_von_mangoldt(std::size_t N, std::size_t cap = kDefaultSieveCap);

/// Prime powers n = p^k <= N in increasing order; the sparse view used by the
/// Dirichlet-series evaluators.
struct PrimePower {
  std::uint32_t n;
  double log_p;
  double log_n;
};

class PrimePowerList {
 public:
  explicit PrimePowerList(std::size_t N);
  std::size_t N() const noexcept { return N_; }
  const std::vector<PrimePower>& entries() const noexcept { return entries_; }
  /// Number of entries with n <= x.
  std::size_t count_upto(std::size_t x) const;
  double psi(std::size_t x) const;

 private:
  std::size_t N_;
  std::vector<PrimePower> entries_;
};

std::shared_ptr<const PrimePowerList> shared_prime_powers(std::size_t N, std::size_t cap = kDefaultSieveCap);

struct DirichletOptions {
  std::size_t max_n = kDefaultSieveCap;
};

/// Bound on sum_{n > N} Lambda(n) n^{-sigma}: the smaller of
///   N^{1-sigma} (log N / (sigma-1) + 1/(sigma-1)^2)        (Lambda(n) <= log n)
///   1.03883 sigma N^{1-sigma}/(sigma-1) - psi(N) N^{-sigma} (partial summation)
/// Pass psi_N < 0 to use only the first.
double dirichlet_tail_bound(double sigma, std::size_t N, double psi_N);

/// Smallest N (up to opts.max_n) whose tail bound is <= tol; CapacityError otherwise.
std::size_t dirichlet_truncation(double sigma, double tol, const DirichletOptions& opts = {});

struct SeriesValue {
  std::complex<double> value;
  double error_bound;  // tail bound plus summation rounding allowance
  std::size_t N;       // truncation point
};

/// sum_{n <= N} Lambda(n) n^{-s} with a rigorous tail bound <= tol.
/// Requires Re s >= 1.1 (DomainError otherwise).
SeriesValue neg_zeta_logderiv(std::complex<double> s, double tol, const DirichletOptions& opts = {});

/// Same series at a fixed truncation point.
SeriesValue neg_zeta_logderiv_at(std::complex<double> s, std::size_t N, const DirichletOptions& opts = {});

struct ZetaValue {
  std::complex<double> value;
  double error;  // absolute Euler-Maclaurin remainder bound
};

/// Euler-Maclaurin evaluation for Re s > 1, |Im s| <= 1e4.
ZetaValue zeta_em(std::complex<double> s);

/// Re cot(x + iy) = sin 2x / (cosh 2y - cos 2x); PoleError at x = k pi, y = 0.
double re_cot(double x, double y);

struct SideValue {
  double value;
  double error_bound;
  std::size_t terms = 0;       // k terms (lhs) or quadrature panels (rhs)
  std::size_t truncation = 0;  // largest Dirichlet N (lhs)
  double cutoff = 0.0;         // |u| cutoff (rhs)
};

/// sum_{k>=1} -Re zeta'/zeta(z + 2k eta) from the Dirichlet series, summed
/// over k first: sum_n Lambda(n) Re n^{-z} / (n^{2 eta} - 1). Requires Re z >= 1.25 and eta > 0.
SideValue lemma_lhs(std::complex<double> z, double eta, double tol, const DirichletOptions& opts = {});

/// The same sum taken term by term (K terms via neg_zeta_logderiv with per-term
/// tolerance tol/(2K), remainder bounded geometrically). Slower; kept as a
/// cross-check of the rearranged series.
SideValue lemma_lhs_termwise(std::complex<double> z, double eta, double tol, const DirichletOptions& opts = {});

/// (1/(4 eta)) int log|zeta(z + eta + 2 eta i u / pi)| / cosh^2 u du via zeta_em.
SideValue lemma_rhs(std::complex<double> z, double eta, double tol);

/// (1/(4 eta)) int_{-U}^{U} h(u) / cosh^2 u du, the cosh^-2 weighted average
/// used by lemma_rhs. Exposed for testing the weight.
template <class H>
double cosh2_weighted(H&& h, double eta, double U, double abs_tol, double* error = nullptr);

struct VerificationReport {
  std::string kind;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_diff = 0.0;
  double lhs_error_bound = 0.0;
  double rhs_error_bound = 0.0;
  double tol = 0.0;
  /// equality checks: tol + bounds - abs_diff; midpoint: rhs - lhs - bounds
  double margin = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> params;
  std::string note;
};

VerificationReport verify_lemma(std::complex<double> z, double eta, double tol, const DirichletOptions& opts = {});

/// sum_{k>=1} -zeta'/zeta(sigma + 2k eta) < log zeta(sigma + eta) / (2 eta),
/// reported with strictly positive margin on success.
VerificationReport midpoint_bound_check(double sigma, double eta, double tol, const DirichletOptions& opts = {});

/// Dirichlet side sum_j b_j Re(-zeta'/zeta)(x + i j y) against the sieve side
/// sum_n Lambda(n) n^{-x} p(y log n) at a common truncation.
VerificationReport applied_trig_sum(const trigpoly::CosinePolynomial& p, double x, double y, double tol,
                                    const DirichletOptions& opts = {});

}  // namespace zfr::zetanum

#include "zfr/quadrature.hpp"

template <class H>
double zfr::zetanum::cosh2_weighted(H&& h, double eta, double U, double abs_tol, double* error) {
  auto r = quad::adaptive_gk15(
      [&](double u) {
        const double c = std::cosh(u);
        return h(u) / (c * c);
      },
      -U, U, abs_tol * 4.0 * eta);
  if (error) *error = r.error / (4.0 * eta);
  return r.value / (4.0 * eta);
}

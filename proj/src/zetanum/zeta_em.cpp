#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zfr/error.hpp"
#include "zfr/zetanum.hpp"

namespace zfr::zetanum {

namespace {

// B_{2k} / (2k)!, k = 1..30
constexpr std::array<double, 30> kBernoulliOverFactorial = {
    0.083333333333333333333,    -0.0013888888888888888889,  0.000033068783068783068783,
    -8.2671957671957671958e-7,  2.0876756987868098979e-8,   -5.2841901386874931848e-10,
    1.3382536530684678833e-11,  -3.3896802963225828668e-13, 8.5860620562778445641e-15,
    -2.174868698558061873e-16,  5.5090028283602295152e-18,  -1.3954464685812523341e-19,
    3.5347070396294674717e-21,  -8.9535174270375468504e-23, 2.2679524523376830603e-24,
    -5.7447906688722024453e-26, 1.4551724756148649019e-27,  -3.6859949406653101782e-29,
    9.336734257095044672e-31,   -2.3650224157006299346e-32, 5.9906717624821343047e-34,
    -1.5174548844682902617e-35, 3.8437581254541882322e-37,  -9.7363530726466910353e-39,
    2.4662470442006809571e-40,  -6.2470767418207436931e-42, 1.5824030244644914298e-43,
    -4.0082736859489359685e-45, 1.0153075855569556312e-46,  -2.5718041582418717499e-48,
};

constexpr double kMaxImag = 1e4;

}  // namespace

ZetaValue zeta_em(std::complex<double> s) {
  const double sigma = s.real(), t = s.imag();
  if (!(sigma > 1.0) || !std::isfinite(sigma) || !(std::abs(t) <= kMaxImag))
    fail(ErrorCode::DomainError, "zeta_em needs Re s > 1 and |Im s| <= 1e4");

  const std::size_t N = static_cast<std::size_t>(std::ceil(std::abs(s) / 2.0)) + 10;
  const double logN = std::log(static_cast<double>(N));

  std::complex<double> head(0.0, 0.0);
  double abs_head = 0.0;
  for (std::size_t n = N - 1; n >= 1; --n) {
    const auto term = std::exp(-s * std::log(static_cast<double>(n)));
    head += term;
    abs_head += std::abs(term);
  }

  const auto N_pow = std::exp(-s * logN);  // N^{-s}
  const double Nd = static_cast<double>(N);
  std::complex<double> sum = head + N_pow * Nd / (s - 1.0) + 0.5 * N_pow;

  // T_k = B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
  std::complex<double> poch = s;
  std::complex<double> npow = N_pow / Nd;
  double error = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    const auto term = kBernoulliOverFactorial[k] * poch * npow;
    const double kk = static_cast<double>(k + 1);
    if (std::abs(term) <= 1e-17 * std::abs(sum) && k > 0) {
      // Remainder after the previous term is bounded by this one times
      // |s + 2k - 1| / (sigma + 2k - 1).
      error = std::abs(term) * std::abs(s + 2.0 * kk - 1.0) / (sigma + 2.0 * kk - 1.0);
      break;
    }
    sum += term;
    poch *= (s + 2.0 * kk - 1.0) * (s + 2.0 * kk);
    npow /= Nd * Nd;
  }
  if (!std::isfinite(error))
    fail(ErrorCode::DomainError, "Euler-Maclaurin series did not converge for this argument");
  error += 8.0 * std::numeric_limits<double>::epsilon() * (abs_head + std::abs(sum));
  return {sum, error};
}

double re_cot(double x, double y) {
  const double sx = std::sin(x);
  if (y == 0.0 && std::abs(sx) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
    fail(ErrorCode::PoleError, "cot has a pole at x = k pi, y = 0");
  const double sy = std::sinh(y);
  // cosh 2y - cos 2x = 2 (sinh^2 y + sin^2 x), without cancellation.
  return std::sin(2.0 * x) / (2.0 * (sy * sy + sx * sx));
}

}  // namespace zfr::zetanum

#include "zfr/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "zfr/error.hpp"

namespace zfr::trigpoly {

namespace {

constexpr double kGoldenWidth = 1e-12;

// Upper bound on the rounding error of eval_poly for this coefficient set.
double rounding_bound(std::span<const double> b) {
  double abs_sum = 0.0;
  for (double x : b) abs_sum += std::abs(x);
  return 8.0 * static_cast<double>(b.size() + 1) * std::numeric_limits<double>::epsilon() * abs_sum;
}

double golden_min(const CosinePolynomial& p, double lo, double hi, double& fmin) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = p(x1);
  double f2 = p(x2);
  while (hi - lo > kGoldenWidth) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = p(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = p(x2);
    }
  }
  const double x = 0.5 * (lo + hi);
  fmin = p(x);
  return x;
}

}  // namespace

CosinePolynomial::CosinePolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) fail(ErrorCode::InvalidArgument, "cosine polynomial needs at least one coefficient");
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (!std::isfinite(coeffs_[j]))
      fail(ErrorCode::InvalidArgument, "coefficient b_" + std::to_string(j) + " is not finite");
  }
}

double CosinePolynomial::sum_from(std::size_t first) const noexcept {
  double s = 0.0;
  for (std::size_t j = first; j < coeffs_.size(); ++j) s += coeffs_[j];
  return s;
}

std::vector<std::size_t> CosinePolynomial::zero_interior_coeffs() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 2; j < coeffs_.size(); ++j)
    if (coeffs_[j] == 0.0) out.push_back(j);
  return out;
}

double CosinePolynomial::operator()(double angle) const noexcept {
  double s = 0.0;
  for (std::size_t j = coeffs_.size(); j-- > 0;) s += coeffs_[j] * std::cos(static_cast<double>(j) * angle);
  return s;
}

void ProductForm::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) fail(ErrorCode::InvalidArgument, "product form scale must be positive");
  if (multiplicity < 2 || multiplicity % 2 != 0)
    fail(ErrorCode::InvalidArgument, "root multiplicity must be an even integer >= 2");
  for (double a : roots)
    if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorCode::InvalidArgument, "product form roots must be positive");
}

double ProductForm::operator()(double angle) const noexcept {
  const double c = std::cos(angle);
  double v = scale;
  if (half_angle_factor) v *= 1.0 + c;
  for (double a : roots) v *= std::pow(a + c, multiplicity);
  return v;
}

double eval_poly(const CosinePolynomial& p, double angle) noexcept { return p(angle); }

std::vector<double> power_to_cosine(std::span<const double> power_coeffs) {
  if (power_coeffs.empty()) fail(ErrorCode::InvalidArgument, "power_to_cosine: empty coefficient list");
  const std::size_t n = power_coeffs.size();
  std::vector<double> acc{power_coeffs[n - 1]};
  for (std::size_t i = n - 1; i-- > 0;) {
    std::vector<double> next(acc.size() + 1, 0.0);
    for (std::size_t j = 0; j < acc.size(); ++j) {
      if (j == 0) {
        next[1] += acc[0];
      } else {
        next[j - 1] += 0.5 * acc[j];
        next[j + 1] += 0.5 * acc[j];
      }
    }
    next[0] += power_coeffs[i];
    acc = std::move(next);
  }
  return acc;
}

CosinePolynomial expand_product(const ProductForm& form, std::size_t max_degree) {
  form.validate();
  if (form.degree() > max_degree)
    fail(ErrorCode::DegreeOverflow,
         "product form degree " + std::to_string(form.degree()) + " exceeds maximum " + std::to_string(max_degree));

  // Power basis in c = cos t.
  std::vector<double> power{form.scale};
  auto times_linear = [&power](double a) {
    std::vector<double> next(power.size() + 1, 0.0);
    for (std::size_t i = 0; i < power.size(); ++i) {
      next[i] += a * power[i];
      next[i + 1] += power[i];
    }
    power = std::move(next);
  };
  if (form.half_angle_factor) times_linear(1.0);
  for (double a : form.roots)
    for (int k = 0; k < form.multiplicity; ++k) times_linear(a);

  auto b = power_to_cosine(power);
  return CosinePolynomial(std::move(b));
}

NonnegResult verify_nonneg(const CosinePolynomial& p, double tol, std::size_t grid_points) {
  if (!(tol >= 0.0)) fail(ErrorCode::InvalidArgument, "verify_nonneg: tol must be >= 0");
  grid_points = std::max<std::size_t>(grid_points, 3);
  const auto b = p.coeffs();
  const std::size_t d = p.degree();
  const double h = std::numbers::pi / static_cast<double>(grid_points - 1);

  std::vector<double> values(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = h * static_cast<double>(i);
    const double c = std::cos(x);
    double prev = 1.0, cur = c;
    double s = b[0];
    if (d >= 1) s += b[1] * c;
    for (std::size_t j = 2; j <= d; ++j) {
      const double nxt = 2.0 * c * cur - prev;
      prev = cur;
      cur = nxt;
      s += b[j] * cur;
    }
    values[i] = s;
  }

  double best_x = 0.0;
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_points; ++i) {
    const bool left_ok = i == 0 || values[i] <= values[i - 1];
    const bool right_ok = i + 1 == grid_points || values[i] <= values[i + 1];
    if (!left_ok || !right_ok) continue;
    const double lo = i == 0 ? 0.0 : h * static_cast<double>(i - 1);
    const double hi = i + 1 == grid_points ? std::numbers::pi : h * static_cast<double>(i + 1);
    double v = 0.0;
    const double x = golden_min(p, lo, hi, v);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }

  // 0 and pi are exact critical points of an even 2pi-periodic function;
  // an interior point must beat them by more than rounding noise.
  const double slack = rounding_bound(b);
  const double at_zero = p(0.0);
  const double at_pi = p(std::numbers::pi);
  const bool pi_first = at_pi <= at_zero;
  const double end_v = pi_first ? at_pi : at_zero;
  const double end_x = pi_first ? std::numbers::pi : 0.0;
  if (end_v <= best_v + slack) {
    best_v = end_v;
    best_x = end_x;
  }

  if (best_v >= -tol) return Certificate{best_x, best_v};
  return Violation{best_x, best_v};
}

}  // namespace zfr::trigpoly

#pragma once

#include <complex>
#include <optional>

namespace zfr::mollifier {

/// sin^2(theta) - ratio * (1 - theta cot theta).
double theta_residual(double theta, double ratio) noexcept;

/// Unique root of the shape equation on (0, pi/2). Requires b1/b0 in (1, 3);
/// throws RatioOutOfRange otherwise and MultipleRoots if the bracket scan
/// sees more than one sign change.
double solve_theta(double b0, double b1);

/// g(u) = (cos(u tan theta) - cos theta) sec^2 theta on |u| < theta/tan theta, else 0.
double g_eval(double theta, double u) noexcept;

/// (g*g)(u) by 24-point Gauss-Legendre over the support overlap. Defined for
/// any real u (the result is even in u).
double w_eval(double theta, double u) noexcept;

double w0_closed(double theta) noexcept;
double F0_closed(double theta) noexcept;
double negWprime0_closed(double theta) noexcept;

struct TransformValue {
  std::complex<double> value;
  double error;  // quadrature error estimate
};

/// Laplace transform of w over its support [0, 2 theta / tan theta].
TransformValue W_eval(double theta, std::complex<double> s);

class MollifierShape {
 public:
  /// Throws InvalidArgument unless theta is in (0, pi/2).
  explicit MollifierShape(double theta);
  static MollifierShape from_coefficients(double b0, double b1);

  double theta() const noexcept { return theta_; }
  double g_support() const noexcept { return g_support_; }
  double w_support() const noexcept { return 2.0 * g_support_; }
  double w0() const noexcept { return w0_; }
  double F0val() const noexcept { return F0val_; }
  double negWp0() const noexcept { return negWp0_; }

  std::optional<double> lambda() const noexcept { return lambda_; }
  /// Returns a copy with the scaling attached; throws InvalidArgument if lambda <= 0.
  MollifierShape with_lambda(double lambda) const;
  /// Throws InvalidArgument if lambda has not been attached.
  double require_lambda() const;

  /// f(0) = lambda * w(0).
  double f0() const { return require_lambda() * w0_; }

 private:
  double theta_;
  double g_support_;
  double w0_;
  double F0val_;
  double negWp0_;
  std::optional<double> lambda_;
};

/// f(u) = lambda e^{lambda u} w(lambda u) for u >= 0.
double f_eval(const MollifierShape& shape, double u);

/// F(z) = W(z / lambda - 1).
std::complex<double> F_eval(const MollifierShape& shape, std::complex<double> z);

/// F0(z) = F(z) - f(0)/z; throws DivisionByZero at z = 0.
std::complex<double> F0_eval(const MollifierShape& shape, std::complex<double> z);

}  // namespace zfr::mollifier

#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace zfr::trigpoly {

inline constexpr std::size_t kMaxDegree = 32;
inline constexpr std::size_t kDefaultGridPoints = 200'001;
inline constexpr double kDefaultNonnegTol = 1e-12;

/// p(t) = sum_{j=0}^{d} b_j cos(j t). Coefficients are stored as given; no
/// normalization is applied.
class CosinePolynomial {
 public:
  /// Throws InvalidArgument on an empty or non-finite coefficient list.
  explicit CosinePolynomial(std::vector<double> coeffs);

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t j) const noexcept { return j < coeffs_.size() ? coeffs_[j] : 0.0; }

  double sum_from(std::size_t first) const noexcept;

  /// Indices j >= 2 whose coefficient is exactly zero (admitted, but reported).
  std::vector<std::size_t> zero_interior_coeffs() const;

  double operator()(double angle) const noexcept;

 private:
  std::vector<double> coeffs_;
};

/// scale * (1 + cos t)^{half} * prod_i (a_i + cos t)^{multiplicity}
struct ProductForm {
  double scale = 1.0;
  bool half_angle_factor = false;
  std::vector<double> roots;
  int multiplicity = 2;

  std::size_t degree() const noexcept {
    return roots.size() * static_cast<std::size_t>(multiplicity) + (half_angle_factor ? 1 : 0);
  }
  /// Throws InvalidArgument unless scale > 0, every root > 0 and multiplicity is even >= 2.
  void validate() const;
  double operator()(double angle) const noexcept;
};

double eval_poly(const CosinePolynomial& p, double angle) noexcept;

/// Coefficients of a polynomial in c = cos t (ascending powers) rewritten in
/// the cosine basis. Horner's scheme where multiplication by c acts as
/// cos t * cos jt = (cos (j-1)t + cos (j+1)t) / 2.
std::vector<double> power_to_cosine(std::span<const double> power_coeffs);

/// Throws DegreeOverflow when form.degree() exceeds max_degree.
CosinePolynomial expand_product(const ProductForm& form, std::size_t max_degree = kMaxDegree);

struct Certificate {
  double min_angle;
  double min_value;
};

struct Violation {
  double angle;
  double value;
};

using NonnegResult = std::variant<Certificate, Violation>;

/// Grid scan of [0, pi] with golden-section refinement of every local minimum.
NonnegResult verify_nonneg(const CosinePolynomial& p, double tol = kDefaultNonnegTol,
                           std::size_t grid_points = kDefaultGridPoints);

inline bool is_certificate(const NonnegResult& r) noexcept { return std::holds_alternative<Certificate>(r); }

}  // namespace zfr::trigpoly

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zfr/trigpoly.hpp"

namespace zfr::asymptotics {

// Korobov-Vinogradov constants used when none are supplied. The published
// values carry a known literature erratum; both are overridable.
inline constexpr double kDefaultA = 76.2;
inline constexpr double kDefaultB = 4.45;
inline constexpr double kDefaultTableStart = 3e12;

struct MValue {
  double M;
  double theta;
};

/// M = b0 cos^2(theta) / ((3/4) S1 sqrt(S0))^{2/3}, S0 = sum_{j>=0} b_j,
/// S1 = sum_{j>=1} b_j. Verifies nonnegativity first (NonnegativityFailure).
MValue compute_M(const trigpoly::CosinePolynomial& p);

/// Same formula without the nonnegativity scan, for callers whose input is
/// nonnegative by construction. Checks positivity and the ratio window.
MValue compute_M_unchecked(const trigpoly::CosinePolynomial& p);

/// C = (4 S0 / (3 B S1))^{2/3}.
double compute_C(const trigpoly::CosinePolynomial& p, double B);

/// eta = C (log log t / log t)^{2/3}; DomainError for t <= e.
double eta_of(double t, double C);
/// lambda = M / ((B log t)^{2/3} (log log t)^{1/3}); DomainError for t <= e.
double lambda_of(double t, double B, double M);

struct AsymptoticParams {
  double A;
  double B;
  double t;
  double C;
  double eta;
  double lambda;
  double M;
  /// lambda < eta / 250
  bool lambda_condition_holds;
};

AsymptoticParams make_params(const trigpoly::CosinePolynomial& p, double A, double B, double t);

enum RowFlag : std::uint32_t {
  kLambdaTooLarge = 1u << 0,  // lambda >= eta / 250
  kSmallOrdinate = 1u << 1,   // t <= 10000
};

struct RegionRow {
  double t;
  double eta;
  double lambda;
  double beta_bound;  // 1 - lambda
  std::uint32_t flags;
};

/// One row per ordinate; every t must exceed 100 (DomainError otherwise).
/// A is accepted for provenance only.
std::vector<RegionRow> region_table(const trigpoly::CosinePolynomial& p, double A, double B,
                                    std::span<const double> t_values);

}  // namespace zfr::asymptotics

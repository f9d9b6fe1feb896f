#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "zfr/trigpoly.hpp"

namespace zfr::optimizer {

/// Roots of the product form published for the degree-5 optimum; injected as
/// one labelled start when searching that configuration.
inline constexpr double kPublishedDegree5Roots[2] = {0.8652559, 0.1974476};

inline constexpr double kRootLower = 0.01;  // exclusive
inline constexpr double kRootUpper = 3.0;   // inclusive

struct Candidate {
  trigpoly::CosinePolynomial poly;
  double theta;
  double M;
  std::vector<std::size_t> clamped;  // j >= 2 with b_j in [-1e-12, 0) set to 0
};

enum class RejectReason { NonPositiveB0, NonPositiveB1, RatioOutOfRange, NegativeCoefficient, Invalid };

const char* to_string(RejectReason r) noexcept;

struct Rejection {
  RejectReason reason;
  std::string detail;
};

using CandidateOutcome = std::variant<Candidate, Rejection>;

/// Expansion, feasibility checks, theta solve and M for one product form.
/// Rejections are returned, not thrown.
CandidateOutcome evaluate_candidate(const trigpoly::ProductForm& form);

struct OptimizeOptions {
  int degree = 5;
  bool half_angle_factor = true;
  int starts = 64;
  std::uint64_t seed = 0;
  double tol = 1e-10;  // simplex diameter in log-root coordinates
  int multiplicity = 2;
  bool inject_published = true;
  int max_iterations = 5000;  // per start
  unsigned threads = 0;       // 0: hardware concurrency
};

struct TraceEntry {
  int start;        // position in run order
  bool injected;    // the published-roots start
  int iterations;   // Nelder-Mead iterations used by this start
  double start_M;   // best feasible M of this start (NaN if it never became feasible)
  double best_M;    // running best after merging this start
};

struct OptimizationResult {
  trigpoly::ProductForm best_form;
  trigpoly::CosinePolynomial best_poly;
  double theta;
  double M;
  int starts_used;
  double independent_best_M;  // best over quasi-random starts only
  std::vector<std::size_t> clamped;
  std::vector<TraceEntry> trace;
};

/// Throws InvalidArgument on a bad degree/parity/start count and
/// NoFeasiblePoint when no start reaches a feasible candidate.
OptimizationResult optimize(const OptimizeOptions& options);

/// Runs both admissible parities with degree <= options.degree and returns
/// the better result (options.half_angle_factor is ignored).
OptimizationResult optimize_best_parity(const OptimizeOptions& options);

/// Objective used by the search, in log-root coordinates: -M for feasible
/// points, a positive penalty otherwise.
double search_objective(std::span<const double> log_roots, bool half_angle_factor, int multiplicity);

}  // namespace zfr::optimizer

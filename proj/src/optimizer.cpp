#include "zfr/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "zfr/asymptotics.hpp"
#include "zfr/error.hpp"

namespace zfr::optimizer {

namespace {

constexpr double kClampTol = 1e-12;
constexpr double kInitialStep = 0.2;
constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

double log_lower() { return std::log(kRootLower); }
double log_upper() { return std::log(kRootUpper); }

// Shifted Halton point for start `index`; independent of the total number of
// starts so that larger runs contain smaller ones.
std::vector<double> start_point(std::uint64_t seed, int index, std::size_t dims) {
  std::vector<double> x(dims);
  const double lo = log_lower(), hi = log_upper();
  for (std::size_t k = 0; k < dims; ++k) {
    const double shift =
        static_cast<double>(splitmix64(seed * 0x100000001b3ULL + k) >> 11) * 0x1.0p-53;
    double u = radical_inverse(static_cast<std::uint64_t>(index) + 1, kPrimes[k % std::size(kPrimes)]) + shift;
    u -= std::floor(u);
    u = std::clamp(u, 1e-6, 1.0);
    x[k] = lo + u * (hi - lo);
  }
  return x;
}

trigpoly::ProductForm form_from_log_roots(std::span<const double> x, bool half, int multiplicity) {
  trigpoly::ProductForm f;
  f.scale = 1.0;
  f.half_angle_factor = half;
  f.multiplicity = multiplicity;
  f.roots.reserve(x.size());
  for (double v : x) f.roots.push_back(std::exp(v));
  std::sort(f.roots.begin(), f.roots.end(), std::greater<>());
  return f;
}

struct SimplexOutcome {
  std::vector<double> x;
  double value;
  int iterations;
};

template <class F>
SimplexOutcome nelder_mead(F&& f, std::vector<double> x0, double tol, int max_iterations) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    pts[i + 1][i] += (x0[i] + kInitialStep <= log_upper()) ? kInitialStep : -kInitialStep;
  }
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]);

  std::vector<std::size_t> order(n + 1);
  auto sort_simplex = [&] {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    // Stable order keeps the run deterministic when values tie.
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<std::vector<double>> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      p2[i] = std::move(pts[order[i]]);
      v2[i] = vals[order[i]];
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += (pts[i][k] - pts[0][k]) * (pts[i][k] - pts[0][k]);
      d = std::max(d, std::sqrt(s));
    }
    return d;
  };
  auto along = [&](const std::vector<double>& c, const std::vector<double>& worst, double coef) {
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = c[k] + coef * (worst[k] - c[k]);
    return y;
  };

  int it = 0;
  sort_simplex();
  for (; it < max_iterations && diameter() >= tol; ++it) {
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);

    const auto xr = along(centroid, pts[n], -1.0);
    const double fr = f(xr);
    if (fr < vals[0]) {
      const auto xe = along(centroid, pts[n], -2.0);
      const double fe = f(xe);
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
    } else if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
    } else {
      const bool outside = fr < vals[n];
      const auto xc = outside ? along(centroid, pts[n], -0.5) : along(centroid, pts[n], 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, vals[n]) || (!outside && fc < vals[n])) {
        pts[n] = xc;
        vals[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[0][k] + 0.5 * (pts[i][k] - pts[0][k]);
          vals[i] = f(pts[i]);
        }
      }
    }
    sort_simplex();
  }
  return {pts[0], vals[0], it};
}

struct StartResult {
  std::optional<trigpoly::ProductForm> form;
  double M = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool injected = false;
};

bool better(const StartResult& a, const StartResult& b) {
  if (!a.form) return false;
  if (!b.form) return true;
  if (a.M != b.M) return a.M > b.M;
  return std::lexicographical_compare(a.form->roots.begin(), a.form->roots.end(), b.form->roots.begin(),
                                      b.form->roots.end());
}

void validate_options(const OptimizeOptions& o) {
  if (o.degree < 2 || o.degree > static_cast<int>(trigpoly::kMaxDegree))
    fail(ErrorCode::InvalidArgument, "degree must lie in [2, 32], got " + std::to_string(o.degree));
  if (o.multiplicity < 2 || o.multiplicity % 2 != 0)
    fail(ErrorCode::InvalidArgument, "multiplicity must be an even integer >= 2");
  const int rest = o.degree - (o.half_angle_factor ? 1 : 0);
  if (rest % o.multiplicity != 0 || rest / o.multiplicity < 1)
    fail(ErrorCode::InvalidArgument, "degree " + std::to_string(o.degree) +
                                         (o.half_angle_factor ? " with" : " without") +
                                         " the half-angle factor is not a product of root factors of multiplicity " +
                                         std::to_string(o.multiplicity));
  if (o.starts < 1) fail(ErrorCode::InvalidArgument, "starts must be >= 1");
  if (!(o.tol > 0.0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
  if (o.max_iterations < 1) fail(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
}

}  // namespace

const char* to_string(RejectReason r) noexcept {
  switch (r) {
    case RejectReason::NonPositiveB0: return "b0<=0";
    case RejectReason::NonPositiveB1: return "b1<=0";
    case RejectReason::RatioOutOfRange: return "ratio";
    case RejectReason::NegativeCoefficient: return "negative-coefficient";
    case RejectReason::Invalid: return "invalid";
  }
  return "unknown";
}

CandidateOutcome evaluate_candidate(const trigpoly::ProductForm& form) {
  std::optional<trigpoly::CosinePolynomial> poly;
  try {
    poly.emplace(trigpoly::expand_product(form));
  } catch (const Error& e) {
    return Rejection{RejectReason::Invalid, e.what()};
  }
  std::vector<double> b(poly->coeffs().begin(), poly->coeffs().end());
  if (b.size() < 2 || !(b[0] > 0.0)) return Rejection{RejectReason::NonPositiveB0, "b0 <= 0"};
  if (!(b[1] > 0.0)) return Rejection{RejectReason::NonPositiveB1, "b1 <= 0"};
  const double ratio = b[1] / b[0];
  if (!(ratio > 1.0 && ratio < 3.0))
    return Rejection{RejectReason::RatioOutOfRange, "b1/b0 = " + std::to_string(ratio) + " outside (1, 3)"};
  std::vector<std::size_t> clamped;
  for (std::size_t j = 2; j < b.size(); ++j) {
    if (b[j] < -kClampTol)
      return Rejection{RejectReason::NegativeCoefficient, "b" + std::to_string(j) + " < 0"};
    if (b[j] < 0.0) {
      b[j] = 0.0;
      clamped.push_back(j);
    }
  }
  trigpoly::CosinePolynomial p(std::move(b));
  try {
    const auto m = asymptotics::compute_M_unchecked(p);
    return Candidate{std::move(p), m.theta, m.M, std::move(clamped)};
  } catch (const Error& e) {
    return Rejection{e.code() == ErrorCode::RatioOutOfRange ? RejectReason::RatioOutOfRange : RejectReason::Invalid,
                     e.what()};
  }
}

double search_objective(std::span<const double> log_roots, bool half_angle_factor, int multiplicity) {
  double outside = 0.0;
  for (double v : log_roots) {
    if (!(v > log_lower())) outside += log_lower() - v + 1e-3;
    if (v > log_upper()) outside += v - log_upper();
  }
  if (outside > 0.0) return 10.0 + outside;
  const auto outcome = evaluate_candidate(form_from_log_roots(log_roots, half_angle_factor, multiplicity));
  if (const auto* c = std::get_if<Candidate>(&outcome)) return -c->M;
  const auto& rej = std::get<Rejection>(outcome);
  if (rej.reason == RejectReason::RatioOutOfRange) {
    // Penalty grows with the distance of the ratio from the window.
    const auto b = trigpoly::expand_product(form_from_log_roots(log_roots, half_angle_factor, multiplicity));
    const double ratio = b[1] / b[0];
    return 1.0 + (ratio <= 1.0 ? 1.0 - ratio : ratio - 3.0);
  }
  return 5.0;
}

OptimizationResult optimize(const OptimizeOptions& options) {
  validate_options(options);
  const bool half = options.half_angle_factor;
  const std::size_t dims = static_cast<std::size_t>((options.degree - (half ? 1 : 0)) / options.multiplicity);

  std::vector<std::vector<double>> starts;
  std::vector<bool> injected;
  if (options.inject_published && half && options.multiplicity == 2 && options.degree == 5) {
    starts.push_back({std::log(kPublishedDegree5Roots[0]), std::log(kPublishedDegree5Roots[1])});
    injected.push_back(true);
  }
  for (int i = 0; i < options.starts; ++i) {
    starts.push_back(start_point(options.seed, i, dims));
    injected.push_back(false);
  }

  std::vector<StartResult> results(starts.size());
  auto run_start = [&](std::size_t i) {
    auto objective = [&](const std::vector<double>& x) { return search_objective(x, half, options.multiplicity); };
    const auto nm = nelder_mead(objective, starts[i], options.tol, options.max_iterations);
    StartResult r;
    r.iterations = nm.iterations;
    r.injected = injected[i];
    if (nm.value < 0.0) {
      r.form = form_from_log_roots(nm.x, half, options.multiplicity);
      r.M = -nm.value;
    }
    results[i] = std::move(r);
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(starts.size()));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < starts.size(); i = next.fetch_add(1)) run_start(i);
      });
  }

  StartResult best;
  double independent = -std::numeric_limits<double>::infinity();
  std::vector<TraceEntry> trace;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (better(r, best)) best = r;
    if (r.form && !r.injected) independent = std::max(independent, r.M);
    trace.push_back({static_cast<int>(i), r.injected, r.iterations, r.M,
                     best.form ? best.M : std::numeric_limits<double>::quiet_NaN()});
  }
  if (!best.form) fail(ErrorCode::NoFeasiblePoint, "no start reached a feasible product form");

  auto outcome = evaluate_candidate(*best.form);
  auto& cand = std::get<Candidate>(outcome);
  return OptimizationResult{*best.form,      std::move(cand.poly), cand.theta, cand.M, static_cast<int>(starts.size()),
                            independent,     std::move(cand.clamped), std::move(trace)};
}

OptimizationResult optimize_best_parity(const OptimizeOptions& options) {
  std::optional<OptimizationResult> best;
  for (bool half : {false, true}) {
    OptimizeOptions o = options;
    o.half_angle_factor = half;
    int d = options.degree;
    while (d >= 2 && (d - (half ? 1 : 0)) % o.multiplicity != 0) --d;
    if (d < 2 || d - (half ? 1 : 0) < o.multiplicity) continue;
    o.degree = d;
    try {
      auto r = optimize(o);
      if (!best || r.M > best->M) best = std::move(r);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFeasiblePoint) throw;
    }
  }
  if (!best) fail(ErrorCode::NoFeasiblePoint, "no admissible parity produced a feasible product form");
  return std::move(*best);
}

}  // namespace zfr::optimizer

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <variant>
#include <vector>

#include "zfr/asymptotics.hpp"
#include "zfr/error.hpp"
#include "zfr/optimizer.hpp"

using namespace zfr;
using namespace zfr::optimizer;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected zfr::Error");
  return ErrorCode::InvalidArgument;
}

trigpoly::ProductForm form(std::vector<double> roots, bool half) {
  trigpoly::ProductForm f;
  f.roots = std::move(roots);
  f.half_angle_factor = half;
  return f;
}

}  // namespace

TEST_CASE("published roots evaluate to the frozen M") {
  const auto out = evaluate_candidate(form({0.8652559, 0.1974476}, true));
  REQUIRE(std::holds_alternative<Candidate>(out));
  const auto& c = std::get<Candidate>(out);
  CHECK(c.M == doctest::Approx(0.055127080819480316982525).epsilon(1e-12));
  CHECK(c.theta == doctest::Approx(1.128993984411779009686721).epsilon(1e-12));
  CHECK(c.clamped.empty());
}

TEST_CASE("infeasible forms are rejected with a reason") {
  const auto low = evaluate_candidate(form({3.0}, false));  // ratio 6 / 9.5
  REQUIRE(std::holds_alternative<Rejection>(low));
  CHECK(std::get<Rejection>(low).reason == RejectReason::RatioOutOfRange);
  const auto tiny = evaluate_candidate(form({0.02, 0.02, 0.02}, false));  // ratio 0.24
  REQUIRE(std::holds_alternative<Rejection>(tiny));
  CHECK(std::get<Rejection>(tiny).reason == RejectReason::RatioOutOfRange);
  const auto bad = evaluate_candidate(form({-1.0}, false));
  REQUIRE(std::holds_alternative<Rejection>(bad));
  CHECK(std::get<Rejection>(bad).reason == RejectReason::Invalid);
  CHECK(std::string(to_string(RejectReason::RatioOutOfRange)).size() > 0);
}

TEST_CASE("triple root at 3 is feasible") {
  const auto out = evaluate_candidate(form({3.0, 3.0, 3.0}, false));
  REQUIRE(std::holds_alternative<Candidate>(out));
}

TEST_CASE("option validation") {
  OptimizeOptions o;
  o.degree = 1;
  CHECK(code_of([&] { optimize(o); }) == ErrorCode::InvalidArgument);
  o.degree = 33;
  CHECK(code_of([&] { optimize(o); }) == ErrorCode::InvalidArgument);
  o.degree = 4;
  o.half_angle_factor = true;
  CHECK(code_of([&] { optimize(o); }) == ErrorCode::InvalidArgument);
  o.half_angle_factor = false;
  o.starts = 0;
  CHECK(code_of([&] { optimize(o); }) == ErrorCode::InvalidArgument);
  o.starts = 4;
  o.multiplicity = 3;
  CHECK(code_of([&] { optimize(o); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("degree 2 recovers at least the classical polynomial") {
  OptimizeOptions o;
  o.degree = 2;
  o.half_angle_factor = false;
  o.starts = 16;
  const auto r = optimize(o);
  CHECK(r.M >= 0.02497996499919501 - 1e-12);
  REQUIRE(r.best_form.roots.size() == 1);
  CHECK(r.best_form.roots[0] > kRootLower);
  CHECK(r.best_form.roots[0] <= kRootUpper);
  CHECK(r.M == doctest::Approx(asymptotics::compute_M(r.best_poly).M).epsilon(1e-13));
}

TEST_CASE("degree 5 search: trace, injection and thread-count independence") {
  OptimizeOptions o;
  o.degree = 5;
  o.starts = 16;
  o.threads = 1;
  const auto a = optimize(o);
  o.threads = 4;
  const auto b = optimize(o);
  CHECK(a.M == b.M);
  CHECK(a.best_form.roots == b.best_form.roots);
  CHECK(a.starts_used == 17);
  REQUIRE(a.trace.size() == 17);
  CHECK(std::count_if(a.trace.begin(), a.trace.end(), [](const TraceEntry& t) { return t.injected; }) == 1);
  for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i].best_M >= a.trace[i - 1].best_M);
  CHECK(a.trace.back().best_M == a.M);
  CHECK(a.M == doctest::Approx(0.055127).epsilon(2e-4));
  CHECK(a.independent_best_M <= a.M);

  o.inject_published = false;
  const auto c = optimize(o);
  CHECK(c.starts_used == 16);
  CHECK(std::none_of(c.trace.begin(), c.trace.end(), [](const TraceEntry& t) { return t.injected; }));
}

TEST_CASE("different seeds reach the same optimum") {
  OptimizeOptions o;
  o.degree = 5;
  o.starts = 24;
  o.inject_published = false;
  o.seed = 12345;
  CHECK(optimize(o).M == doctest::Approx(0.0551270808).epsilon(1e-8));
}

TEST_CASE("search objective signs") {
  const double feasible[] = {std::log(0.8652559), std::log(0.1974476)};
  CHECK(search_objective(feasible, true, 2) == doctest::Approx(-0.055127080819480316982525).epsilon(1e-12));
  const double outside[] = {std::log(5.0), std::log(0.2)};
  CHECK(search_objective(outside, true, 2) > 0.0);
  const double low_ratio[] = {std::log(3.0)};
  CHECK(search_objective(low_ratio, false, 2) > 0.0);
}

TEST_CASE("best parity at degree 4") {
  OptimizeOptions o;
  o.degree = 4;
  o.starts = 32;
  const auto r = optimize_best_parity(o);
  CHECK(std::abs(r.M - 0.05507) <= 1e-4);
  CHECK_FALSE(r.best_form.half_angle_factor);
}

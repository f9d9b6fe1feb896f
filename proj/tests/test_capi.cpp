#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "zfr/zfr.h"

TEST_CASE("status names and version") {
  CHECK(std::string(zfr_status_name(ZFR_OK)) == "ok");
  CHECK(std::string(zfr_status_name(ZFR_E_CAPACITY)) == "capacity-error");
  CHECK(std::string(zfr_status_name(static_cast<zfr_status>(1234))) == "unknown-status");
  CHECK(std::strlen(zfr_version()) > 0);
}

TEST_CASE("polynomial lifecycle and errors") {
  zfr_poly* p = nullptr;
  CHECK(zfr_poly_create(nullptr, 0, &p) == ZFR_E_INVALID_ARGUMENT);
  CHECK(std::string(zfr_last_error_message()).size() > 0);
  const double b[] = {3.0, 4.0, 1.0};
  REQUIRE(zfr_poly_create(b, 3, &p) == ZFR_OK);
  CHECK(std::string(zfr_last_error_message()).empty());
  CHECK(zfr_poly_degree(p) == 2);

  double small[2];
  std::size_t needed = 0;
  CHECK(zfr_poly_coeffs(p, small, 2, &needed) == ZFR_E_BUFFER_TOO_SMALL);
  CHECK(needed == 3);
  double out[3];
  CHECK(zfr_poly_coeffs(p, out, 3, &needed) == ZFR_OK);
  CHECK(out[1] == 4.0);

  double v = 0.0;
  CHECK(zfr_poly_eval(p, 0.0, &v) == ZFR_OK);
  CHECK(v == doctest::Approx(8.0));

  zfr_nonneg_result nn;
  CHECK(zfr_poly_verify_nonneg(p, 0.0, 0, &nn) == ZFR_OK);
  CHECK(nn.nonnegative == 1);
  CHECK(nn.angle == doctest::Approx(3.141592653589793).epsilon(1e-9));

  double M = 0.0, theta = 0.0, C = 0.0;
  CHECK(zfr_compute_M(p, &M, &theta) == ZFR_OK);
  CHECK(M == doctest::Approx(0.02497996499919501872).epsilon(1e-14));
  CHECK(zfr_compute_C(p, 4.45, &C) == ZFR_OK);
  CHECK(C == doctest::Approx(0.6125372045286300868).epsilon(1e-14));
  CHECK(zfr_compute_C(p, -1.0, &C) == ZFR_E_INVALID_ARGUMENT);
  zfr_poly_destroy(p);
  zfr_poly_destroy(nullptr);

  const double neg[] = {1.0, 2.0};
  REQUIRE(zfr_poly_create(neg, 2, &p) == ZFR_OK);
  CHECK(zfr_compute_M(p, &M, &theta) == ZFR_E_NONNEGATIVITY);
  zfr_poly_destroy(p);

  const double roots[17] = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  CHECK(zfr_poly_from_product(1.0, 0, roots, 17, 2, &p) == ZFR_E_DEGREE_OVERFLOW);
}

TEST_CASE("scalar helpers map error codes") {
  double x = 0.0;
  CHECK(zfr_solve_theta(1.0, 3.5, &x) == ZFR_E_RATIO_OUT_OF_RANGE);
  CHECK(zfr_solve_theta(3.0, 4.0, &x) == ZFR_OK);
  CHECK(x == doctest::Approx(1.3689376527419395).epsilon(1e-14));
  CHECK(zfr_eta(2.0, 1.0, &x) == ZFR_E_DOMAIN);
  CHECK(zfr_re_cot(0.0, 0.0, &x) == ZFR_E_POLE);
  CHECK(zfr_lambda(3e12, 4.45, 0.055127, &x) == ZFR_OK);
  CHECK(x == doctest::Approx(0.00145059815501979766).epsilon(1e-13));
  CHECK(zfr_psi(100, &x) == ZFR_OK);
  CHECK(x == doctest::Approx(94.045311229357392).epsilon(1e-13));
  CHECK(zfr_solve_theta(3.0, 4.0, nullptr) == ZFR_E_INVALID_ARGUMENT);
}

TEST_CASE("mollifier handle") {
  zfr_mollifier* m = nullptr;
  CHECK(zfr_mollifier_create(2.0, &m) == ZFR_E_INVALID_ARGUMENT);
  REQUIRE(zfr_mollifier_create(0.9, &m) == ZFR_OK);
  zfr_mollifier_info info;
  CHECK(zfr_mollifier_info_get(m, &info) == ZFR_OK);
  CHECK(info.w0 == doctest::Approx(0.71617817043554).epsilon(1e-12));
  CHECK(info.has_lambda == 0);
  double f = 0.0;
  CHECK(zfr_mollifier_f(m, 0.0, &f) == ZFR_E_INVALID_ARGUMENT);
  CHECK(zfr_mollifier_set_lambda(m, 0.01) == ZFR_OK);
  CHECK(zfr_mollifier_f(m, 0.0, &f) == ZFR_OK);
  CHECK(f == doctest::Approx(0.01 * info.w0));
  zfr_complex out;
  CHECK(zfr_mollifier_F0(m, {0.0, 0.0}, &out) == ZFR_E_DIVISION_BY_ZERO);
  CHECK(zfr_mollifier_F(m, {0.0, 0.0}, &out) == ZFR_OK);
  CHECK(out.re == doctest::Approx(0.63098217995912).epsilon(1e-11));
  double err = 1.0;
  CHECK(zfr_mollifier_W(m, {-1.0, 0.0}, &out, &err) == ZFR_OK);
  CHECK(out.re == doctest::Approx(0.63098217995912).epsilon(1e-11));
  zfr_mollifier_destroy(m);
}

TEST_CASE("optimizer handle") {
  zfr_optimize_options o;
  zfr_optimize_options_init(&o);
  CHECK(o.degree == 5);
  CHECK(o.inject_published == 1);
  o.starts = 8;
  zfr_opt_result* r = nullptr;
  REQUIRE(zfr_optimize(&o, &r) == ZFR_OK);
  zfr_opt_summary s;
  CHECK(zfr_opt_result_summary(r, &s) == ZFR_OK);
  CHECK(s.M == doctest::Approx(0.055127).epsilon(1e-4));
  CHECK(s.n_roots == 2);
  CHECK(s.n_coeffs == 6);
  CHECK(s.starts_used == 9);
  std::vector<double> roots(s.n_roots);
  std::size_t n = 0;
  CHECK(zfr_opt_result_roots(r, roots.data(), roots.size(), &n) == ZFR_OK);
  std::vector<zfr_trace_entry> trace(s.n_trace);
  CHECK(zfr_opt_result_trace(r, trace.data(), trace.size(), &n) == ZFR_OK);
  CHECK(trace.front().injected == 1);
  CHECK(zfr_opt_result_trace(r, nullptr, 0, &n) == ZFR_E_BUFFER_TOO_SMALL);
  zfr_opt_result_destroy(r);

  o.degree = 4;
  o.half_angle_factor = 1;
  CHECK(zfr_optimize(&o, &r) == ZFR_E_INVALID_ARGUMENT);
  o.auto_parity = 1;
  REQUIRE(zfr_optimize(&o, &r) == ZFR_OK);
  CHECK(zfr_opt_result_summary(r, &s) == ZFR_OK);
  CHECK(s.half_angle_factor == 0);
  zfr_opt_result_destroy(r);

  zfr_candidate c;
  const double pub[] = {0.8652559, 0.1974476};
  CHECK(zfr_evaluate_candidate(1.0, 1, pub, 2, 2, &c) == ZFR_OK);
  CHECK(c.feasible == 1);
  CHECK(c.M == doctest::Approx(0.0551270808194803).epsilon(1e-12));
  const double three[] = {3.0};
  CHECK(zfr_evaluate_candidate(1.0, 0, three, 1, 2, &c) == ZFR_OK);
  CHECK(c.feasible == 0);
  CHECK(std::string(zfr_reject_reason_name(c.reject_reason)) == "ratio");
}

TEST_CASE("zeta side and reports") {
  zfr_complex z;
  double err = 0.0;
  CHECK(zfr_zeta({1.5, 10.0}, &z, &err) == ZFR_OK);
  CHECK(z.re == doctest::Approx(1.2783911664347597).epsilon(1e-13));
  CHECK(zfr_zeta({0.5, 0.0}, &z, &err) == ZFR_E_DOMAIN);
  std::size_t N = 0;
  CHECK(zfr_neg_zeta_logderiv({2.0, 0.0}, 1e-6, 0, &z, &err, &N) == ZFR_OK);
  CHECK(std::abs(z.re - 0.56996099309453280) <= err);
  CHECK(zfr_neg_zeta_logderiv({1.3, 0.0}, 1e-9, 1000, &z, &err, &N) == ZFR_E_CAPACITY);

  zfr_report* r = nullptr;
  REQUIRE(zfr_verify_lemma({1.5, 10.0}, 0.25, 1e-6, 0, &r) == ZFR_OK);
  zfr_report_values v;
  CHECK(zfr_report_values_get(r, &v) == ZFR_OK);
  CHECK(v.pass == 1);
  CHECK(std::string(zfr_report_kind(r)) == "telescoping");
  CHECK(zfr_report_param_count(r) > 0);
  const char* name = nullptr;
  double value = 0.0;
  CHECK(zfr_report_param(r, 0, &name, &value) == ZFR_OK);
  CHECK(name != nullptr);
  CHECK(zfr_report_param(r, 999, &name, &value) == ZFR_E_INVALID_ARGUMENT);
  zfr_report_destroy(r);

  REQUIRE(zfr_midpoint_check(2.0, 0.25, 1e-6, 0, &r) == ZFR_OK);
  CHECK(zfr_report_values_get(r, &v) == ZFR_OK);
  CHECK(v.margin > 0.0);
  zfr_report_destroy(r);

  zfr_poly* p = nullptr;
  const double b[] = {3.0, 4.0, 1.0};
  REQUIRE(zfr_poly_create(b, 3, &p) == ZFR_OK);
  REQUIRE(zfr_applied_trig_sum(p, 2.0, 14.0, 1e-3, 0, &r) == ZFR_OK);
  CHECK(zfr_report_values_get(r, &v) == ZFR_OK);
  CHECK(v.pass == 1);
  zfr_report_destroy(r);
  zfr_poly_destroy(p);
}

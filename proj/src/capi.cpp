#include "zfr/zfr.h"

#include <algorithm>
#include <complex>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <variant>
#include <vector>

#include "zfr/asymptotics.hpp"
#include "zfr/error.hpp"
#include "zfr/mollifier.hpp"
#include "zfr/optimizer.hpp"
#include "zfr/trigpoly.hpp"
#include "zfr/version.hpp"
#include "zfr/zetanum.hpp"

using namespace zfr;

struct zfr_poly {
  trigpoly::CosinePolynomial poly;
};
struct zfr_mollifier {
  mollifier::MollifierShape shape;
};
struct zfr_opt_result {
  optimizer::OptimizationResult result;
};
struct zfr_report {
  zetanum::VerificationReport report;
};

namespace {

thread_local std::string g_last_error;

zfr_status record(zfr_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

// Runs f, translating exceptions into status codes and the thread's message.
template <class F>
zfr_status guarded(F&& f) noexcept {
  try {
    f();
    g_last_error.clear();
    return ZFR_OK;
  } catch (const Error& e) {
    return record(static_cast<zfr_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return record(ZFR_E_CAPACITY, "out of memory");
  } catch (const std::exception& e) {
    return record(ZFR_E_INTERNAL, e.what());
  } catch (...) {
    return record(ZFR_E_INTERNAL, "unknown failure");
  }
}

void need(const void* ptr, const char* what) {
  if (!ptr) fail(ErrorCode::InvalidArgument, std::string("null pointer: ") + what);
}

template <class T>
zfr_status copy_out(const std::vector<T>& src, T* buf, std::size_t cap, std::size_t* needed) {
  if (needed) *needed = src.size();
  if (cap < src.size()) return record(ZFR_E_BUFFER_TOO_SMALL, "output buffer too small");
  if (!src.empty() && !buf) return record(ZFR_E_INVALID_ARGUMENT, "null output buffer");
  std::copy(src.begin(), src.end(), buf);
  g_last_error.clear();
  return ZFR_OK;
}

std::complex<double> to_cpp(zfr_complex z) { return {z.re, z.im}; }
zfr_complex to_c(std::complex<double> z) { return {z.real(), z.imag()}; }

zetanum::DirichletOptions dirichlet_opts(std::size_t max_n) {
  zetanum::DirichletOptions o;
  if (max_n) o.max_n = max_n;
  return o;
}

trigpoly::ProductForm make_form(double scale, int half, const double* roots, std::size_t n, int mult) {
  if (n) need(roots, "roots");
  trigpoly::ProductForm f;
  f.scale = scale;
  f.half_angle_factor = half != 0;
  f.roots.assign(roots, roots + n);
  f.multiplicity = mult;
  return f;
}

}  // namespace

extern "C" {

const char* zfr_version(void) { return kVersionString; }

const char* zfr_status_name(zfr_status s) {
  switch (s) {
    case ZFR_OK: return "ok";
    case ZFR_E_INVALID_ARGUMENT: return "invalid-argument";
    case ZFR_E_RATIO_OUT_OF_RANGE: return "ratio-out-of-range";
    case ZFR_E_MULTIPLE_ROOTS: return "multiple-roots";
    case ZFR_E_NONNEGATIVITY: return "nonnegativity-failure";
    case ZFR_E_DOMAIN: return "domain-error";
    case ZFR_E_CAPACITY: return "capacity-error";
    case ZFR_E_POLE: return "pole-error";
    case ZFR_E_DIVISION_BY_ZERO: return "division-by-zero";
    case ZFR_E_DEGREE_OVERFLOW: return "degree-overflow";
    case ZFR_E_NO_FEASIBLE_POINT: return "no-feasible-point";
    case ZFR_E_BUFFER_TOO_SMALL: return "buffer-too-small";
    case ZFR_E_INTERNAL: return "internal-error";
  }
  return "unknown-status";
}

const char* zfr_last_error_message(void) { return g_last_error.c_str(); }

// ---- polynomials

zfr_status zfr_poly_create(const double* coeffs, size_t n, zfr_poly** out) {
  return guarded([&] {
    need(out, "out");
    if (n) need(coeffs, "coeffs");
    *out = new zfr_poly{trigpoly::CosinePolynomial(std::vector<double>(coeffs, coeffs + n))};
  });
}

zfr_status zfr_poly_from_product(double scale, int half, const double* roots, size_t n, int mult, zfr_poly** out) {
  return guarded([&] {
    need(out, "out");
    *out = new zfr_poly{trigpoly::expand_product(make_form(scale, half, roots, n, mult))};
  });
}

void zfr_poly_destroy(zfr_poly* p) { delete p; }

size_t zfr_poly_degree(const zfr_poly* p) { return p ? p->poly.degree() : 0; }

zfr_status zfr_poly_coeffs(const zfr_poly* p, double* buf, size_t cap, size_t* needed) {
  if (!p) return record(ZFR_E_INVALID_ARGUMENT, "null pointer: poly");
  const auto c = p->poly.coeffs();
  return copy_out(std::vector<double>(c.begin(), c.end()), buf, cap, needed);
}

zfr_status zfr_poly_eval(const zfr_poly* p, double angle, double* out) {
  return guarded([&] {
    need(p, "poly");
    need(out, "out");
    *out = p->poly(angle);
  });
}

zfr_status zfr_poly_verify_nonneg(const zfr_poly* p, double tol, size_t grid, zfr_nonneg_result* out) {
  return guarded([&] {
    need(p, "poly");
    need(out, "out");
    const auto r = trigpoly::verify_nonneg(p->poly, tol > 0.0 ? tol : trigpoly::kDefaultNonnegTol,
                                           grid ? grid : trigpoly::kDefaultGridPoints);
    if (const auto* c = std::get_if<trigpoly::Certificate>(&r))
      *out = {1, c->min_angle, c->min_value};
    else {
      const auto& v = std::get<trigpoly::Violation>(r);
      *out = {0, v.angle, v.value};
    }
  });
}

// ---- objective and region

zfr_status zfr_solve_theta(double b0, double b1, double* theta) {
  return guarded([&] {
    need(theta, "theta");
    *theta = mollifier::solve_theta(b0, b1);
  });
}

zfr_status zfr_compute_M(const zfr_poly* p, double* M, double* theta) {
  return guarded([&] {
    need(p, "poly");
    const auto m = asymptotics::compute_M(p->poly);
    if (M) *M = m.M;
    if (theta) *theta = m.theta;
  });
}

zfr_status zfr_compute_C(const zfr_poly* p, double B, double* C) {
  return guarded([&] {
    need(p, "poly");
    need(C, "C");
    *C = asymptotics::compute_C(p->poly, B);
  });
}

zfr_status zfr_eta(double t, double C, double* eta) {
  return guarded([&] {
    need(eta, "eta");
    *eta = asymptotics::eta_of(t, C);
  });
}

zfr_status zfr_lambda(double t, double B, double M, double* lambda) {
  return guarded([&] {
    need(lambda, "lambda");
    *lambda = asymptotics::lambda_of(t, B, M);
  });
}

zfr_status zfr_region_table(const zfr_poly* p, double A, double B, const double* ts, size_t n, zfr_region_row* rows) {
  return guarded([&] {
    need(p, "poly");
    if (n) {
      need(ts, "ts");
      need(rows, "rows");
    }
    const auto table = asymptotics::region_table(p->poly, A, B, std::span<const double>(ts, n));
    for (std::size_t i = 0; i < table.size(); ++i)
      rows[i] = {table[i].t, table[i].eta, table[i].lambda, table[i].beta_bound, table[i].flags};
  });
}

// ---- mollifier

zfr_status zfr_mollifier_create(double theta, zfr_mollifier** out) {
  return guarded([&] {
    need(out, "out");
    *out = new zfr_mollifier{mollifier::MollifierShape(theta)};
  });
}

zfr_status zfr_mollifier_from_coeffs(double b0, double b1, zfr_mollifier** out) {
  return guarded([&] {
    need(out, "out");
    *out = new zfr_mollifier{mollifier::MollifierShape::from_coefficients(b0, b1)};
  });
}

void zfr_mollifier_destroy(zfr_mollifier* m) { delete m; }

zfr_status zfr_mollifier_set_lambda(zfr_mollifier* m, double lambda) {
  return guarded([&] {
    need(m, "mollifier");
    m->shape = m->shape.with_lambda(lambda);
  });
}

zfr_status zfr_mollifier_info_get(const zfr_mollifier* m, zfr_mollifier_info* out) {
  return guarded([&] {
    need(m, "mollifier");
    need(out, "out");
    const auto& s = m->shape;
    *out = {s.theta(), s.g_support(), s.w_support(), s.w0(), s.F0val(), s.negWp0(),
            s.lambda().has_value() ? 1 : 0, s.lambda().value_or(0.0)};
  });
}

zfr_status zfr_mollifier_g(const zfr_mollifier* m, double u, double* out) {
  return guarded([&] {
    need(m, "mollifier");
    need(out, "out");
    *out = mollifier::g_eval(m->shape.theta(), u);
  });
}

zfr_status zfr_mollifier_w(const zfr_mollifier* m, double u, double* out) {
  return guarded([&] {
    need(m, "mollifier");
    need(out, "out");
    *out = mollifier::w_eval(m->shape.theta(), u);
  });
}

zfr_status zfr_mollifier_f(const zfr_mollifier* m, double u, double* out) {
  return guarded([&] {
    need(m, "mollifier");
    need(out, "out");
    *out = mollifier::f_eval(m->shape, u);
  });
}

zfr_status zfr_mollifier_F(const zfr_mollifier* m, zfr_complex z, zfr_complex* out) {
  return guarded([&] {
    need(m, "mollifier");
    need(out, "out");
    *out = to_c(mollifier::F_eval(m->shape, to_cpp(z)));
  });
}

zfr_status zfr_mollifier_F0(const zfr_mollifier* m, zfr_complex z, zfr_complex* out) {
  return guarded([&] {
    need(m, "mollifier");
    need(out, "out");
    *out = to_c(mollifier::F0_eval(m->shape, to_cpp(z)));
  });
}

zfr_status zfr_mollifier_W(const zfr_mollifier* m, zfr_complex s, zfr_complex* out, double* error) {
  return guarded([&] {
    need(m, "mollifier");
    need(out, "out");
    const auto v = mollifier::W_eval(m->shape.theta(), to_cpp(s));
    *out = to_c(v.value);
    if (error) *error = v.error;
  });
}

// ---- optimizer

void zfr_optimize_options_init(zfr_optimize_options* o) {
  if (!o) return;
  const optimizer::OptimizeOptions d;
  o->degree = d.degree;
  o->half_angle_factor = d.half_angle_factor ? 1 : 0;
  o->starts = d.starts;
  o->seed = d.seed;
  o->tol = d.tol;
  o->multiplicity = d.multiplicity;
  o->inject_published = d.inject_published ? 1 : 0;
  o->max_iterations = d.max_iterations;
  o->threads = d.threads;
  o->auto_parity = 0;
}

zfr_status zfr_optimize(const zfr_optimize_options* o, zfr_opt_result** out) {
  return guarded([&] {
    need(o, "options");
    need(out, "out");
    optimizer::OptimizeOptions opts;
    opts.degree = o->degree;
    opts.half_angle_factor = o->half_angle_factor != 0;
    opts.starts = o->starts;
    opts.seed = o->seed;
    opts.tol = o->tol;
    opts.multiplicity = o->multiplicity;
    opts.inject_published = o->inject_published != 0;
    opts.max_iterations = o->max_iterations;
    opts.threads = o->threads;
    auto r = o->auto_parity ? optimizer::optimize_best_parity(opts) : optimizer::optimize(opts);
    *out = new zfr_opt_result{std::move(r)};
  });
}

void zfr_opt_result_destroy(zfr_opt_result* r) { delete r; }

zfr_status zfr_opt_result_summary(const zfr_opt_result* r, zfr_opt_summary* out) {
  return guarded([&] {
    need(r, "result");
    need(out, "out");
    const auto& x = r->result;
    *out = {static_cast<int>(x.best_form.degree()),
            x.best_form.half_angle_factor ? 1 : 0,
            x.best_form.multiplicity,
            x.best_form.scale,
            x.M,
            x.theta,
            x.starts_used,
            x.independent_best_M,
            x.best_form.roots.size(),
            x.best_poly.coeffs().size(),
            x.clamped.size(),
            x.trace.size()};
  });
}

zfr_status zfr_opt_result_roots(const zfr_opt_result* r, double* buf, size_t cap, size_t* needed) {
  if (!r) return record(ZFR_E_INVALID_ARGUMENT, "null pointer: result");
  return copy_out(r->result.best_form.roots, buf, cap, needed);
}

zfr_status zfr_opt_result_coeffs(const zfr_opt_result* r, double* buf, size_t cap, size_t* needed) {
  if (!r) return record(ZFR_E_INVALID_ARGUMENT, "null pointer: result");
  const auto c = r->result.best_poly.coeffs();
  return copy_out(std::vector<double>(c.begin(), c.end()), buf, cap, needed);
}

zfr_status zfr_opt_result_clamped(const zfr_opt_result* r, size_t* buf, size_t cap, size_t* needed) {
  if (!r) return record(ZFR_E_INVALID_ARGUMENT, "null pointer: result");
  return copy_out(r->result.clamped, buf, cap, needed);
}

zfr_status zfr_opt_result_trace(const zfr_opt_result* r, zfr_trace_entry* buf, size_t cap, size_t* needed) {
  if (!r) return record(ZFR_E_INVALID_ARGUMENT, "null pointer: result");
  std::vector<zfr_trace_entry> entries;
  entries.reserve(r->result.trace.size());
  for (const auto& t : r->result.trace)
    entries.push_back({t.start, t.injected ? 1 : 0, t.iterations, t.start_M, t.best_M});
  return copy_out(entries, buf, cap, needed);
}

zfr_status zfr_evaluate_candidate(double scale, int half, const double* roots, size_t n, int mult,
                                  zfr_candidate* out) {
  return guarded([&] {
    need(out, "out");
    const auto outcome = optimizer::evaluate_candidate(make_form(scale, half, roots, n, mult));
    if (const auto* c = std::get_if<optimizer::Candidate>(&outcome))
      *out = {1, 0, c->theta, c->M};
    else
      *out = {0, static_cast<int>(std::get<optimizer::Rejection>(outcome).reason), 0.0, 0.0};
  });
}

const char* zfr_reject_reason_name(int reason) {
  if (reason < 0 || reason > static_cast<int>(optimizer::RejectReason::Invalid)) return "unknown";
  return optimizer::to_string(static_cast<optimizer::RejectReason>(reason));
}

// ---- zeta numerics

zfr_status zfr_zeta(zfr_complex s, zfr_complex* out, double* error) {
  return guarded([&] {
    need(out, "out");
    const auto v = zetanum::zeta_em(to_cpp(s));
    *out = to_c(v.value);
    if (error) *error = v.error;
  });
}

zfr_status zfr_neg_zeta_logderiv(zfr_complex s, double tol, size_t max_n, zfr_complex* out, double* error,
                                 size_t* truncation) {
  return guarded([&] {
    need(out, "out");
    const auto v = zetanum::neg_zeta_logderiv(to_cpp(s), tol, dirichlet_opts(max_n));
    *out = to_c(v.value);
    if (error) *error = v.error_bound;
    if (truncation) *truncation = v.N;
  });
}

zfr_status zfr_re_cot(double x, double y, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = zetanum::re_cot(x, y);
  });
}

zfr_status zfr_psi(size_t x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = x < 2 ? 0.0 : zetanum::shared_prime_powers(x)->psi(x);
  });
}

zfr_status zfr_verify_lemma(zfr_complex z, double eta, double tol, size_t max_n, zfr_report** out) {
  return guarded([&] {
    need(out, "out");
    *out = new zfr_report{zetanum::verify_lemma(to_cpp(z), eta, tol, dirichlet_opts(max_n))};
  });
}

zfr_status zfr_midpoint_check(double sigma, double eta, double tol, size_t max_n, zfr_report** out) {
  return guarded([&] {
    need(out, "out");
    *out = new zfr_report{zetanum::midpoint_bound_check(sigma, eta, tol, dirichlet_opts(max_n))};
  });
}

zfr_status zfr_applied_trig_sum(const zfr_poly* p, double x, double y, double tol, size_t max_n, zfr_report** out) {
  return guarded([&] {
    need(p, "poly");
    need(out, "out");
    *out = new zfr_report{zetanum::applied_trig_sum(p->poly, x, y, tol, dirichlet_opts(max_n))};
  });
}

void zfr_report_destroy(zfr_report* r) { delete r; }

zfr_status zfr_report_values_get(const zfr_report* r, zfr_report_values* out) {
  return guarded([&] {
    need(r, "report");
    need(out, "out");
    const auto& x = r->report;
    *out = {x.lhs, x.rhs, x.abs_diff, x.lhs_error_bound, x.rhs_error_bound, x.tol, x.margin, x.pass ? 1 : 0};
  });
}

const char* zfr_report_kind(const zfr_report* r) { return r ? r->report.kind.c_str() : ""; }
const char* zfr_report_note(const zfr_report* r) { return r ? r->report.note.c_str() : ""; }
size_t zfr_report_param_count(const zfr_report* r) { return r ? r->report.params.size() : 0; }

zfr_status zfr_report_param(const zfr_report* r, size_t i, const char** name, double* value) {
  return guarded([&] {
    need(r, "report");
    if (i >= r->report.params.size()) fail(ErrorCode::InvalidArgument, "parameter index out of range");
    if (name) *name = r->report.params[i].first.c_str();
    if (value) *value = r->report.params[i].second;
  });
}

}  // extern "C"

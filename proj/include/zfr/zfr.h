/* C interface to the zfr numerical core. Every fallible call returns a
 * zfr_status; on failure the thread's last error message describes it. */
#ifndef ZFR_ZFR_H
#define ZFR_ZFR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ZFR_API __declspec(dllexport)
#else
#define ZFR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zfr_status {
  ZFR_OK = 0,
  ZFR_E_INVALID_ARGUMENT = 1,
  ZFR_E_RATIO_OUT_OF_RANGE = 2,
  ZFR_E_MULTIPLE_ROOTS = 3,
  ZFR_E_NONNEGATIVITY = 4,
  ZFR_E_DOMAIN = 5,
  ZFR_E_CAPACITY = 6,
  ZFR_E_POLE = 7,
  ZFR_E_DIVISION_BY_ZERO = 8,
  ZFR_E_DEGREE_OVERFLOW = 9,
  ZFR_E_NO_FEASIBLE_POINT = 10,
  ZFR_E_BUFFER_TOO_SMALL = 11,
  ZFR_E_INTERNAL = 99
} zfr_status;

typedef struct zfr_complex {
  double re;
  double im;
} zfr_complex;

typedef struct zfr_poly zfr_poly;
typedef struct zfr_mollifier zfr_mollifier;
typedef struct zfr_opt_result zfr_opt_result;
typedef struct zfr_report zfr_report;

ZFR_API const char* zfr_version(void);
ZFR_API const char* zfr_status_name(zfr_status status);
/* Message of the most recent failure on this thread ("" if none). */
ZFR_API const char* zfr_last_error_message(void);

/* ---- cosine polynomials ------------------------------------------------ */

ZFR_API zfr_status zfr_poly_create(const double* coeffs, size_t n, zfr_poly** out);
/* scale * (1 + cos t)^half * prod (roots_i + cos t)^multiplicity */
ZFR_API zfr_status zfr_poly_from_product(double scale, int half_angle_factor, const double* roots, size_t n_roots,
                                         int multiplicity, zfr_poly** out);
ZFR_API void zfr_poly_destroy(zfr_poly* p);
ZFR_API size_t zfr_poly_degree(const zfr_poly* p);
/* Copies degree+1 coefficients; *needed always receives the required length. */
ZFR_API zfr_status zfr_poly_coeffs(const zfr_poly* p, double* buf, size_t cap, size_t* needed);
ZFR_API zfr_status zfr_poly_eval(const zfr_poly* p, double angle, double* out);

typedef struct zfr_nonneg_result {
  int nonnegative; /* 1: certificate, 0: violation */
  double angle;    /* minimizing angle or violating angle */
  double value;
} zfr_nonneg_result;

/* tol <= 0 and grid_points == 0 select the library defaults. */
ZFR_API zfr_status zfr_poly_verify_nonneg(const zfr_poly* p, double tol, size_t grid_points, zfr_nonneg_result* out);

/* ---- objective and region constants ------------------------------------ */

ZFR_API zfr_status zfr_solve_theta(double b0, double b1, double* theta);
ZFR_API zfr_status zfr_compute_M(const zfr_poly* p, double* M, double* theta);
ZFR_API zfr_status zfr_compute_C(const zfr_poly* p, double B, double* C);
ZFR_API zfr_status zfr_eta(double t, double C, double* eta);
ZFR_API zfr_status zfr_lambda(double t, double B, double M, double* lambda);

#define ZFR_ROW_LAMBDA_TOO_LARGE 1u
#define ZFR_ROW_SMALL_ORDINATE 2u

typedef struct zfr_region_row {
  double t;
  double eta;
  double lambda;
  double beta_bound;
  uint32_t flags;
} zfr_region_row;

/* rows must hold n entries. */
ZFR_API zfr_status zfr_region_table(const zfr_poly* p, double A, double B, const double* ts, size_t n,
                                    zfr_region_row* rows);

/* ---- mollifier ---------------------------------------------------------- */

typedef struct zfr_mollifier_info {
  double theta;
  double g_support;
  double w_support;
  double w0;
  double F0;
  double neg_W_prime0;
  int has_lambda;
  double lambda;
} zfr_mollifier_info;

ZFR_API zfr_status zfr_mollifier_create(double theta, zfr_mollifier** out);
ZFR_API zfr_status zfr_mollifier_from_coeffs(double b0, double b1, zfr_mollifier** out);
ZFR_API void zfr_mollifier_destroy(zfr_mollifier* m);
ZFR_API zfr_status zfr_mollifier_set_lambda(zfr_mollifier* m, double lambda);
ZFR_API zfr_status zfr_mollifier_info_get(const zfr_mollifier* m, zfr_mollifier_info* out);
ZFR_API zfr_status zfr_mollifier_g(const zfr_mollifier* m, double u, double* out);
ZFR_API zfr_status zfr_mollifier_w(const zfr_mollifier* m, double u, double* out);
/* The next three need lambda attached. */
ZFR_API zfr_status zfr_mollifier_f(const zfr_mollifier* m, double u, double* out);
ZFR_API zfr_status zfr_mollifier_F(const zfr_mollifier* m, zfr_complex z, zfr_complex* out);
ZFR_API zfr_status zfr_mollifier_F0(const zfr_mollifier* m, zfr_complex z, zfr_complex* out);
ZFR_API zfr_status zfr_mollifier_W(const zfr_mollifier* m, zfr_complex s, zfr_complex* out, double* error);

/* ---- optimizer ---------------------------------------------------------- */

typedef struct zfr_optimize_options {
  int degree;
  int half_angle_factor;
  int starts;
  uint64_t seed;
  double tol;
  int multiplicity;
  int inject_published;
  int max_iterations;
  unsigned threads;  /* 0: hardware concurrency */
  int auto_parity;   /* try both parities up to degree, keep the better */
} zfr_optimize_options;

ZFR_API void zfr_optimize_options_init(zfr_optimize_options* o);

typedef struct zfr_opt_summary {
  int degree;
  int half_angle_factor;
  int multiplicity;
  double scale;
  double M;
  double theta;
  int starts_used;
  double independent_best_M;
  size_t n_roots;
  size_t n_coeffs;
  size_t n_clamped;
  size_t n_trace;
} zfr_opt_summary;

typedef struct zfr_trace_entry {
  int start;
  int injected;
  int iterations;
  double start_M;
  double best_M;
} zfr_trace_entry;

ZFR_API zfr_status zfr_optimize(const zfr_optimize_options* o, zfr_opt_result** out);
ZFR_API void zfr_opt_result_destroy(zfr_opt_result* r);
ZFR_API zfr_status zfr_opt_result_summary(const zfr_opt_result* r, zfr_opt_summary* out);
ZFR_API zfr_status zfr_opt_result_roots(const zfr_opt_result* r, double* buf, size_t cap, size_t* needed);
ZFR_API zfr_status zfr_opt_result_coeffs(const zfr_opt_result* r, double* buf, size_t cap, size_t* needed);
ZFR_API zfr_status zfr_opt_result_clamped(const zfr_opt_result* r, size_t* buf, size_t cap, size_t* needed);
ZFR_API zfr_status zfr_opt_result_trace(const zfr_opt_result* r, zfr_trace_entry* buf, size_t cap, size_t* needed);

typedef struct zfr_candidate {
  int feasible;
  int reject_reason; /* meaningful when feasible == 0 */
  double theta;
  double M;
} zfr_candidate;

ZFR_API zfr_status zfr_evaluate_candidate(double scale, int half_angle_factor, const double* roots, size_t n_roots,
                                          int multiplicity, zfr_candidate* out);
ZFR_API const char* zfr_reject_reason_name(int reason);

/* ---- zeta numerics ------------------------------------------------------ */

/* max_n == 0 selects the default sieve capacity. */
ZFR_API zfr_status zfr_zeta(zfr_complex s, zfr_complex* out, double* error);
ZFR_API zfr_status zfr_neg_zeta_logderiv(zfr_complex s, double tol, size_t max_n, zfr_complex* out, double* error,
                                         size_t* truncation);
ZFR_API zfr_status zfr_re_cot(double x, double y, double* out);
ZFR_API zfr_status zfr_psi(size_t x, double* out);

ZFR_API zfr_status zfr_verify_lemma(zfr_complex z, double eta, double tol, size_t max_n, zfr_report** out);
ZFR_API zfr_status zfr_midpoint_check(double sigma, double eta, double tol, size_t max_n, zfr_report** out);
ZFR_API zfr_status zfr_applied_trig_sum(const zfr_poly* p, double x, double y, double tol, size_t max_n,
                                        zfr_report** out);

typedef struct zfr_report_values {
  double lhs;
  double rhs;
  double abs_diff;
  double lhs_error_bound;
  double rhs_error_bound;
  double tol;
  double margin;
  int pass;
} zfr_report_values;

ZFR_API void zfr_report_destroy(zfr_report* r);
ZFR_API zfr_status zfr_report_values_get(const zfr_report* r, zfr_report_values* out);
/* Strings live as long as the report. */
ZFR_API const char* zfr_report_kind(const zfr_report* r);
ZFR_API const char* zfr_report_note(const zfr_report* r);
ZFR_API size_t zfr_report_param_count(const zfr_report* r);
ZFR_API zfr_status zfr_report_param(const zfr_report* r, size_t i, const char** name, double* value);

#ifdef __cplusplus
}
#endif

#endif

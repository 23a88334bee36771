/*
 * Copyright 2026 The ngnopt Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to libngn.
 *
 * Objects are opaque handles created by the create, execute and load calls
 * and released with the matching destroy call. Every fallible call returns an
 * ngn_status; on failure ngn_last_error() describes the problem. The error
 * text is thread-local and stays valid until the next failing call on the
 * same thread.
 *
 * Functions that produce text use the (buf, cap, needed) convention: the
 * full length excluding the terminator is stored in *needed (if non-NULL),
 * and the text is copied and NUL-terminated when it fits in cap bytes.
 * Passing buf = NULL, cap = 0 queries the length.
 */

#ifndef NGN_NGN_H
#define NGN_NGN_H

#include <stddef.h>
#include <stdint.h>

#if defined(NGN_BUILDING_LIBRARY)
#define NGN_API __attribute__((visibility("default")))
#else
#define NGN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ngn_status {
  NGN_OK = 0,
  NGN_ERR_INVALID_ARGUMENT = 1,
  NGN_ERR_IO = 2,
  NGN_ERR_NUMERIC = 3,
  NGN_ERR_BUFFER_TOO_SMALL = 4,
  NGN_ERR_INTERNAL = 5
} ngn_status;

typedef enum ngn_run_status {
  NGN_RUN_CONVERGED = 0,
  NGN_RUN_DIVERGED = 1,
  NGN_RUN_BUDGET_EXHAUSTED = 2
} ngn_run_status;

typedef struct ngn_problem ngn_problem;
typedef struct ngn_run ngn_run;
typedef struct ngn_sweep ngn_sweep;
typedef struct ngn_sweep_result ngn_sweep_result;
typedef struct ngn_audit_suite ngn_audit_suite;

NGN_API const char *ngn_version(void);
NGN_API const char *ngn_last_error(void);
NGN_API const char *ngn_status_string(ngn_status status);

/* Problems ------------------------------------------------------------- */

/* descriptor: "kind=ridge; dim=100; r=0.1; seed=3" (keys of [problem]). */
NGN_API ngn_status ngn_problem_create(const char *descriptor, ngn_problem **out);
NGN_API void ngn_problem_destroy(ngn_problem *problem);
NGN_API size_t ngn_problem_dim(const ngn_problem *problem);
NGN_API size_t ngn_problem_samples(const ngn_problem *problem);

/* Full-batch loss and gradient at x (length dim). grad may be NULL. */
NGN_API ngn_status ngn_problem_evaluate(const ngn_problem *problem, const double *x, size_t n,
                                        double *loss, double *grad);

/* Smoothness constant and optimum value; NGN_ERR_INVALID_ARGUMENT when the
 * problem has no such metadata. */
NGN_API ngn_status ngn_problem_smoothness(const ngn_problem *problem, double *L);
NGN_API ngn_status ngn_problem_optimum(const ngn_problem *problem, double *f_star);

/* Runs ------------------------------------------------------------------ */

typedef struct ngn_optimizer_params {
  const char *kind;     /* "ngn", "ngn-m", "ngn-m-v2", "ngn-d", "ngn-mdv1", ... */
  double c;
  double beta1;
  double beta2;
  double eps;
  double wd_lambda;
  const char *schedule; /* "constant", "inv-sqrt-K", "inv-sqrt-step" */
  int64_t schedule_K;   /* 0 uses max_steps for inv-sqrt-K */
  int ngn_d_precond;
  int precond_identity;
  double dampening;     /* SGDM only; NaN follows beta1 */
} ngn_optimizer_params;

typedef struct ngn_budget {
  int64_t max_steps;
  double success_loss;
  double diverge_loss;
  size_t batch_size;  /* 0 = full batch */
  int64_t full_loss_every;
} ngn_budget;

typedef struct ngn_step_report {
  double loss;
  double full_loss;
  double grad_norm;
  double gamma_scalar;
  double gamma_coord_min;
  double gamma_coord_max;
  double gamma_coord_mean;
  double update_norm;
} ngn_step_report;

NGN_API void ngn_optimizer_params_init(ngn_optimizer_params *params);
NGN_API void ngn_budget_init(ngn_budget *budget);

/* x0 may be NULL to use the problem's default start. */
NGN_API ngn_status ngn_run_execute(const ngn_problem *problem, const ngn_optimizer_params *params,
                                   const ngn_budget *budget, uint64_t seed, const double *x0,
                                   size_t x0_len, ngn_run **out);
NGN_API void ngn_run_destroy(ngn_run *run);

NGN_API size_t ngn_run_steps(const ngn_run *run);
NGN_API ngn_run_status ngn_run_get_status(const ngn_run *run);
NGN_API int64_t ngn_run_status_step(const ngn_run *run);
NGN_API double ngn_run_final_loss(const ngn_run *run);
NGN_API double ngn_run_best_loss(const ngn_run *run);
NGN_API ngn_status ngn_run_step(const ngn_run *run, size_t k, ngn_step_report *out);
NGN_API ngn_status ngn_run_final_iterate(const ngn_run *run, double *x, size_t n);
NGN_API ngn_status ngn_run_write_trajectory(const ngn_run *run, const char *path);
NGN_API ngn_status ngn_run_summary_row(const ngn_run *run, const char *label, char *buf,
                                       size_t cap, size_t *needed);
NGN_API const char *ngn_summary_header(void);

/* Sweeps ---------------------------------------------------------------- */

NGN_API ngn_status ngn_sweep_load(const char *path, ngn_sweep **out);
NGN_API ngn_status ngn_sweep_parse(const char *text, ngn_sweep **out);
NGN_API void ngn_sweep_destroy(ngn_sweep *sweep);
NGN_API size_t ngn_sweep_cell_count(const ngn_sweep *sweep);

/* threads = 0 uses the config's setting (or hardware concurrency). */
NGN_API ngn_status ngn_sweep_execute(const ngn_sweep *sweep, unsigned threads,
                                     ngn_sweep_result **out);
NGN_API void ngn_sweep_result_destroy(ngn_sweep_result *result);
NGN_API size_t ngn_sweep_result_cells(const ngn_sweep_result *result);
NGN_API size_t ngn_sweep_result_failed(const ngn_sweep_result *result);

/* path = NULL writes to the config's output.summary (relative paths are
 * resolved against NGN_OUTPUT_DIR when set). */
NGN_API ngn_status ngn_sweep_result_write_summary(const ngn_sweep_result *result,
                                                  const char *path);
NGN_API ngn_status ngn_sweep_result_summary_path(const ngn_sweep_result *result, char *buf,
                                                 size_t cap, size_t *needed);

/* Audits ---------------------------------------------------------------- */

typedef struct ngn_audit_info {
  const char *name;      /* owned by the suite */
  int passed;
  double max_violation;
  double tolerance;
  const char *location;  /* owned by the suite */
} ngn_audit_info;

NGN_API ngn_status ngn_verify_run_all(uint64_t seed, ngn_audit_suite **out);
NGN_API void ngn_audit_suite_destroy(ngn_audit_suite *suite);
NGN_API size_t ngn_audit_count(const ngn_audit_suite *suite);
NGN_API ngn_status ngn_audit_get(const ngn_audit_suite *suite, size_t i, ngn_audit_info *out);
NGN_API int ngn_audit_all_passed(const ngn_audit_suite *suite);
NGN_API ngn_status ngn_audit_csv(const ngn_audit_suite *suite, char *buf, size_t cap,
                                 size_t *needed);

/* Theory ---------------------------------------------------------------- */

NGN_API ngn_status ngn_gamma_value(double c, double loss, double grad_sq, double *out);

NGN_API ngn_status ngn_theory_momentum_params(double c, double L, double *rho,
                                              double *lambda_max, double *beta_max);

typedef struct ngn_theory_inputs {
  double c;
  double L;
  int64_t K;
  double dist0_sq;
  double sigma_int_sq;
  double sigma_pos_sq;
} ngn_theory_inputs;

NGN_API ngn_status ngn_theory_ngn_m_bound(const ngn_theory_inputs *in, double *out);
NGN_API ngn_status ngn_theory_ngn_m_bound_decaying(const ngn_theory_inputs *in, double *out);

/* mode: 0 = non-convex, 1 = PL. Arrays have length d. */
NGN_API ngn_status ngn_theory_ngn_d_bound(int mode, size_t d, const double *c_coord,
                                          const double *L_coord, const double *sigma_coord,
                                          int64_t K, double f0_gap, double mu, double *out);

NGN_API ngn_status ngn_theory_gammahat_range(double C_poly, double *lo, double *hi,
                                             double *beta_threshold);

#ifdef __cplusplus
}
#endif

#endif /* NGN_NGN_H */

// Copyright 2026 The ngnopt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ngn/ngn.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <sstream>
#include <string>

#include "ngn/config.hpp"
#include "ngn/csv.hpp"
#include "ngn/harness.hpp"
#include "ngn/theory.hpp"
#include "ngn/verify.hpp"

struct ngn_problem {
  ngn::StochasticObjective objective;
};

struct ngn_run {
  ngn::RunRecord record;
};

struct ngn_sweep {
  ngn::SweepSpec spec;
};

struct ngn_sweep_result {
  ngn::SweepResult result;
  std::string summary_path;
};

struct ngn_audit_suite {
  std::vector<ngn::AuditReport> reports;
};

namespace {

thread_local std::string g_last_error;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ngn_status fail(ngn_status status, const std::string &message) {
  g_last_error = message;
  return status;
}

// Runs fn and maps exceptions onto status codes.
template <typename Fn>
ngn_status guarded(Fn &&fn) {
  try {
    return fn();
  } catch (const ngn::Error &e) {
    switch (e.code()) {
      case ngn::ErrorCode::InvalidArgument: return fail(NGN_ERR_INVALID_ARGUMENT, e.what());
      case ngn::ErrorCode::Io: return fail(NGN_ERR_IO, e.what());
      case ngn::ErrorCode::Numeric: return fail(NGN_ERR_NUMERIC, e.what());
    }
    return fail(NGN_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc &) {
    return fail(NGN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(NGN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NGN_ERR_INTERNAL, "unknown error");
  }
}

#define NGN_REQUIRE_ARG(cond, msg) \
  if (!(cond)) return fail(NGN_ERR_INVALID_ARGUMENT, msg)

ngn_status copy_text(const std::string &text, char *buf, size_t cap, size_t *needed) {
  if (needed) *needed = text.size();
  if (buf == nullptr && cap == 0) return NGN_OK;
  if (buf == nullptr || cap < text.size() + 1)
    return fail(NGN_ERR_BUFFER_TOO_SMALL, "buffer too small for " + std::to_string(text.size()) +
                                              " characters");
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  return NGN_OK;
}

ngn::OptimizerSpec to_spec(const ngn_optimizer_params &p) {
  ngn::OptimizerSpec s;
  ngn::require(p.kind != nullptr, "optimizer kind is required");
  s.kind = ngn::parse_optimizer_kind(p.kind);
  s.c = p.c;
  s.beta1 = p.beta1;
  s.beta2 = p.beta2;
  s.eps = p.eps;
  s.wd_lambda = p.wd_lambda;
  if (p.schedule != nullptr) s.schedule = ngn::parse_schedule(p.schedule);
  s.schedule_K = p.schedule_K;
  s.ngn_d_precond = p.ngn_d_precond != 0;
  s.precond_identity = p.precond_identity != 0;
  if (!std::isnan(p.dampening)) s.dampening = p.dampening;
  return s;
}

ngn::RunBudget to_budget(const ngn_budget &b) {
  ngn::RunBudget r;
  r.max_steps = b.max_steps;
  r.success_loss = b.success_loss;
  r.diverge_loss = b.diverge_loss;
  r.batch_size = b.batch_size;
  r.full_loss_every = b.full_loss_every;
  return r;
}

}  // namespace

extern "C" {

const char *ngn_version(void) { return "0.1.0"; }

const char *ngn_last_error(void) { return g_last_error.c_str(); }

const char *ngn_status_string(ngn_status status) {
  switch (status) {
    case NGN_OK: return "ok";
    case NGN_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NGN_ERR_IO: return "i/o error";
    case NGN_ERR_NUMERIC: return "numeric error";
    case NGN_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case NGN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

ngn_status ngn_problem_create(const char *descriptor, ngn_problem **out) {
  NGN_REQUIRE_ARG(descriptor != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    const ngn::ProblemSpec spec = ngn::parse_problem_descriptor(descriptor);
    *out = new ngn_problem{ngn::build_problem(spec)};
    return NGN_OK;
  });
}

void ngn_problem_destroy(ngn_problem *problem) { delete problem; }

size_t ngn_problem_dim(const ngn_problem *problem) {
  return problem ? problem->objective.dim() : 0;
}

size_t ngn_problem_samples(const ngn_problem *problem) {
  return problem ? problem->objective.n_samples() : 0;
}

ngn_status ngn_problem_evaluate(const ngn_problem *problem, const double *x, size_t n,
                                double *loss, double *grad) {
  NGN_REQUIRE_ARG(problem != nullptr && x != nullptr && loss != nullptr, "null argument");
  NGN_REQUIRE_ARG(n == problem->objective.dim(), "x has the wrong length");
  return guarded([&] {
    const ngn::Vector xv = Eigen::Map<const ngn::Vector>(x, static_cast<Eigen::Index>(n));
    const ngn::StepSample s = problem->objective.evaluate_full(xv);
    *loss = s.loss;
    if (grad != nullptr)
      for (size_t j = 0; j < n; ++j) grad[j] = s.grad(static_cast<Eigen::Index>(j));
    return NGN_OK;
  });
}

ngn_status ngn_problem_smoothness(const ngn_problem *problem, double *L) {
  NGN_REQUIRE_ARG(problem != nullptr && L != nullptr, "null argument");
  const auto &md = problem->objective.metadata();
  NGN_REQUIRE_ARG(md.L.has_value(), "problem has no smoothness constant");
  *L = *md.L;
  return NGN_OK;
}

ngn_status ngn_problem_optimum(const ngn_problem *problem, double *f_star) {
  NGN_REQUIRE_ARG(problem != nullptr && f_star != nullptr, "null argument");
  const auto &md = problem->objective.metadata();
  NGN_REQUIRE_ARG(md.f_star.has_value(), "problem has no known optimum");
  *f_star = *md.f_star;
  return NGN_OK;
}

void ngn_optimizer_params_init(ngn_optimizer_params *params) {
  if (params == nullptr) return;
  const ngn::OptimizerSpec d;
  params->kind = "ngn";
  params->c = d.c;
  params->beta1 = d.beta1;
  params->beta2 = d.beta2;
  params->eps = d.eps;
  params->wd_lambda = d.wd_lambda;
  params->schedule = "constant";
  params->schedule_K = 0;
  params->ngn_d_precond = 0;
  params->precond_identity = 0;
  params->dampening = kNaN;
}

void ngn_budget_init(ngn_budget *budget) {
  if (budget == nullptr) return;
  const ngn::RunBudget d;
  budget->max_steps = d.max_steps;
  budget->success_loss = d.success_loss;
  budget->diverge_loss = d.diverge_loss;
  budget->batch_size = d.batch_size;
  budget->full_loss_every = d.full_loss_every;
}

ngn_status ngn_run_execute(const ngn_problem *problem, const ngn_optimizer_params *params,
                           const ngn_budget *budget, uint64_t seed, const double *x0,
                           size_t x0_len, ngn_run **out) {
  NGN_REQUIRE_ARG(problem != nullptr && params != nullptr && budget != nullptr && out != nullptr,
                  "null argument");
  *out = nullptr;
  return guarded([&] {
    ngn::OptimizerSpec spec = to_spec(*params);
    const ngn::RunBudget b = to_budget(*budget);
    if (spec.schedule == ngn::Schedule::InvSqrtK && spec.schedule_K == 0)
      spec.schedule_K = b.max_steps;
    std::optional<ngn::Vector> start;
    if (x0 != nullptr)
      start = ngn::Vector(Eigen::Map<const ngn::Vector>(x0, static_cast<Eigen::Index>(x0_len)));
    *out = new ngn_run{ngn::run_once(problem->objective, spec, b, seed, start)};
    return NGN_OK;
  });
}

void ngn_run_destroy(ngn_run *run) { delete run; }

size_t ngn_run_steps(const ngn_run *run) { return run ? run->record.steps() : 0; }

ngn_run_status ngn_run_get_status(const ngn_run *run) {
  if (run == nullptr) return NGN_RUN_BUDGET_EXHAUSTED;
  switch (run->record.status) {
    case ngn::RunStatus::Converged: return NGN_RUN_CONVERGED;
    case ngn::RunStatus::Diverged: return NGN_RUN_DIVERGED;
    case ngn::RunStatus::BudgetExhausted: return NGN_RUN_BUDGET_EXHAUSTED;
  }
  return NGN_RUN_BUDGET_EXHAUSTED;
}

int64_t ngn_run_status_step(const ngn_run *run) { return run ? run->record.status_step : -1; }

double ngn_run_final_loss(const ngn_run *run) { return run ? run->record.final_loss() : kNaN; }

double ngn_run_best_loss(const ngn_run *run) { return run ? run->record.best_loss() : kNaN; }

ngn_status ngn_run_step(const ngn_run *run, size_t k, ngn_step_report *out) {
  NGN_REQUIRE_ARG(run != nullptr && out != nullptr, "null argument");
  const auto &r = run->record;
  NGN_REQUIRE_ARG(k < r.steps(), "step index out of range");
  const ngn::StepReport &s = r.step_reports[k];
  *out = {r.losses[k],      r.full_losses[k],    r.grad_norms[k],      s.gamma_scalar,
          s.gamma_coord_min, s.gamma_coord_max, s.gamma_coord_mean, s.update_norm};
  return NGN_OK;
}

ngn_status ngn_run_final_iterate(const ngn_run *run, double *x, size_t n) {
  NGN_REQUIRE_ARG(run != nullptr && x != nullptr, "null argument");
  const auto &xf = run->record.x_final;
  NGN_REQUIRE_ARG(n == static_cast<size_t>(xf.size()), "x has the wrong length");
  for (size_t j = 0; j < n; ++j) x[j] = xf(static_cast<Eigen::Index>(j));
  return NGN_OK;
}

ngn_status ngn_run_write_trajectory(const ngn_run *run, const char *path) {
  NGN_REQUIRE_ARG(run != nullptr && path != nullptr, "null argument");
  return guarded([&] {
    ngn::write_trajectory_csv(run->record, ngn::resolve_output_path(path));
    return NGN_OK;
  });
}

ngn_status ngn_run_summary_row(const ngn_run *run, const char *label, char *buf, size_t cap,
                               size_t *needed) {
  NGN_REQUIRE_ARG(run != nullptr, "null argument");
  return guarded([&] {
    const std::string name =
        label ? std::string(label) : std::string(ngn::to_string(run->record.spec.kind));
    return copy_text(ngn::summary_row(ngn::summarize(run->record, name)), buf, cap, needed);
  });
}

const char *ngn_summary_header(void) { return ngn::kSummaryHeader; }

ngn_status ngn_sweep_load(const char *path, ngn_sweep **out) {
  NGN_REQUIRE_ARG(path != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new ngn_sweep{ngn::parse_config(path)};
    return NGN_OK;
  });
}

ngn_status ngn_sweep_parse(const char *text, ngn_sweep **out) {
  NGN_REQUIRE_ARG(text != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new ngn_sweep{ngn::parse_config_text(text)};
    return NGN_OK;
  });
}

void ngn_sweep_destroy(ngn_sweep *sweep) { delete sweep; }

size_t ngn_sweep_cell_count(const ngn_sweep *sweep) {
  return sweep ? sweep->spec.cell_count() : 0;
}

ngn_status ngn_sweep_execute(const ngn_sweep *sweep, unsigned threads, ngn_sweep_result **out) {
  NGN_REQUIRE_ARG(sweep != nullptr && out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new ngn_sweep_result{ngn::run_sweep(sweep->spec, threads), sweep->spec.summary_path};
    return NGN_OK;
  });
}

void ngn_sweep_result_destroy(ngn_sweep_result *result) { delete result; }

size_t ngn_sweep_result_cells(const ngn_sweep_result *result) {
  return result ? result->result.cells.size() : 0;
}

size_t ngn_sweep_result_failed(const ngn_sweep_result *result) {
  if (result == nullptr) return 0;
  size_t n = 0;
  for (const auto &c : result->result.cells) n += c.status.has_value() ? 0 : 1;
  return n;
}

ngn_status ngn_sweep_result_write_summary(const ngn_sweep_result *result, const char *path) {
  NGN_REQUIRE_ARG(result != nullptr, "null argument");
  return guarded([&] {
    const std::string target = ngn::resolve_output_path(path ? path : result->summary_path);
    ngn::write_summary_csv(result->result, target);
    return NGN_OK;
  });
}

ngn_status ngn_sweep_result_summary_path(const ngn_sweep_result *result, char *buf, size_t cap,
                                         size_t *needed) {
  NGN_REQUIRE_ARG(result != nullptr, "null argument");
  return copy_text(ngn::resolve_output_path(result->summary_path), buf, cap, needed);
}

ngn_status ngn_verify_run_all(uint64_t seed, ngn_audit_suite **out) {
  NGN_REQUIRE_ARG(out != nullptr, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new ngn_audit_suite{ngn::run_all_audits(seed)};
    return NGN_OK;
  });
}

void ngn_audit_suite_destroy(ngn_audit_suite *suite) { delete suite; }

size_t ngn_audit_count(const ngn_audit_suite *suite) {
  return suite ? suite->reports.size() : 0;
}

ngn_status ngn_audit_get(const ngn_audit_suite *suite, size_t i, ngn_audit_info *out) {
  NGN_REQUIRE_ARG(suite != nullptr && out != nullptr, "null argument");
  NGN_REQUIRE_ARG(i < suite->reports.size(), "audit index out of range");
  const auto &r = suite->reports[i];
  *out = {r.name.c_str(), r.passed ? 1 : 0, r.max_violation, r.tolerance, r.location.c_str()};
  return NGN_OK;
}

int ngn_audit_all_passed(const ngn_audit_suite *suite) {
  if (suite == nullptr) return 0;
  for (const auto &r : suite->reports)
    if (!r.passed) return 0;
  return 1;
}

ngn_status ngn_audit_csv(const ngn_audit_suite *suite, char *buf, size_t cap, size_t *needed) {
  NGN_REQUIRE_ARG(suite != nullptr, "null argument");
  return guarded([&] {
    std::ostringstream os;
    ngn::write_audit_csv(suite->reports, os);
    return copy_text(os.str(), buf, cap, needed);
  });
}

ngn_status ngn_gamma_value(double c, double loss, double grad_sq, double *out) {
  NGN_REQUIRE_ARG(out != nullptr, "null argument");
  NGN_REQUIRE_ARG(c > 0.0 && loss >= 0.0 && grad_sq >= 0.0,
                  "need c > 0, loss >= 0 and grad_sq >= 0");
  return guarded([&] {
    *out = ngn::ngn_gamma(c, loss, grad_sq);
    return NGN_OK;
  });
}

ngn_status ngn_theory_momentum_params(double c, double L, double *rho, double *lambda_max,
                                      double *beta_max) {
  return guarded([&] {
    const ngn::MomentumParams p = ngn::ngn_m_params(c, L);
    if (rho) *rho = p.rho;
    if (lambda_max) *lambda_max = p.lambda_max;
    if (beta_max) *beta_max = p.beta_max;
    return NGN_OK;
  });
}

ngn_status ngn_theory_ngn_m_bound(const ngn_theory_inputs *in, double *out) {
  NGN_REQUIRE_ARG(in != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    ngn::TheoryInputs t;
    t.c = in->c;
    t.L = in->L;
    t.K = in->K;
    t.dist0_sq = in->dist0_sq;
    t.sigma_int_sq = in->sigma_int_sq;
    t.sigma_pos_sq = in->sigma_pos_sq;
    *out = ngn::ngn_m_bound(t);
    return NGN_OK;
  });
}

ngn_status ngn_theory_ngn_m_bound_decaying(const ngn_theory_inputs *in, double *out) {
  NGN_REQUIRE_ARG(in != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = ngn::ngn_m_bound_decaying(in->c, in->L, in->K, in->dist0_sq, in->sigma_int_sq,
                                     in->sigma_pos_sq);
    return NGN_OK;
  });
}

ngn_status ngn_theory_ngn_d_bound(int mode, size_t d, const double *c_coord,
                                  const double *L_coord, const double *sigma_coord, int64_t K,
                                  double f0_gap, double mu, double *out) {
  NGN_REQUIRE_ARG(out != nullptr && c_coord != nullptr && L_coord != nullptr &&
                      sigma_coord != nullptr,
                  "null argument");
  NGN_REQUIRE_ARG(mode == 0 || mode == 1, "mode must be 0 (non-convex) or 1 (PL)");
  return guarded([&] {
    ngn::TheoryInputs t;
    t.K = K;
    t.f0_gap = f0_gap;
    t.mu = mu;
    t.c_coord.assign(c_coord, c_coord + d);
    t.L_coord.assign(L_coord, L_coord + d);
    t.sigma_coord.assign(sigma_coord, sigma_coord + d);
    *out = ngn::ngn_d_bound(t, mode == 0 ? ngn::NgnDMode::Nonconvex : ngn::NgnDMode::PL);
    return NGN_OK;
  });
}

ngn_status ngn_theory_gammahat_range(double C_poly, double *lo, double *hi,
                                     double *beta_threshold) {
  return guarded([&] {
    const ngn::GammaHatRange r = ngn::gammahat_range(C_poly);
    if (lo) *lo = r.lo;
    if (hi) *hi = r.hi;
    if (beta_threshold) *beta_threshold = r.beta_threshold;
    return NGN_OK;
  });
}

}  // extern "C"

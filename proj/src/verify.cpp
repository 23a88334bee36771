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

#include "ngn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ngn/csv.hpp"
#include "ngn/rng.hpp"
#include "ngn/theory.hpp"

namespace ngn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tracks the worst residual; NaN counts as an unbounded violation.
struct Worst {
  double value = 0.0;
  std::string where;

  void update(double v, const std::string &loc) {
    if (std::isnan(v)) v = kInf;
    if (where.empty() || v > value) {
      value = std::max(value, v);
      where = loc;
    }
  }
};

AuditReport finish(std::string name, const Worst &w, double tol) {
  AuditReport r;
  r.name = std::move(name);
  r.max_violation = w.value;
  r.tolerance = tol;
  r.location = w.where.empty() ? "-" : w.where;
  r.passed = w.value <= tol;
  return r;
}

std::string at_step(std::size_t k) { return "step " + std::to_string(k); }
std::string at_coord(std::size_t k, std::size_t j) {
  return "step " + std::to_string(k) + " coord " + std::to_string(j);
}

RunBudget exact_budget(std::int64_t steps, std::size_t batch_size, bool detail) {
  RunBudget b;
  b.max_steps = steps;
  b.success_loss = -1.0;  // never stop early; losses are non-negative
  b.diverge_loss = kInf;
  b.batch_size = batch_size;
  b.record_detail = detail;
  return b;
}

struct TheoremProblem {
  double L;
  double f_star;
  Vector x_star;
};

TheoremProblem theorem_inputs(const StochasticObjective &problem) {
  const auto &md = problem.metadata();
  require(md.L.has_value() && md.f_star.has_value() && md.x_star.has_value(),
          "theorem audit needs L, f_star and x_star metadata");
  require(*md.L > 0.0, "theorem audit needs L > 0");
  return {*md.L, *md.f_star, *md.x_star};
}

double max_abs_diff(const Vector &a, const Vector &b) {
  if (a.size() != b.size()) return kInf;
  double m = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    if (a(j) == b(j)) continue;  // also treats +0 and -0 as equal
    const double d = std::abs(a(j) - b(j));
    m = std::isnan(d) ? kInf : std::max(m, d);
  }
  return m;
}

AuditReport compare_runs(std::string name, const RunRecord &a, const RunRecord &b) {
  Worst w;
  const auto &xa = a.detail.iterates;
  const auto &xb = b.detail.iterates;
  if (xa.size() != xb.size() || a.status != b.status) w.update(kInf, "trajectory length");
  for (std::size_t k = 0; k < std::min(xa.size(), xb.size()); ++k)
    w.update(max_abs_diff(xa[k], xb[k]), at_step(k));
  w.update(max_abs_diff(a.x_final, b.x_final), "final");
  return finish(std::move(name), w, 0.0);
}

}  // namespace

AuditReport audit_ima_equivalence(const StochasticObjective &problem, const OptimizerSpec &spec,
                                  std::int64_t steps, std::uint64_t seed,
                                  std::size_t batch_size) {
  require(spec.kind == OptimizerKind::NGN_M_V1, "IMA audit needs an ngn-m (Ver.1) spec");
  spec.validate_for_dim(problem.dim());
  require(steps >= 1, "IMA audit needs steps >= 1");
  const std::size_t bs = batch_size == 0 ? problem.n_samples() : batch_size;
  const double beta = spec.beta1;
  const double lambda = beta / (1.0 - beta);

  OptimizerState alg = init_state(problem.default_start());
  Vector x = problem.default_start();
  Vector x_prev = x;
  Vector z = x;

  Worst w;
  for (std::int64_t k = 0; k < steps; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    const Batch batch = sample_batch(problem, seed, static_cast<std::uint64_t>(k), bs);

    // Heavy-ball form.
    const StepSample s_alg = problem.evaluate(alg.x, batch);
    alg = step(alg, s_alg, spec).state;

    // Moving-average form: z' = z - gamma g(x), x' = (lambda x + z') / (1 + lambda).
    const StepSample s = problem.evaluate(x, batch);
    const double c = schedule_c(spec.schedule, spec.c, k, spec.schedule_K);
    const double gamma = ngn_gamma(c, s.loss, s.grad.squaredNorm());
    z = z - gamma * s.grad;
    x_prev = x;
    x = (lambda / (1.0 + lambda)) * x + (1.0 / (1.0 + lambda)) * z;

    w.update((alg.x - x).norm(), at_step(ks + 1));
    w.update((z - (x + lambda * (x - x_prev))).norm(), "relation " + at_step(ks + 1));
  }
  return finish("ima_equivalence_beta_" + format_double(beta), w, kImaTolerance);
}

AuditReport audit_stepsize_bounds(const RunRecord &run, double c, double L) {
  require(std::isfinite(L) && L >= 0.0, "step-size audit needs smoothness metadata L");
  require(c > 0.0, "step-size audit needs c > 0");
  Worst w;
  for (std::size_t k = 0; k < run.step_reports.size(); ++k) {
    const double g = run.step_reports[k].gamma_scalar;
    if (std::isnan(g) && k + 1 == run.step_reports.size()) continue;  // terminal row
    const double ck = schedule_c(run.spec.schedule, c, static_cast<std::int64_t>(k),
                                 run.spec.schedule_K);
    const double lo = ck / (1.0 + ck * L);
    w.update(std::max({0.0, lo - g, g - ck}) / ck, at_step(k));
  }
  return finish("stepsize_bounds_scalar", w, kStepsizeTolerance);
}

AuditReport audit_stepsize_bounds(const RunRecord &run, const std::vector<double> &L_coord) {
  const auto &gammas = run.detail.gamma_coord;
  const auto &cs = run.detail.c_coord;
  require(!gammas.empty() || run.step_reports.size() <= 1,
          "coordinate step-size audit needs a run recorded with detail");
  Worst w;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    require(gammas[k].size() == L_coord.size() && cs[k].size() == L_coord.size(),
            "coordinate step-size audit: L_coord length does not match the run");
    for (std::size_t j = 0; j < L_coord.size(); ++j) {
      const double cj = cs[k][j], g = gammas[k][j];
      const double lo = cj / (1.0 + cj * L_coord[j]);
      w.update(std::max({0.0, lo - g, g - cj}) / cj, at_coord(k, j));
    }
  }
  return finish("stepsize_bounds_coordinate", w, kStepsizeTolerance);
}

AuditReport audit_fundamental_equality(const RunRecord &run) {
  require(run.spec.kind == OptimizerKind::NGN_D, "fundamental equality audit needs an NGN-D run");
  const auto &gammas = run.detail.gamma_coord;
  const auto &cs = run.detail.c_coord;
  const auto &grads = run.detail.grads;
  require(!gammas.empty() || run.step_reports.size() <= 1,
          "fundamental equality audit needs a run recorded with detail");
  Worst w;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const double f = run.losses[k];
    for (std::size_t j = 0; j < gammas[k].size(); ++j) {
      const double g = grads[k](static_cast<Eigen::Index>(j));
      const double gamma = gammas[k][j], cj = cs[k][j];
      const double lhs = gamma * g * g;
      const double rhs = 2.0 * ((cj - gamma) / cj) * f;
      const double residual = std::abs(lhs - rhs);
      w.update(f > 0.0 ? residual / f : residual, at_coord(k, j));
    }
  }
  return finish("fundamental_equality", w, kEqualityTolerance);
}

std::vector<AuditReport> audit_reductions(const StochasticObjective &problem, std::uint64_t seed,
                                          std::int64_t steps, std::size_t batch_size) {
  const RunBudget budget = exact_budget(steps, batch_size, true);
  auto run = [&](OptimizerKind kind, double beta, auto &&tweak) {
    OptimizerSpec s;
    s.kind = kind;
    s.c = 0.5;
    s.beta1 = beta;
    tweak(s);
    return run_once(problem, s, budget, seed);
  };
  auto none = [](OptimizerSpec &) {};
  auto identity = [](OptimizerSpec &s) { s.precond_identity = true; };
  auto no_decay = [](OptimizerSpec &s) { s.wd_lambda = 0.0; };

  std::vector<AuditReport> out;
  out.push_back(compare_runs("reduction_ngn_m_beta0_vs_ngn",
                             run(OptimizerKind::NGN_M_V1, 0.0, none),
                             run(OptimizerKind::NGN, 0.0, none)));
  out.push_back(compare_runs("reduction_mdv2_identity_vs_ngn_d",
                             run(OptimizerKind::NGN_MD_V2, 0.0, identity),
                             run(OptimizerKind::NGN_D, 0.0, none)));
  out.push_back(compare_runs("reduction_mdv1_identity_vs_ngn_m",
                             run(OptimizerKind::NGN_MD_V1, 0.9, identity),
                             run(OptimizerKind::NGN_M_V1, 0.9, none)));
  const RunRecord mdv1 = run(OptimizerKind::NGN_MD_V1, 0.9, none);
  out.push_back(compare_runs("reduction_decoupled_wd0_vs_mdv1",
                             run(OptimizerKind::DEC_NGN_MDV1, 0.9, no_decay), mdv1));
  out.push_back(compare_runs("reduction_coupled_wd0_vs_mdv1",
                             run(OptimizerKind::NGN_MDV1W, 0.9, no_decay), mdv1));
  return out;
}

AuditReport audit_theorem_bound(const StochasticObjective &problem, std::int64_t K) {
  require(K >= 10, "theorem audit requires K >= 10");
  const TheoremProblem tp = theorem_inputs(problem);

  OptimizerSpec spec;
  spec.kind = OptimizerKind::NGN_M_V1;
  spec.c = 1.0;
  spec.schedule = Schedule::InvSqrtK;
  spec.schedule_K = K;
  const double c = schedule_c(spec.schedule, spec.c, 0, K);
  spec.beta1 = ngn_m_params(c, tp.L).beta_max;

  const RunRecord run = run_once(problem, spec, exact_budget(K, 0, false), 0);
  double mean = 0.0;
  for (std::size_t k = 0; k < run.full_losses.size(); ++k) mean += run.full_losses[k] - tp.f_star;
  mean /= static_cast<double>(run.full_losses.size());

  TheoryInputs in;
  in.c = c;
  in.L = tp.L;
  in.K = K;
  in.dist0_sq = (problem.default_start() - tp.x_star).squaredNorm();
  in.sigma_int_sq = 0.0;  // full batch
  in.sigma_pos_sq = std::max(0.0, tp.f_star);
  const double bound = ngn_m_bound(in);

  AuditReport r;
  r.name = "theorem_bound_constant";
  r.max_violation = std::isnan(mean) ? kInf : mean - bound;
  r.tolerance = 0.0;
  r.location = "K " + std::to_string(K);
  r.passed = r.max_violation <= 0.0;
  return r;
}

AuditReport audit_theorem_bound_decaying(const StochasticObjective &problem, std::int64_t K) {
  require(K >= 10, "theorem audit requires K >= 10");
  const TheoremProblem tp = theorem_inputs(problem);
  const double c0 = 1.0;
  const std::vector<double> weights = decaying_average_weights(c0, tp.L, K);

  OptimizerState state = init_state(problem.default_start());
  const Batch full = problem.full_batch();
  Vector x_hat = Vector::Zero(state.x.size());
  for (std::int64_t k = 0; k < K; ++k) {
    x_hat += weights[static_cast<std::size_t>(k)] * state.x;
    OptimizerSpec spec;
    spec.kind = OptimizerKind::NGN_M_V1;
    spec.c = c0 / std::sqrt(static_cast<double>(k + 1));
    spec.beta1 = ngn_m_params(spec.c, tp.L).beta_max;
    state = step(state, problem.evaluate(state.x, full), spec).state;
  }
  const double gap = problem.full_loss(x_hat) - tp.f_star;
  const double bound = ngn_m_bound_decaying(c0, tp.L, K,
                                            (problem.default_start() - tp.x_star).squaredNorm(),
                                            0.0, std::max(0.0, tp.f_star));
  AuditReport r;
  r.name = "theorem_bound_decaying";
  r.max_violation = std::isnan(gap) ? kInf : gap - bound;
  r.tolerance = 0.0;
  r.location = "K " + std::to_string(K);
  r.passed = r.max_violation <= 0.0;
  return r;
}

AuditReport audit_weight_decay_clip(std::uint64_t seed, std::size_t instances) {
  Rng rng(seed, 0x77643a636c6970ULL);
  Worst w;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto d = static_cast<Eigen::Index>(2 + rng.uniform_index(9));
    Vector x(d), xp(d), g(d), v(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      x(j) = rng.normal();
      xp(j) = x(j) + 0.1 * rng.normal();
      g(j) = x(j) * rng.uniform(0.1, 2.0);  // g'x > 0
      v(j) = rng.uniform(0.0, 1.0);
    }
    OptimizerSpec spec;
    spec.kind = OptimizerKind::NGN_MDV1W;
    spec.c = std::pow(10.0, rng.uniform(-3.0, 1.0));
    spec.wd_lambda = std::pow(10.0, rng.uniform(-3.0, 0.0));
    spec.beta1 = rng.uniform(0.0, 0.95);

    // Choose f so that (c lambda / 2f) g'x lies in (1, 100).
    const double gtx = g.dot(x);
    const double f = spec.c * spec.wd_lambda * gtx / (2.0 * rng.uniform(1.01, 100.0));

    OptimizerState state = init_state(x);
    state.x_prev = xp;
    state.v = v;
    state.k = static_cast<std::int64_t>(rng.uniform_index(50));
    StepSample sample{f, g, {}};
    const StepResult out = step(state, sample, spec);

    const std::string loc = "instance " + std::to_string(i);
    w.update(std::abs(out.report.gamma_scalar), loc);
    for (double gj : out.report.gamma_coord) w.update(std::abs(gj), loc);
    const double shrink = 1.0 + spec.wd_lambda * spec.c;
    Vector expected(d);
    for (Eigen::Index j = 0; j < d; ++j)
      expected(j) = x(j) / shrink + spec.beta1 * (x(j) - xp(j));
    w.update(max_abs_diff(out.state.x, expected), loc);
  }
  return finish("weight_decay_clip", w, 0.0);
}

std::vector<AuditReport> run_all_audits(std::uint64_t seed) {
  ProblemSpec ps;
  ps.kind = ProblemKind::LeastSquares;
  ps.dim = 20;
  ps.rows = 40;
  ps.seed = seed;
  const StochasticObjective ls = build_problem(ps);
  ps.interpolating = true;
  const StochasticObjective interp = build_problem(ps);
  const auto &md = ls.metadata();

  std::vector<AuditReport> out;
  const std::size_t bs = 4;

  {
    OptimizerSpec s;
    s.kind = OptimizerKind::NGN;
    s.c = 1.0;
    const RunRecord run = run_once(ls, s, exact_budget(2000, bs, false), seed);
    out.push_back(audit_stepsize_bounds(run, s.c, *md.L_component));
  }
  {
    OptimizerSpec s;
    s.kind = OptimizerKind::NGN_D;
    s.c = 0.1;
    const RunRecord run = run_once(ls, s, exact_budget(1000, bs, true), seed);
    out.push_back(audit_stepsize_bounds(run, md.L_coord_component));
    out.push_back(audit_fundamental_equality(run));
  }
  for (double beta : {0.1, 0.5, 0.9}) {
    OptimizerSpec s;
    s.kind = OptimizerKind::NGN_M_V1;
    s.c = 1.0;
    s.beta1 = beta;
    out.push_back(audit_ima_equivalence(ls, s, 100, seed, bs));
  }
  for (auto &r : audit_reductions(ls, seed, 100, 8)) out.push_back(std::move(r));
  out.push_back(audit_theorem_bound(interp, 10000));
  out.push_back(audit_theorem_bound_decaying(interp, 10000));
  out.push_back(audit_weight_decay_clip(seed));
  return out;
}

std::string audit_row(const AuditReport &report) {
  return report.name + ',' + (report.passed ? "true" : "false") + ',' +
         format_double(report.max_violation) + ',' + report.location;
}

void write_audit_csv(const std::vector<AuditReport> &reports, std::ostream &out) {
  out << kAuditHeader << '\n';
  for (const auto &r : reports) out << audit_row(r) << '\n';
}

}  // namespace ngn

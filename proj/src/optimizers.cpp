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

// The update rules below are written as explicit per-coordinate loops with a
// fixed evaluation order. Several variants collapse onto each other when a
// parameter is switched off (beta = 0, D = I, lambda = 0) and those
// trajectories are required to agree exactly, so each rule spells out the
// same expression shape as the rule it reduces to.

#include "ngn/optimizers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace ngn {

namespace {

constexpr std::array<std::pair<OptimizerKind, std::string_view>, 10> kKindNames{{
    {OptimizerKind::NGN, "ngn"},
    {OptimizerKind::NGN_M_V1, "ngn-m"},
    {OptimizerKind::NGN_M_V2, "ngn-m-v2"},
    {OptimizerKind::NGN_D, "ngn-d"},
    {OptimizerKind::NGN_MD_V1, "ngn-mdv1"},
    {OptimizerKind::NGN_MD_V2, "ngn-mdv2"},
    {OptimizerKind::DEC_NGN_MDV1, "dec-ngn-mdv1"},
    {OptimizerKind::NGN_MDV1W, "ngn-mdv1w"},
    {OptimizerKind::SGDM, "sgdm"},
    {OptimizerKind::ADAM, "adam"},
}};

bool finite(double v) { return std::isfinite(v); }

void check_sample(const OptimizerState &state, const StepSample &sample) {
  if (sample.grad.size() != state.x.size())
    throw InvalidArgument("gradient has dimension " + std::to_string(sample.grad.size()) +
                          ", iterate has " + std::to_string(state.x.size()));
  if (!finite(sample.loss)) throw NumericError("non-finite loss");
  for (Eigen::Index j = 0; j < sample.grad.size(); ++j)
    if (!finite(sample.grad(j))) throw NumericError("non-finite gradient");
}

double sum_of_squares(const Vector &g) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) s += g(j) * g(j);
  return s;
}

double weighted_sum_of_squares(const Vector &g, const Vector &D) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) s += g(j) * g(j) / D(j);
  return s;
}

double current_c(const OptimizerSpec &spec, double c0, std::int64_t k) {
  return schedule_c(spec.schedule, c0, k, spec.schedule_K);
}

// Preconditioner for the MD family, honoring the identity override.
Preconditioner md_precond(const OptimizerState &state, const StepSample &sample,
                          const OptimizerSpec &spec) {
  Preconditioner p = precond_update(state.v, sample.grad, spec.beta2, state.k, spec.eps);
  if (spec.precond_identity) p.D = Vector::Ones(p.D.size());
  return p;
}

// Shifts the iterate history and fills the step statistics.
StepResult finish(const OptimizerState &state, Vector x_new, StepReport report) {
  StepResult out;
  out.state = state;
  out.report = std::move(report);
  auto &r = out.report;
  r.update_norm = (x_new - state.x).norm();
  if (!r.gamma_coord.empty()) {
    r.gamma_coord_min = *std::min_element(r.gamma_coord.begin(), r.gamma_coord.end());
    r.gamma_coord_max = *std::max_element(r.gamma_coord.begin(), r.gamma_coord.end());
    double s = 0.0;
    for (double g : r.gamma_coord) s += g;
    r.gamma_coord_mean = s / static_cast<double>(r.gamma_coord.size());
  }
  out.state.x_prev = state.x;
  out.state.x = std::move(x_new);
  out.state.k = state.k + 1;
  return out;
}

std::vector<double> constant_coords(double value, Eigen::Index n) {
  return std::vector<double>(static_cast<std::size_t>(n), value);
}

}  // namespace

std::string_view to_string(OptimizerKind kind) {
  for (const auto &[k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

OptimizerKind parse_optimizer_kind(std::string_view name) {
  for (const auto &[k, n] : kKindNames)
    if (n == name) return k;
  if (name == "ngn-m-v1") return OptimizerKind::NGN_M_V1;
  throw InvalidArgument("unknown optimizer '" + std::string(name) + "'");
}

std::string_view to_string(Schedule schedule) {
  switch (schedule) {
    case Schedule::Constant: return "constant";
    case Schedule::InvSqrtK: return "inv-sqrt-K";
    case Schedule::InvSqrtStep: return "inv-sqrt-step";
  }
  return "unknown";
}

Schedule parse_schedule(std::string_view name) {
  if (name == "constant") return Schedule::Constant;
  if (name == "inv-sqrt-K" || name == "inv-sqrt-k") return Schedule::InvSqrtK;
  if (name == "inv-sqrt-step") return Schedule::InvSqrtStep;
  throw InvalidArgument("unknown schedule '" + std::string(name) + "'");
}

void OptimizerSpec::validate() const {
  require(finite(c) && c > 0.0, "c must be finite and > 0");
  require(finite(beta1) && beta1 >= 0.0 && beta1 < 1.0, "beta must lie in [0, 1)");
  require(finite(beta2) && beta2 >= 0.0 && beta2 < 1.0, "beta2 must lie in [0, 1)");
  require(finite(eps) && eps > 0.0, "eps must be finite and > 0");
  require(finite(wd_lambda) && wd_lambda >= 0.0, "wd must be finite and >= 0");
  if (schedule == Schedule::InvSqrtK)
    require(schedule_K >= 1, "schedule inv-sqrt-K needs K >= 1");
  for (double cj : c_coord) require(finite(cj) && cj > 0.0, "c_coord entries must be > 0");
  if (dampening)
    require(finite(*dampening) && *dampening >= 0.0 && *dampening < 1.0,
            "dampening must lie in [0, 1)");
}

void OptimizerSpec::validate_for_dim(std::size_t dim) const {
  validate();
  if (!c_coord.empty())
    require(c_coord.size() == dim, "c_coord has " + std::to_string(c_coord.size()) +
                                       " entries, problem dim is " + std::to_string(dim));
}

OptimizerState init_state(const Vector &x0) {
  OptimizerState s;
  s.x = x0;
  s.x_prev = x0;
  s.v = Vector::Zero(x0.size());
  s.m = Vector::Zero(x0.size());
  s.k = 0;
  return s;
}

double ngn_gamma(double c, double loss, double grad_sq) {
  if (!finite(c) || !finite(loss) || !finite(grad_sq))
    throw NumericError("ngn_gamma: non-finite input");
  if (grad_sq == 0.0) return c;
  // 2cf / (2f + c g^2) == c / (1 + c g^2 / 2f), but defined at f = 0.
  const double gamma = 2.0 * c * loss / (2.0 * loss + c * grad_sq);
  return std::min(gamma, c);
}

Preconditioner precond_update(const Vector &v, const Vector &grad, double beta2,
                              std::int64_t k, double eps) {
  require(k >= 0, "step index must be >= 0");
  require(v.size() == grad.size(), "preconditioner state/gradient size mismatch");
  const double correction = 1.0 - std::pow(beta2, static_cast<double>(k + 1));
  Preconditioner p{Vector(v.size()), Vector(v.size())};
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (!finite(grad(j))) throw NumericError("precond_update: non-finite gradient");
    p.v(j) = beta2 * v(j) + (1.0 - beta2) * (grad(j) * grad(j));
    p.D(j) = eps + std::sqrt(p.v(j) / correction);
  }
  return p;
}

double schedule_c(Schedule schedule, double c0, std::int64_t k, std::int64_t K) {
  switch (schedule) {
    case Schedule::Constant:
      return c0;
    case Schedule::InvSqrtK:
      require(K >= 1, "schedule inv-sqrt-K: horizon K missing");
      return c0 / std::sqrt(static_cast<double>(K));
    case Schedule::InvSqrtStep:
      return c0 / std::sqrt(static_cast<double>(k + 1));
  }
  return c0;
}

StepResult step_ngn(const OptimizerState &state, const StepSample &sample,
                    const OptimizerSpec &spec) {
  require(spec.kind == OptimizerKind::NGN, "step_ngn: wrong optimizer kind");
  check_sample(state, sample);
  const Vector &x = state.x;
  const Vector &g = sample.grad;
  const double c = current_c(spec, spec.c, state.k);
  const double gamma = ngn_gamma(c, sample.loss, sum_of_squares(g));

  Vector x_new(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) x_new(j) = x(j) - gamma * g(j);

  StepReport r;
  r.gamma_scalar = gamma;
  r.gamma_coord = constant_coords(gamma, x.size());
  r.c_coord = constant_coords(c, x.size());
  return finish(state, std::move(x_new), std::move(r));
}

StepResult step_ngn_m(const OptimizerState &state, const StepSample &sample,
                      const OptimizerSpec &spec) {
  require(spec.kind == OptimizerKind::NGN_M_V1 || spec.kind == OptimizerKind::NGN_M_V2,
          "step_ngn_m: wrong optimizer kind");
  check_sample(state, sample);
  const Vector &x = state.x;
  const Vector &xp = state.x_prev;
  const Vector &g = sample.grad;
  const double beta = spec.beta1;
  const double c = current_c(spec, spec.c, state.k);

  Vector x_new(x.size());
  StepReport r;
  if (spec.kind == OptimizerKind::NGN_M_V1) {
    const double gamma = ngn_gamma(c, sample.loss, sum_of_squares(g));
    for (Eigen::Index j = 0; j < x.size(); ++j)
      x_new(j) = x(j) - (1.0 - beta) * (gamma * g(j)) + beta * (x(j) - xp(j));
    r.gamma_scalar = gamma;
    r.gamma_coord = constant_coords(gamma, x.size());
    r.c_coord = constant_coords(c, x.size());
    return finish(state, std::move(x_new), std::move(r));
  }

  // Ver.2: step-size computed on the averaged direction (no bias correction).
  Vector m(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j)
    m(j) = beta * state.m(j) + (1.0 - beta) * g(j);
  const double gamma = ngn_gamma(c, sample.loss, sum_of_squares(m));
  for (Eigen::Index j = 0; j < x.size(); ++j) x_new(j) = x(j) - gamma * m(j);
  r.gamma_scalar = gamma;
  r.gamma_coord = constant_coords(gamma, x.size());
  r.c_coord = constant_coords(c, x.size());
  StepResult out = finish(state, std::move(x_new), std::move(r));
  out.state.m = std::move(m);
  return out;
}

StepResult step_ngn_d(const OptimizerState &state, const StepSample &sample,
                      const OptimizerSpec &spec) {
  require(spec.kind == OptimizerKind::NGN_D, "step_ngn_d: wrong optimizer kind");
  check_sample(state, sample);
  const Vector &x = state.x;
  const Vector &g = sample.grad;
  const auto n = static_cast<std::size_t>(x.size());
  if (!spec.c_coord.empty())
    require(spec.c_coord.size() == n, "c_coord length does not match dimension");

  Vector v_new = state.v;
  Vector D;
  if (spec.ngn_d_precond) {
    Preconditioner p = precond_update(state.v, g, spec.beta2, state.k, spec.eps);
    v_new = std::move(p.v);
    D = std::move(p.D);
  }

  StepReport r;
  r.gamma_coord.resize(n);
  r.c_coord.resize(n);
  Vector x_new(x.size());
  for (std::size_t j = 0; j < n; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double base = spec.c_coord.empty() ? spec.c : spec.c_coord[j];
    double cj = current_c(spec, base, state.k);
    if (spec.ngn_d_precond) cj = cj / D(jj);
    const double gamma = ngn_gamma(cj, sample.loss, g(jj) * g(jj));
    r.c_coord[j] = cj;
    r.gamma_coord[j] = gamma;
    x_new(jj) = x(jj) - gamma * g(jj);
  }
  double s = 0.0;
  for (double gj : r.gamma_coord) s += gj;
  r.gamma_scalar = s / static_cast<double>(n);
  StepResult out = finish(state, std::move(x_new), std::move(r));
  out.state.v = std::move(v_new);
  return out;
}

StepResult step_ngn_md(const OptimizerState &state, const StepSample &sample,
                       const OptimizerSpec &spec) {
  require(spec.kind == OptimizerKind::NGN_MD_V1 || spec.kind == OptimizerKind::NGN_MD_V2,
          "step_ngn_md: wrong optimizer kind");
  check_sample(state, sample);
  const Vector &x = state.x;
  const Vector &xp = state.x_prev;
  const Vector &g = sample.grad;
  const double beta = spec.beta1;
  const double c = current_c(spec, spec.c, state.k);
  Preconditioner p = md_precond(state, sample, spec);
  const Vector &D = p.D;

  StepReport r;
  r.gamma_coord.resize(static_cast<std::size_t>(x.size()));
  r.c_coord.resize(static_cast<std::size_t>(x.size()));
  Vector x_new(x.size());
  if (spec.kind == OptimizerKind::NGN_MD_V1) {
    const double gamma = ngn_gamma(c, sample.loss, weighted_sum_of_squares(g, D));
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double dir = gamma * g(j) / D(j);
      x_new(j) = x(j) - (1.0 - beta) * dir + beta * (x(j) - xp(j));
      r.gamma_coord[static_cast<std::size_t>(j)] = gamma / D(j);
      r.c_coord[static_cast<std::size_t>(j)] = c;
    }
    r.gamma_scalar = gamma;
  } else {
    double s = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double cj = c / D(j);
      const double gamma = ngn_gamma(cj, sample.loss, g(j) * g(j));
      x_new(j) = x(j) - (1.0 - beta) * (gamma * g(j)) + beta * (x(j) - xp(j));
      r.gamma_coord[static_cast<std::size_t>(j)] = gamma;
      r.c_coord[static_cast<std::size_t>(j)] = cj;
      s += gamma;
    }
    r.gamma_scalar = s / static_cast<double>(x.size());
  }
  StepResult out = finish(state, std::move(x_new), std::move(r));
  out.state.v = std::move(p.v);
  return out;
}

StepResult step_ngn_md_wd(const OptimizerState &state, const StepSample &sample,
                          const OptimizerSpec &spec) {
  require(spec.kind == OptimizerKind::DEC_NGN_MDV1 || spec.kind == OptimizerKind::NGN_MDV1W,
          "step_ngn_md_wd: wrong optimizer kind");
  check_sample(state, sample);
  const Vector &x = state.x;
  const Vector &xp = state.x_prev;
  const Vector &g = sample.grad;
  const double beta = spec.beta1;
  const double lambda = spec.wd_lambda;
  const double c = current_c(spec, spec.c, state.k);
  Preconditioner p = md_precond(state, sample, spec);
  const Vector &D = p.D;
  const double gsq = weighted_sum_of_squares(g, D);

  StepReport r;
  r.gamma_coord.resize(static_cast<std::size_t>(x.size()));
  r.c_coord.resize(static_cast<std::size_t>(x.size()));
  Vector x_new(x.size());

  if (spec.kind == OptimizerKind::DEC_NGN_MDV1) {
    const double gamma = ngn_gamma(c, sample.loss, gsq);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double dir = gamma * g(j) / D(j);
      x_new(j) = (x(j) - lambda * c * x(j)) - (1.0 - beta) * dir + beta * (x(j) - xp(j));
      r.gamma_coord[static_cast<std::size_t>(j)] = gamma / D(j);
      r.c_coord[static_cast<std::size_t>(j)] = c;
    }
    r.gamma_scalar = gamma;
  } else {
    // (c/(1+lc)) / (1 + c||g||^2_{D^-1} / (2f(1+lc))) is the NGN step-size
    // with c replaced by c/(1+lc); the weight-decay factor is clipped at 0.
    const double shrink = 1.0 + lambda * c;
    double factor = 1.0;
    if (lambda != 0.0) {
      double gtx = 0.0;
      for (Eigen::Index j = 0; j < x.size(); ++j) gtx += g(j) * x(j);
      if (sample.loss > 0.0)
        factor = std::max(0.0, 1.0 - (c * lambda / (2.0 * sample.loss)) * gtx);
      else
        factor = gtx > 0.0 ? 0.0 : 1.0;
    }
    const double gamma = ngn_gamma(c / shrink, sample.loss, gsq) * factor;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double dir = gamma * g(j) / D(j);
      x_new(j) = x(j) / shrink - (1.0 - beta) * dir + beta * (x(j) - xp(j));
      r.gamma_coord[static_cast<std::size_t>(j)] = gamma / D(j);
      r.c_coord[static_cast<std::size_t>(j)] = c / shrink;
    }
    r.gamma_scalar = gamma;
  }
  StepResult out = finish(state, std::move(x_new), std::move(r));
  out.state.v = std::move(p.v);
  return out;
}

StepResult step_baseline(const OptimizerState &state, const StepSample &sample,
                         const OptimizerSpec &spec) {
  require(spec.kind == OptimizerKind::SGDM || spec.kind == OptimizerKind::ADAM,
          "step_baseline: wrong optimizer kind");
  check_sample(state, sample);
  const Vector &x = state.x;
  const Vector &xp = state.x_prev;
  const Vector &g = sample.grad;
  const double c = current_c(spec, spec.c, state.k);
  const double beta = spec.beta1;

  StepReport r;
  r.gamma_scalar = c;
  r.c_coord = constant_coords(c, x.size());
  Vector x_new(x.size());
  if (spec.kind == OptimizerKind::SGDM) {
    // Heavy-ball; by default with the (1 - beta) dampening of the NGN-M update.
    const double damp = spec.dampening.value_or(beta);
    for (Eigen::Index j = 0; j < x.size(); ++j)
      x_new(j) = x(j) - (1.0 - damp) * (c * g(j)) + beta * (x(j) - xp(j));
    r.gamma_coord = constant_coords(c, x.size());
    return finish(state, std::move(x_new), std::move(r));
  }

  const double t = static_cast<double>(state.k + 1);
  const double bc1 = 1.0 - std::pow(beta, t);
  const double bc2 = 1.0 - std::pow(spec.beta2, t);
  Vector m(x.size()), v(x.size());
  r.gamma_coord.resize(static_cast<std::size_t>(x.size()));
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    m(j) = beta * state.m(j) + (1.0 - beta) * g(j);
    v(j) = spec.beta2 * state.v(j) + (1.0 - spec.beta2) * (g(j) * g(j));
    const double rate = c / (std::sqrt(v(j) / bc2) + spec.eps);
    x_new(j) = x(j) - rate * (m(j) / bc1);
    r.gamma_coord[static_cast<std::size_t>(j)] = rate;
  }
  StepResult out = finish(state, std::move(x_new), std::move(r));
  out.state.m = std::move(m);
  out.state.v = std::move(v);
  return out;
}

StepResult step(const OptimizerState &state, const StepSample &sample,
                const OptimizerSpec &spec) {
  switch (spec.kind) {
    case OptimizerKind::NGN: return step_ngn(state, sample, spec);
    case OptimizerKind::NGN_M_V1:
    case OptimizerKind::NGN_M_V2: return step_ngn_m(state, sample, spec);
    case OptimizerKind::NGN_D: return step_ngn_d(state, sample, spec);
    case OptimizerKind::NGN_MD_V1:
    case OptimizerKind::NGN_MD_V2: return step_ngn_md(state, sample, spec);
    case OptimizerKind::DEC_NGN_MDV1:
    case OptimizerKind::NGN_MDV1W: return step_ngn_md_wd(state, sample, spec);
    case OptimizerKind::SGDM:
    case OptimizerKind::ADAM: return step_baseline(state, sample, spec);
  }
  throw InvalidArgument("unknown optimizer kind");
}

}  // namespace ngn

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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Expected values come from oracles written here,
// not from the library's own audit code.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ngn/config.hpp"
#include "ngn/harness.hpp"
#include "ngn/optimizers.hpp"
#include "ngn/problems.hpp"
#include "ngn/rng.hpp"
#include "ngn/verify.hpp"

using namespace ngn;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_bits(const Vector &a, const Vector &b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (!same_bits(a(i), b(i))) return false;
  return true;
}

Matrix gaussian(Rng &rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = rng.normal();
  return A;
}

Vector gaussian(Rng &rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

StochasticObjective least_squares(const Matrix &A, const Vector &b) {
  ProblemSpec s;
  s.kind = ProblemKind::LeastSquares;
  s.A = A;
  s.b = b;
  return build_problem(s);
}

RunBudget exact_budget(std::int64_t steps, std::size_t batch_size, bool detail) {
  RunBudget b;
  b.max_steps = steps;
  b.success_loss = -1.0;
  b.diverge_loss = kInf;
  b.batch_size = batch_size;
  b.record_detail = detail;
  return b;
}

// Largest eigenvalue of A^T A, the smoothness of (1/2)||Ax - b||^2.
double top_eigenvalue(const Matrix &A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A.transpose() * A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

// Smoothness of a single-row loss f_i = (n/2)(a_i'x - b_i)^2, and its
// per-coordinate version.
double component_L(const Matrix &A) {
  return static_cast<double>(A.rows()) * A.rowwise().squaredNorm().maxCoeff();
}

std::vector<double> component_L_coord(const Matrix &A) {
  std::vector<double> L(static_cast<std::size_t>(A.cols()));
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    L[static_cast<std::size_t>(j)] = static_cast<double>(A.rows()) * A.col(j).cwiseAbs2().maxCoeff();
  return L;
}

// 2cf / (2f + c ||g||^2), c when the gradient vanishes.
double gamma_oracle(double c, double f, double gsq) {
  if (gsq == 0.0) return c;
  return 2.0 * c * f / (2.0 * f + c * gsq);
}

// ---------------------------------------------------------------------------

Outcome stepsize_bounds() {
  const auto t0 = Clock::now();
  Rng rng(101);
  std::size_t scalar_steps = 0, coord_steps = 0;
  double worst_scalar = 0.0, worst_coord = 0.0;
  // Ver.2 is left out: its step-size is computed on the momentum direction,
  // not on the batch gradient, so the lower bound does not apply.
  const OptimizerKind scalar_kinds[] = {OptimizerKind::NGN, OptimizerKind::NGN_M_V1};

  for (int trial = 0; trial < 60; ++trial) {
    const auto d = static_cast<Eigen::Index>(2 + rng.uniform_index(99));
    const auto rows = d + static_cast<Eigen::Index>(rng.uniform_index(60));
    const Matrix A = gaussian(rng, rows, d);
    const Vector b = trial % 3 == 0 ? Vector(A * gaussian(rng, d)) : gaussian(rng, rows);
    const auto p = least_squares(A, b);
    const bool full = trial % 4 == 0;
    const std::size_t bs = full ? 0 : 1 + rng.uniform_index(static_cast<std::uint64_t>(rows));
    const double L_scalar = full ? top_eigenvalue(A) : component_L(A);

    OptimizerSpec spec;
    spec.kind = scalar_kinds[trial % 2];
    spec.c = std::pow(10.0, rng.uniform(-3.0, 1.0));
    spec.beta1 = spec.kind == OptimizerKind::NGN ? 0.0 : rng.uniform(0.0, 0.95);
    const auto run = run_once(p, spec, exact_budget(250, bs, false), trial);
    for (std::size_t k = 0; k < run.step_reports.size(); ++k) {
      const double g = run.step_reports[k].gamma_scalar;
      if (std::isnan(g) && k + 1 == run.step_reports.size()) continue;
      const double lo = spec.c / (1.0 + spec.c * L_scalar);
      const double v = std::max({0.0, lo - g, g - spec.c}) / spec.c;
      worst_scalar = std::isnan(v) ? kInf : std::max(worst_scalar, v);
      ++scalar_steps;
    }

    // Per-coordinate NGN-D on the same data.
    OptimizerSpec dspec;
    dspec.kind = OptimizerKind::NGN_D;
    dspec.c = 0.1;
    dspec.ngn_d_precond = trial % 5 == 0;
    if (!dspec.ngn_d_precond) {
      dspec.c_coord.resize(static_cast<std::size_t>(d));
      for (double &cj : dspec.c_coord) cj = std::pow(10.0, rng.uniform(-3.0, -1.0));
    }
    const auto drun = run_once(p, dspec, exact_budget(200, bs, true), trial);
    std::vector<double> Lj = component_L_coord(A);
    if (full) {
      const Matrix H = A.transpose() * A;
      for (Eigen::Index j = 0; j < d; ++j) Lj[static_cast<std::size_t>(j)] = H(j, j);
    }
    for (std::size_t k = 0; k < drun.detail.gamma_coord.size(); ++k) {
      const auto &gam = drun.detail.gamma_coord[k];
      const auto &cs = drun.detail.c_coord[k];
      for (std::size_t j = 0; j < gam.size(); ++j) {
        const double lo = cs[j] / (1.0 + cs[j] * Lj[j]);
        const double v = std::max({0.0, lo - gam[j], gam[j] - cs[j]}) / cs[j];
        worst_coord = std::isnan(v) ? kInf : std::max(worst_coord, v);
      }
      ++coord_steps;
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.passed = scalar_steps >= 10000 && coord_steps >= 10000 && worst_scalar <= 1e-12 &&
             worst_coord <= 1e-12 && secs < 10.0;
  o.detail = std::to_string(scalar_steps) + " scalar / " + std::to_string(coord_steps) +
             " coordinate steps, worst relative violation " + fmt(worst_scalar) + " / " +
             fmt(worst_coord) + ", " + fmt(secs) + " s";
  return o;
}

Outcome fundamental_equality() {
  Rng rng(202);
  const Matrix A = gaussian(rng, 40, 10);
  const Vector b = gaussian(rng, 40);
  const auto p = least_squares(A, b);
  double worst = 0.0;
  std::size_t checked = 0;
  for (bool precond : {false, true}) {
    OptimizerSpec spec;
    spec.kind = OptimizerKind::NGN_D;
    spec.c = precond ? 0.05 : 0.01;
    spec.ngn_d_precond = precond;
    const auto run = run_once(p, spec, exact_budget(1000, 4, true), 3);
    if (run.detail.grads.size() != 1000) return {false, "run recorded too few steps"};
    for (std::size_t k = 0; k < run.detail.grads.size(); ++k) {
      const double f = run.losses[k];
      const Vector &g = run.detail.grads[k];
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        const double gam = run.detail.gamma_coord[k][static_cast<std::size_t>(j)];
        const double cj = run.detail.c_coord[k][static_cast<std::size_t>(j)];
        const double residual = std::abs(gam * g(j) * g(j) - 2.0 * ((cj - gam) / cj) * f);
        worst = std::max(worst, f > 0.0 ? residual / f : residual);
        ++checked;
      }
    }
  }
  return {worst <= 1e-12, std::to_string(checked) + " coordinate-steps over two 1000-step runs, " +
                              "worst relative residual " + fmt(worst)};
}

Outcome ima_equivalence() {
  Rng rng(303);
  const Matrix A = gaussian(rng, 30, 6);
  const Vector b = gaussian(rng, 30);
  const auto p = least_squares(A, b);
  const std::size_t bs = 5;
  double worst = 0.0, worst_relation = 0.0;
  for (double beta : {0.1, 0.5, 0.9}) {
    OptimizerSpec spec;
    spec.kind = OptimizerKind::NGN_M_V1;
    spec.c = 0.5;
    spec.beta1 = beta;
    const auto run = run_once(p, spec, exact_budget(100, bs, true), 9);

    // z' = z - gamma g(x), x' = (lambda x + z') / (1 + lambda).
    const double lambda = beta / (1.0 - beta);
    Vector x = p.default_start(), z = x, x_prev = x;
    for (std::int64_t k = 0; k < 100; ++k) {
      const Vector &x_alg = run.detail.iterates[static_cast<std::size_t>(k)];
      worst = std::max(worst, (x_alg - x).norm());
      const auto s = p.evaluate(x, sample_batch(p, 9, static_cast<std::uint64_t>(k), bs));
      const double gam = gamma_oracle(spec.c, s.loss, s.grad.squaredNorm());
      z -= gam * s.grad;
      x_prev = x;
      x = (lambda * x + z) / (1.0 + lambda);
      worst_relation = std::max(worst_relation, (z - (x + lambda * (x - x_prev))).norm());
    }
    worst = std::max(worst, (run.x_final - x).norm());
  }
  return {worst <= 1e-10 && worst_relation <= 1e-10,
          "max iterate gap " + fmt(worst) + ", max relation residual " + fmt(worst_relation)};
}

struct Pair {
  std::string name;
  OptimizerSpec a, b;
};

bool runs_identical(const RunRecord &x, const RunRecord &y) {
  if (x.losses.size() != y.losses.size()) return false;
  for (std::size_t k = 0; k < x.losses.size(); ++k) {
    if (!same_bits(x.losses[k], y.losses[k])) return false;
    if (!same_bits(x.detail.iterates[k], y.detail.iterates[k])) return false;
  }
  return same_bits(x.x_final, y.x_final);
}

Outcome reductions(const std::vector<Pair> &pairs) {
  Rng rng(404);
  const Matrix A = gaussian(rng, 24, 7);
  const Vector b = gaussian(rng, 24);
  const auto p = least_squares(A, b);
  std::string failed;
  for (const auto &pair : pairs) {
    for (std::size_t bs : {std::size_t{0}, std::size_t{6}}) {
      const auto ra = run_once(p, pair.a, exact_budget(100, bs, true), 17);
      const auto rb = run_once(p, pair.b, exact_budget(100, bs, true), 17);
      if (ra.steps() != 100 || !runs_identical(ra, rb)) failed += " " + pair.name;
    }
  }
  if (!failed.empty()) return {false, "not bit-identical:" + failed};
  return {true, std::to_string(pairs.size()) + " pairs bit-identical over 100 steps, full and mini-batch"};
}

OptimizerSpec make(OptimizerKind kind, double c, double beta) {
  OptimizerSpec s;
  s.kind = kind;
  s.c = c;
  s.beta1 = beta;
  return s;
}

Outcome reduction_identities() {
  std::vector<Pair> pairs;
  pairs.push_back({"ngn-m(beta=0)/ngn", make(OptimizerKind::NGN_M_V1, 0.7, 0.0),
                   make(OptimizerKind::NGN, 0.7, 0.0)});
  OptimizerSpec md2 = make(OptimizerKind::NGN_MD_V2, 0.3, 0.0);
  md2.precond_identity = true;
  pairs.push_back({"mdv2(beta1=0,D=I)/ngn-d", md2, make(OptimizerKind::NGN_D, 0.3, 0.0)});
  OptimizerSpec md1 = make(OptimizerKind::NGN_MD_V1, 0.7, 0.6);
  md1.precond_identity = true;
  pairs.push_back({"mdv1(D=I)/ngn-m", md1, make(OptimizerKind::NGN_M_V1, 0.7, 0.6)});
  OptimizerSpec dec = make(OptimizerKind::DEC_NGN_MDV1, 0.7, 0.6);
  dec.wd_lambda = 0.0;
  pairs.push_back({"dec-mdv1(lambda=0)/mdv1", dec, make(OptimizerKind::NGN_MD_V1, 0.7, 0.6)});
  return reductions(pairs);
}

// ---------------------------------------------------------------------------

// Heavy-ball NGN-M written directly: x' = x - (1 - beta) gamma g + beta (x - x_prev).
// c_of(k) gives c_k; beta_k = lambda/(1+lambda) with
// lambda = min(c L, 1 / (2 (1 + c L)(1 + 2 c L))).
template <typename OnIterate>
void heavy_ball_ngn(const Matrix &A, const Vector &b, double L, std::int64_t K,
                    const std::function<double(std::int64_t)> &c_of, OnIterate &&on_iterate) {
  Vector x = Vector::Zero(A.cols()), x_prev = x;
  for (std::int64_t k = 0; k < K; ++k) {
    const Vector r = A * x - b;
    const double f = 0.5 * r.squaredNorm();
    on_iterate(k, x, f);
    const Vector g = A.transpose() * r;
    const double c = c_of(k);
    const double cl = c * L;
    const double lambda = std::min(cl, 0.5 / ((1.0 + cl) * (1.0 + 2.0 * cl)));
    const double beta = lambda / (1.0 + lambda);
    const double gam = gamma_oracle(c, f, g.squaredNorm());
    const Vector next = x - (1.0 - beta) * gam * g + beta * (x - x_prev);
    x_prev = x;
    x = next;
  }
}

Outcome theorem_bounds() {
  const auto t0 = Clock::now();
  const std::int64_t K = 10000;
  double worst_const = -kInf, worst_decay = -kInf;
  int library_failures = 0, cases = 0;
  for (Eigen::Index d : {5, 20, 50}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(seed, 0x7468656f72656dULL + static_cast<std::uint64_t>(d));
      const Matrix A = gaussian(rng, 2 * d, d);
      const Vector x_star = gaussian(rng, d);
      const Vector b = A * x_star;
      const auto p = least_squares(A, b);
      const double L = top_eigenvalue(A);
      const double dist0 = (p.default_start() - x_star).squaredNorm();
      if (p.default_start().norm() != 0.0) return {false, "default start is not the origin"};

      // Constant parameters: c = 1/sqrt(K), bound dist0 (1 + 2cL)^2 / (cK)
      // when both noise terms vanish.
      const double c = 1.0 / std::sqrt(static_cast<double>(K));
      double mean = 0.0;
      heavy_ball_ngn(A, b, L, K, [c](std::int64_t) { return c; },
                     [&](std::int64_t, const Vector &, double f) { mean += f; });
      mean /= static_cast<double>(K);
      const double bound = dist0 * (1.0 + 2.0 * c * L) * (1.0 + 2.0 * c * L) /
                           (c * static_cast<double>(K));
      worst_const = std::max(worst_const, std::isnan(mean) ? kInf : (mean - bound) / bound);

      // Decaying c_k = 1/sqrt(k+1), rho_k-weighted average iterate, bound
      // 5 (1 + c0 L)(1 + 2 c0 L) dist0 / (4 c0 sqrt K) with c0 = 1.
      Vector x_hat = Vector::Zero(d);
      double total = 0.0;
      auto c_k = [](std::int64_t k) { return 1.0 / std::sqrt(static_cast<double>(k + 1)); };
      heavy_ball_ngn(A, b, L, K, c_k, [&](std::int64_t k, const Vector &x, double) {
        const double ck = c_k(k);
        const double rho = ck / ((1.0 + ck * L) * (1.0 + 2.0 * ck * L));
        x_hat += rho * x;
        total += rho;
      });
      x_hat /= total;
      const double gap = 0.5 * (A * x_hat - b).squaredNorm();
      const double dbound =
          5.0 * (1.0 + L) * (1.0 + 2.0 * L) * dist0 / (4.0 * std::sqrt(static_cast<double>(K)));
      worst_decay = std::max(worst_decay, std::isnan(gap) ? kInf : (gap - dbound) / dbound);

      // The library's own audits must agree.
      if (!audit_theorem_bound(p, K).passed) ++library_failures;
      if (!audit_theorem_bound_decaying(p, K).passed) ++library_failures;
      ++cases;
    }
  }
  const double secs = seconds_since(t0);
  return {worst_const <= 0.0 && worst_decay <= 0.0 && library_failures == 0 && secs < 60.0,
          std::to_string(cases) + " problems, max (avg - bound)/bound " + fmt(worst_const) +
              " constant, " + fmt(worst_decay) + " decaying, library audit failures " +
              std::to_string(library_failures) + ", " + fmt(secs) + " s"};
}

// ---------------------------------------------------------------------------

SweepSpec shipped(const std::string &name) {
  return parse_config(std::string(NGN_CONFIG_DIR) + "/" + name);
}

std::string status_name(const SweepCell &cell) {
  return cell.status ? std::string(to_string(*cell.status)) : "Error(" + cell.error + ")";
}

Outcome rosenbrock_grid() {
  const auto result = run_sweep(shipped("rosenbrock.cfg"));
  const std::vector<double> grid{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  std::map<std::pair<std::string, double>, const SweepCell *> by;
  for (const auto &cell : result.cells) by[{cell.optimizer, cell.c}] = &cell;

  bool ok = result.cells.size() == 12;
  std::string ngn_row, sgdm_row;
  for (double c : grid) {
    const SweepCell *n = by[{"ngn-m", c}];
    const SweepCell *s = by[{"sgdm", c}];
    if (n == nullptr || s == nullptr) return {false, "missing cell at c = " + fmt(c)};
    const RunStatus want_sgdm = c >= 1e-2 ? RunStatus::Diverged : RunStatus::Converged;
    ok = ok && n->status && *n->status != RunStatus::Diverged;
    ok = ok && s->status && *s->status == want_sgdm;
    if (c == 1e-3) ok = ok && n->status && *n->status == RunStatus::Converged;
    ngn_row += " " + status_name(*n);
    sgdm_row += " " + status_name(*s);
  }
  return {ok, "ngn-m:" + ngn_row + " | sgdm:" + sgdm_row};
}

Outcome polynomial_grid() {
  const auto t0 = Clock::now();
  const auto result = run_sweep(shipped("polynomial.cfg"));
  const double secs = seconds_since(t0);
  bool ok = true;
  std::int64_t best_ngn = std::numeric_limits<std::int64_t>::max(), best_gdm = best_ngn;
  double best_ngn_c = 0.0, best_gdm_c = 0.0, largest_gdm_ok = 0.0;
  std::vector<const SweepCell *> gdm;
  int ngn_cells = 0;
  for (const auto &cell : result.cells) {
    if (cell.optimizer == "ngn-m") {
      ++ngn_cells;
      ok = ok && cell.status == RunStatus::Converged && cell.final_loss <= 1e-15;
      if (cell.steps_to_success && *cell.steps_to_success < best_ngn) {
        best_ngn = *cell.steps_to_success;
        best_ngn_c = cell.c;
      }
    } else {
      gdm.push_back(&cell);
      if (cell.status == RunStatus::Converged) {
        largest_gdm_ok = std::max(largest_gdm_ok, cell.c);
        if (*cell.steps_to_success < best_gdm) {
          best_gdm = *cell.steps_to_success;
          best_gdm_c = cell.c;
        }
      }
    }
  }
  // Every rate above the largest converging one diverges, and some do.
  int diverged_above = 0;
  for (const auto *cell : gdm) {
    if (cell->c > largest_gdm_ok) {
      ok = ok && cell->status == RunStatus::Diverged;
      ++diverged_above;
    }
  }
  ok = ok && ngn_cells == 9 && gdm.size() == 9 && diverged_above > 0 && best_ngn < best_gdm &&
       secs < 30.0;
  return {ok, "ngn-m converged at all " + std::to_string(ngn_cells) + " c, best " +
                  std::to_string(best_ngn) + " steps at c = " + fmt(best_ngn_c) + "; gdm best " +
                  std::to_string(best_gdm) + " steps at c = " + fmt(best_gdm_c) +
                  ", diverged for all " + std::to_string(diverged_above) + " rates above " +
                  fmt(largest_gdm_ok) + "; " + fmt(secs) + " s"};
}

Outcome ridge_schedules() {
  const auto t0 = Clock::now();
  SweepSpec base = shipped("quadratic_schedule.cfg");
  base.trajectory_dir.clear();
  for (auto &o : base.optimizers)
    if (o.label == "fixed") o.c_values = {1e-4};
  std::string detail;
  bool ok = true;
  for (double r : {1.0, 0.1, 0.01}) {
    SweepSpec s = base;
    s.problem.ridge_r = r;
    const auto result = run_sweep(s);
    std::map<std::uint64_t, std::map<std::string, double>> loss;
    for (const auto &cell : result.cells) {
      ok = ok && cell.status.has_value() && cell.steps == 10000;
      loss[cell.seed][cell.optimizer] = cell.final_loss;
    }
    ok = ok && loss.size() == 3;
    for (auto &[seed, m] : loss) {
      const double a = m["inv-sqrt-step"], b = m["inv-sqrt-K"], c = m["fixed"];
      ok = ok && a <= b && b <= c;
      if (seed == 0)
        detail += " r=" + fmt(r) + ": " + fmt(a) + " <= " + fmt(b) + " <= " + fmt(c) + ";";
    }
  }
  return {ok, "seed-0 final losses" + detail + " " + fmt(seconds_since(t0)) + " s"};
}

Outcome multimodal_basins() {
  SweepSpec spec = shipped("multimodal.cfg");
  spec.c_grid = {100.0, 1000.0};
  const auto problem = build_problem(spec.problem);
  auto f = [&](double x) {
    Vector v(1);
    v(0) = x;
    return problem.full_loss(v);
  };

  // Dense scan: global minimizer, then walk outwards while f keeps rising.
  const double lo = -60.0, hi = 60.0, h = 1e-4;
  const auto n = static_cast<std::size_t>((hi - lo) / h) + 1;
  std::vector<double> vals(n);
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    vals[i] = f(lo + h * static_cast<double>(i));
    if (vals[i] < vals[best]) best = i;
  }
  std::size_t left = best, right = best;
  while (left > 0 && vals[left - 1] >= vals[left]) --left;
  while (right + 1 < n && vals[right + 1] >= vals[right]) ++right;
  const double basin_lo = lo + h * static_cast<double>(left);
  const double basin_hi = lo + h * static_cast<double>(right);

  const auto result = run_sweep(spec);
  std::map<std::pair<std::string, double>, int> hits;
  for (const auto &cell : result.cells) {
    const bool in = cell.status && *cell.status != RunStatus::Diverged &&
                    cell.x_final >= basin_lo && cell.x_final <= basin_hi;
    hits[{cell.optimizer, cell.c}] += in ? 1 : 0;
  }
  bool ok = result.cells.size() == 2 * 2 * 301;
  std::string detail = "global minimizer " + fmt(lo + h * static_cast<double>(best)) +
                       ", basin [" + fmt(basin_lo) + ", " + fmt(basin_hi) + "];";
  for (double c : spec.c_grid) {
    const int a = hits[{"ngn-m", c}], b = hits[{"sgdm", c}];
    ok = ok && a >= b;
    detail += " c=" + fmt(c) + ": ngn-m " + std::to_string(a) + " vs sgdm " + std::to_string(b) + ";";
  }
  return {ok, detail};
}

Outcome gradient_audits() {
  std::vector<ProblemSpec> specs;
  ProblemSpec s;
  s.kind = ProblemKind::LeastSquares;
  s.dim = 12;
  s.rows = 30;
  s.seed = 4;
  specs.push_back(s);
  s = ProblemSpec{};
  s.kind = ProblemKind::RidgeQuadratic;
  s.dim = 20;
  s.ridge_r = 0.1;
  specs.push_back(s);
  s = ProblemSpec{};
  s.kind = ProblemKind::Rosenbrock;
  specs.push_back(s);
  s = ProblemSpec{};
  s.kind = ProblemKind::Multimodal1D;
  specs.push_back(s);
  s = ProblemSpec{};
  s.kind = ProblemKind::Polynomial1D;
  specs.push_back(s);
  s = ProblemSpec{};
  s.kind = ProblemKind::LinearRegressionData;
  specs.push_back(s);

  Rng rng(1010);
  double worst = 0.0;
  std::string worst_at;
  for (const auto &ps : specs) {
    const auto p = build_problem(ps);
    for (int i = 0; i < 100; ++i) {
      Vector x(static_cast<Eigen::Index>(p.dim()));
      for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = rng.uniform(-2.0, 2.0);
      const std::size_t bs = 1 + rng.uniform_index(p.n_samples());
      const Batch batch = sample_batch(p, 3, static_cast<std::uint64_t>(i), bs);
      const Vector g = p.evaluate(x, batch).grad;
      const double h = 1e-6 * std::max(1.0, x.lpNorm<Eigen::Infinity>());
      // Central differences computed here, independent of finite_diff_grad.
      Vector fd(x.size());
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        Vector xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        fd(j) = (p.loss(xp, batch) - p.loss(xm, batch)) / (2.0 * h);
      }
      const double err = (g - fd).norm() / std::max(1.0, g.norm());
      if (!(err <= worst)) {
        worst = std::isnan(err) ? kInf : err;
        worst_at = std::string(to_string(p.kind()));
      }
    }
  }
  return {worst <= 1e-5, std::to_string(specs.size()) + " problems x 100 points, worst relative error " +
                             fmt(worst) + " (" + worst_at + ")"};
}

Outcome weight_decay() {
  Rng rng(1111);
  double worst = 0.0;
  int clipped = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto d = static_cast<Eigen::Index>(1 + rng.uniform_index(8));
    const Vector x = 2.0 * gaussian(rng, d);
    Vector g = gaussian(rng, d);
    if (g.dot(x) < 0.0) g = -g;
    const double c = std::pow(10.0, rng.uniform(-2.0, 1.0));
    const double lambda = std::pow(10.0, rng.uniform(-2.0, 0.0));
    const double beta = rng.uniform(0.0, 0.95);
    // f chosen so that 1 - (c lambda / 2f) g'x lies in (-100, 0).
    const double f = c * lambda * g.dot(x) / (2.0 * rng.uniform(1.01, 101.0));
    if (!(1.0 - c * lambda / (2.0 * f) * g.dot(x) < 0.0)) continue;
    OptimizerState st = init_state(x);
    st.x_prev = x + 0.1 * gaussian(rng, d);
    OptimizerSpec spec = make(OptimizerKind::NGN_MDV1W, c, beta);
    spec.wd_lambda = lambda;
    StepSample sample;
    sample.loss = f;
    sample.grad = g;
    const auto r = step(st, sample, spec);
    // Zero gradient coefficient: only the shrink and the momentum remain.
    const Vector expect = x / (1.0 + lambda * c) + beta * (x - st.x_prev);
    worst = std::max({worst, std::abs(r.report.gamma_scalar),
                      (r.state.x - expect).norm() / std::max(1.0, expect.norm())});
    ++clipped;
  }

  OptimizerSpec coupled = make(OptimizerKind::NGN_MDV1W, 0.7, 0.6);
  OptimizerSpec decoupled = make(OptimizerKind::DEC_NGN_MDV1, 0.7, 0.6);
  const Outcome collapse =
      reductions({{"mdv1w(lambda=0)/mdv1", coupled, make(OptimizerKind::NGN_MD_V1, 0.7, 0.6)},
                  {"dec-mdv1(lambda=0)/mdv1", decoupled, make(OptimizerKind::NGN_MD_V1, 0.7, 0.6)}});
  return {worst <= 1e-12 && clipped >= 900 && collapse.passed,
          std::to_string(clipped) + " clipped instances, worst deviation " + fmt(worst) +
              "; lambda = 0: " + collapse.detail};
}

Outcome determinism() {
  const auto dir = fs::temp_directory_path() / "ngn_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cfg = std::string(NGN_CONFIG_DIR) + "/rosenbrock.cfg";
  std::vector<std::string> bytes;
  for (const char *threads : {"1", "8", "0"}) {
    const auto out = dir / (std::string("summary_") + threads + ".csv");
    const std::string cmd = std::string("'") + NGN_CLI_PATH + "' sweep --config '" + cfg +
                            "' --threads " + threads + " --out '" + out.string() + "' > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "sweep invocation failed: " + cmd};
    std::ifstream in(out, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    bytes.push_back(os.str());
  }
  const bool ok = !bytes[0].empty() && bytes[0] == bytes[1] && bytes[1] == bytes[2];
  return {ok, "3 invocations (1, 8, auto threads), " + std::to_string(bytes[0].size()) +
                  " bytes each, identical = " + (ok ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char *name;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {"step-size bounds", stepsize_bounds},
      {"fundamental equality", fundamental_equality},
      {"IMA equivalence", ima_equivalence},
      {"reduction identities", reduction_identities},
      {"theorem bound audit", theorem_bounds},
      {"Rosenbrock stability grid", rosenbrock_grid},
      {"polynomial grid", polynomial_grid},
      {"ridge schedule ordering", ridge_schedules},
      {"multimodal basin count", multimodal_basins},
      {"gradient audits", gradient_audits},
      {"weight-decay sanity", weight_decay},
      {"sweep determinism", determinism},
  };
  int failures = 0, index = 0;
  for (const auto &c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("%s %2d %s: %s\n", o.passed ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}

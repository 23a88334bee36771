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

// Command-line front end. Talks to the library only through ngn.h.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ngn/ngn.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitIo = 2;

int report(ngn_status status) {
  std::cerr << "ngn: " << ngn_last_error() << '\n';
  return status == NGN_ERR_IO ? kExitIo : kExitFailure;
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

template <typename Fn>
std::string read_text(Fn &&fn) {
  size_t needed = 0;
  if (fn(nullptr, 0, &needed) != NGN_OK) return {};
  std::string s(needed + 1, '\0');
  if (fn(s.data(), s.size(), &needed) != NGN_OK) return {};
  s.resize(needed);
  return s;
}

struct RunOptions {
  std::string problem = "rosenbrock";
  int dim = 0;
  int rows = 0;
  std::optional<double> ridge_r;
  std::string data;
  std::uint64_t problem_seed = 0;
  bool interpolating = false;
  std::vector<double> x0;

  std::string optimizer = "ngn";
  double c = 1.0;
  double beta = 0.0;
  double beta2 = 0.999;
  double eps = 1e-8;
  double wd = 0.0;
  std::string wd_mode = "decoupled";
  std::string schedule = "constant";
  std::int64_t schedule_K = 0;
  bool ngn_d_precond = false;
  std::optional<double> dampening;

  std::int64_t steps = 1000;
  std::size_t batch_size = 0;
  double success_loss = 1e-15;
  double diverge_loss = 1e10;
  std::uint64_t seed = 0;
  std::string out;
  std::string label;
};

std::string problem_descriptor(const RunOptions &o) {
  std::string d = "kind=" + o.problem;
  if (o.dim > 0) d += ";dim=" + std::to_string(o.dim);
  if (o.rows > 0) d += ";rows=" + std::to_string(o.rows);
  if (o.ridge_r) d += ";r=" + shortest(*o.ridge_r);
  if (!o.data.empty()) d += ";data=" + o.data;
  if (o.problem_seed != 0) d += ";seed=" + std::to_string(o.problem_seed);
  if (o.interpolating) d += ";interpolating=true";
  return d;
}

int cmd_run(const RunOptions &o) {
  ngn_problem *problem = nullptr;
  ngn_status st = ngn_problem_create(problem_descriptor(o).c_str(), &problem);
  if (st != NGN_OK) return report(st);

  std::string kind = o.optimizer;
  if (o.wd > 0.0 && (kind == "ngn-mdv1" || kind == "dec-ngn-mdv1" || kind == "ngn-mdv1w")) {
    if (o.wd_mode == "decoupled") {
      kind = "dec-ngn-mdv1";
    } else if (o.wd_mode == "coupled") {
      kind = "ngn-mdv1w";
    } else {
      ngn_problem_destroy(problem);
      std::cerr << "ngn: --wd-mode must be 'decoupled' or 'coupled'\n";
      return kExitFailure;
    }
  }

  ngn_optimizer_params params;
  ngn_optimizer_params_init(&params);
  params.kind = kind.c_str();
  params.c = o.c;
  params.beta1 = o.beta;
  params.beta2 = o.beta2;
  params.eps = o.eps;
  params.wd_lambda = o.wd;
  params.schedule = o.schedule.c_str();
  params.schedule_K = o.schedule_K;
  params.ngn_d_precond = o.ngn_d_precond ? 1 : 0;
  if (o.dampening) params.dampening = *o.dampening;

  ngn_budget budget;
  ngn_budget_init(&budget);
  budget.max_steps = o.steps;
  budget.batch_size = o.batch_size;
  budget.success_loss = o.success_loss;
  budget.diverge_loss = o.diverge_loss;

  ngn_run *run = nullptr;
  st = ngn_run_execute(problem, &params, &budget, o.seed, o.x0.empty() ? nullptr : o.x0.data(),
                       o.x0.size(), &run);
  ngn_problem_destroy(problem);
  if (st != NGN_OK) return report(st);

  int code = kExitOk;
  if (!o.out.empty()) {
    st = ngn_run_write_trajectory(run, o.out.c_str());
    if (st != NGN_OK) code = report(st);
  }
  const std::string label = o.label.empty() ? kind : o.label;
  const std::string row = read_text([&](char *b, size_t cap, size_t *n) {
    return ngn_run_summary_row(run, label.c_str(), b, cap, n);
  });
  std::cout << ngn_summary_header() << '\n' << row << '\n';
  ngn_run_destroy(run);
  return code;
}

int cmd_sweep(const std::string &config, const std::string &out, unsigned threads) {
  ngn_sweep *sweep = nullptr;
  ngn_status st = ngn_sweep_load(config.c_str(), &sweep);
  if (st != NGN_OK) return report(st);
  ngn_sweep_result *result = nullptr;
  st = ngn_sweep_execute(sweep, threads, &result);
  ngn_sweep_destroy(sweep);
  if (st != NGN_OK) return report(st);

  st = ngn_sweep_result_write_summary(result, out.empty() ? nullptr : out.c_str());
  if (st != NGN_OK) {
    ngn_sweep_result_destroy(result);
    return report(st);
  }
  const std::string path =
      out.empty() ? read_text([&](char *b, size_t cap, size_t *n) {
        return ngn_sweep_result_summary_path(result, b, cap, n);
      })
                  : out;
  const size_t cells = ngn_sweep_result_cells(result);
  const size_t failed = ngn_sweep_result_failed(result);
  ngn_sweep_result_destroy(result);
  std::cout << cells << " cells written to " << path;
  if (failed > 0) std::cout << " (" << failed << " failed)";
  std::cout << '\n';
  return kExitOk;
}

int cmd_verify(std::uint64_t seed, const std::string &out) {
  ngn_audit_suite *suite = nullptr;
  const ngn_status st = ngn_verify_run_all(seed, &suite);
  if (st != NGN_OK) return report(st);
  const std::string csv = read_text(
      [&](char *b, size_t cap, size_t *n) { return ngn_audit_csv(suite, b, cap, n); });
  std::cout << csv;
  int code = ngn_audit_all_passed(suite) ? kExitOk : kExitFailure;
  ngn_audit_suite_destroy(suite);
  if (!out.empty()) {
    std::FILE *f = std::fopen(out.c_str(), "wb");
    if (f == nullptr || std::fwrite(csv.data(), 1, csv.size(), f) != csv.size()) {
      if (f) std::fclose(f);
      std::cerr << "ngn: cannot write '" << out << "'\n";
      return kExitIo;
    }
    std::fclose(f);
  }
  return code;
}

struct BoundsOptions {
  double c = 1.0;
  double L = 1.0;
  std::int64_t K = 1;
  double dist0 = 0.0;
  double sigma_int = 0.0;
  double sigma_pos = 0.0;
  std::optional<double> C_poly;
};

int cmd_bounds(const BoundsOptions &o) {
  ngn_theory_inputs in{o.c, o.L, o.K, o.dist0, o.sigma_int, o.sigma_pos};
  double bound = 0.0, decaying = 0.0, rho = 0.0, lambda_max = 0.0, beta_max = 0.0;
  ngn_status st = ngn_theory_ngn_m_bound(&in, &bound);
  if (st == NGN_OK) st = ngn_theory_ngn_m_bound_decaying(&in, &decaying);
  if (st == NGN_OK) st = ngn_theory_momentum_params(o.c, o.L, &rho, &lambda_max, &beta_max);
  if (st != NGN_OK) return report(st);
  std::cout << "ngn_m_bound " << shortest(bound) << '\n'
            << "ngn_m_bound_decaying " << shortest(decaying) << '\n'
            << "rho " << shortest(rho) << '\n'
            << "lambda_max " << shortest(lambda_max) << '\n'
            << "beta_max " << shortest(beta_max) << '\n';
  if (o.C_poly) {
    double lo = 0.0, hi = 0.0, thr = 0.0;
    st = ngn_theory_gammahat_range(*o.C_poly, &lo, &hi, &thr);
    if (st != NGN_OK) return report(st);
    std::cout << "gammahat_lo " << shortest(lo) << '\n'
              << "gammahat_hi " << shortest(hi) << '\n'
              << "beta_threshold " << shortest(thr) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"NGN optimizer experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ngn_version()));

  RunOptions run;
  auto *run_cmd = app.add_subcommand("run", "Run one optimizer configuration");
  run_cmd->add_option("--problem", run.problem,
                      "least-squares, ridge, rosenbrock, multimodal, polynomial, regression");
  run_cmd->add_option("--dim", run.dim, "Problem dimension");
  run_cmd->add_option("--rows", run.rows, "Least-squares rows");
  run_cmd->add_option("--r", run.ridge_r, "Ridge shift");
  run_cmd->add_option("--data", run.data, "Regression CSV");
  run_cmd->add_option("--problem-seed", run.problem_seed, "Seed for problem data");
  run_cmd->add_flag("--interpolating", run.interpolating, "Consistent least-squares targets");
  run_cmd->add_option("--x0", run.x0, "Starting point")->delimiter(',');
  run_cmd->add_option("--optimizer", run.optimizer, "Optimizer kind");
  run_cmd->add_option("--c", run.c, "Step-size hyperparameter or learning rate");
  run_cmd->add_option("--beta", run.beta, "Momentum");
  run_cmd->add_option("--beta2", run.beta2, "Second-moment decay");
  run_cmd->add_option("--eps", run.eps, "Preconditioner epsilon");
  run_cmd->add_option("--wd", run.wd, "Weight decay");
  run_cmd->add_option("--wd-mode", run.wd_mode, "decoupled or coupled");
  run_cmd->add_option("--schedule", run.schedule, "constant, inv-sqrt-K, inv-sqrt-step");
  run_cmd->add_option("--K", run.schedule_K, "Horizon for inv-sqrt-K (default: --steps)");
  run_cmd->add_option("--dampening", run.dampening, "SGDM dampening (default: --beta)");
  run_cmd->add_flag("--ngn-d-precond", run.ngn_d_precond, "NGN-D with c_j = c / D_j");
  run_cmd->add_option("--steps", run.steps, "Step budget");
  run_cmd->add_option("--batch-size", run.batch_size, "Batch size (0 = full)");
  run_cmd->add_option("--success-loss", run.success_loss, "Convergence threshold");
  run_cmd->add_option("--diverge-loss", run.diverge_loss, "Divergence threshold");
  run_cmd->add_option("--seed", run.seed, "Batch sampling seed");
  run_cmd->add_option("--out", run.out, "Trajectory CSV path");
  run_cmd->add_option("--label", run.label, "Optimizer label in the summary row");

  std::string config, sweep_out;
  unsigned threads = 0;
  auto *sweep_cmd = app.add_subcommand("sweep", "Run a configured sweep");
  sweep_cmd->add_option("--config", config, "Config file")->required();
  sweep_cmd->add_option("--out", sweep_out, "Summary CSV path (overrides the config)");
  sweep_cmd->add_option("--threads", threads, "Worker threads (0 = config/auto)");

  std::uint64_t verify_seed = 0;
  std::string verify_out;
  auto *verify_cmd = app.add_subcommand("verify", "Run the audit suite");
  verify_cmd->add_option("--seed", verify_seed, "Audit seed");
  verify_cmd->add_option("--out", verify_out, "Also write the audit CSV here");

  BoundsOptions bounds;
  auto *bounds_cmd = app.add_subcommand("bounds", "Evaluate convergence bounds");
  bounds_cmd->add_option("--c", bounds.c, "Step-size hyperparameter (c0 for decaying)");
  bounds_cmd->add_option("--L", bounds.L, "Smoothness constant");
  bounds_cmd->add_option("--K", bounds.K, "Horizon");
  bounds_cmd->add_option("--dist0", bounds.dist0, "Squared initial distance to the solution");
  bounds_cmd->add_option("--sigma-int", bounds.sigma_int, "Interpolation error");
  bounds_cmd->add_option("--sigma-pos", bounds.sigma_pos, "Positive error");
  bounds_cmd->add_option("--C-poly", bounds.C_poly, "Polynomial assumption constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFailure;
  }

  if (*run_cmd) return cmd_run(run);
  if (*sweep_cmd) return cmd_sweep(config, sweep_out, threads);
  if (*verify_cmd) return cmd_verify(verify_seed, verify_out);
  if (*bounds_cmd) return cmd_bounds(bounds);
  return kExitFailure;
}

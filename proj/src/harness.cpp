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

#include "ngn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <thread>

#include "ngn/csv.hpp"

namespace ngn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

StepReport missing_report() {
  StepReport r;
  r.gamma_scalar = r.gamma_coord_min = r.gamma_coord_max = r.gamma_coord_mean =
      r.update_norm = kNaN;
  return r;
}

}  // namespace

void RunBudget::validate() const {
  require(max_steps >= 1, "budget: max_steps must be >= 1");
  require(!std::isnan(success_loss) && !std::isnan(diverge_loss),
          "budget: thresholds must not be NaN");
  require(success_loss < diverge_loss, "budget: success_loss must be < diverge_loss");
  require(full_loss_every >= 1, "budget: full_loss_every must be >= 1");
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::Diverged: return "Diverged";
    case RunStatus::BudgetExhausted: return "BudgetExhausted";
  }
  return "unknown";
}

RunStatus parse_run_status(std::string_view name) {
  for (auto s : {RunStatus::Converged, RunStatus::Diverged, RunStatus::BudgetExhausted})
    if (to_string(s) == name) return s;
  throw InvalidArgument("unknown run status '" + std::string(name) + "'");
}

double RunRecord::final_loss() const {
  if (losses.empty()) return kNaN;
  const double full = full_losses.back();
  return std::isnan(full) ? losses.back() : full;
}

double RunRecord::best_loss() const {
  double best = kNaN;
  for (std::size_t k = 0; k < losses.size(); ++k) {
    const double v = std::isnan(full_losses[k]) ? losses[k] : full_losses[k];
    if (std::isnan(v)) continue;
    if (std::isnan(best) || v < best) best = v;
  }
  return best;
}

std::optional<std::int64_t> RunRecord::steps_to_success() const {
  if (status == RunStatus::Converged) return status_step;
  return std::nullopt;
}

RunRecord run_once(const StochasticObjective &problem, const OptimizerSpec &spec,
                   const RunBudget &budget, std::uint64_t seed,
                   const std::optional<Vector> &x0) {
  budget.validate();
  spec.validate_for_dim(problem.dim());
  const std::size_t batch_size = budget.batch_size == 0 ? problem.n_samples() : budget.batch_size;
  require(batch_size <= problem.n_samples(),
          "batch size " + std::to_string(batch_size) + " exceeds sample count " +
              std::to_string(problem.n_samples()));
  const bool full_batch = batch_size == problem.n_samples();

  RunRecord rec;
  rec.spec = spec;
  rec.budget = budget;
  rec.seed = seed;
  rec.x0 = x0 ? *x0 : problem.default_start();
  require(static_cast<std::size_t>(rec.x0.size()) == problem.dim(),
          "x0 dimension does not match the problem");

  OptimizerState state = init_state(rec.x0);
  const auto reserve = static_cast<std::size_t>(std::min<std::int64_t>(budget.max_steps, 1 << 20));
  rec.losses.reserve(reserve);
  rec.full_losses.reserve(reserve);
  rec.grad_norms.reserve(reserve);
  rec.step_reports.reserve(reserve);

  auto stop = [&](RunStatus s, std::int64_t k) {
    rec.status = s;
    rec.status_step = k;
  };

  for (std::int64_t k = 0; k < budget.max_steps; ++k) {
    StepSample sample;
    try {
      const Batch batch = sample_batch(problem, seed, static_cast<std::uint64_t>(k), batch_size);
      sample = problem.evaluate(state.x, batch);
    } catch (const NumericError &) {
      stop(RunStatus::Diverged, k);
      break;
    }
    double full = kNaN;
    bool have_full = false;
    if (full_batch) {
      full = sample.loss;
      have_full = true;
    } else if (k % budget.full_loss_every == 0) {
      full = problem.full_loss(state.x);
      have_full = true;
    }
    rec.losses.push_back(sample.loss);
    rec.full_losses.push_back(full);
    rec.grad_norms.push_back(sample.grad.norm());
    if (budget.record_detail) {
      rec.detail.iterates.push_back(state.x);
      rec.detail.grads.push_back(sample.grad);
    }

    const double monitor = have_full ? full : sample.loss;
    if (!std::isfinite(monitor) || !std::isfinite(sample.loss) || monitor > budget.diverge_loss) {
      rec.step_reports.push_back(missing_report());
      stop(RunStatus::Diverged, k);
      break;
    }
    if (have_full && monitor <= budget.success_loss) {
      rec.step_reports.push_back(missing_report());
      stop(RunStatus::Converged, k);
      break;
    }

    StepResult next;
    try {
      next = step(state, sample, spec);
    } catch (const NumericError &) {
      rec.step_reports.push_back(missing_report());
      stop(RunStatus::Diverged, k);
      break;
    }
    if (budget.record_detail) {
      rec.detail.gamma_coord.push_back(next.report.gamma_coord);
      rec.detail.c_coord.push_back(next.report.c_coord);
    }
    next.report.gamma_coord.clear();
    next.report.c_coord.clear();
    rec.step_reports.push_back(std::move(next.report));
    state = std::move(next.state);
  }
  rec.x_final = state.x;
  return rec;
}

std::size_t SweepSpec::cell_count() const {
  std::size_t total = 0;
  const std::size_t per_c = beta_grid.size() * std::max<std::size_t>(starts.size(), 1) * seeds.size();
  for (const auto &opt : optimizers)
    total += (opt.c_values.empty() ? c_grid.size() : opt.c_values.size()) * per_c;
  return total;
}

void SweepSpec::validate() const {
  require(!optimizers.empty(), "sweep: at least one [optimizer] block is required");
  require(!beta_grid.empty(), "grid.beta: list is empty");
  require(!seeds.empty(), "grid.seeds: list is empty");
  for (const auto &opt : optimizers) {
    if (opt.c_values.empty())
      require(!c_grid.empty(), "grid.c: list is empty");
    OptimizerSpec base = opt.spec;
    if (base.schedule == Schedule::InvSqrtK && base.schedule_K == 0)
      base.schedule_K = budget.max_steps;
    for (double c : opt.c_values.empty() ? c_grid : opt.c_values) {
      OptimizerSpec s = base;
      s.c = c;
      s.validate();
    }
    for (double b : beta_grid) {
      OptimizerSpec s = base;
      s.beta1 = b;
      s.validate();
    }
  }
  budget.validate();
}

SweepResult run_sweep(const SweepSpec &sweep, unsigned threads) {
  sweep.validate();

  struct CellPlan {
    std::size_t opt;
    double c;
    double beta;
    std::size_t start;
    std::uint64_t seed;
  };
  std::vector<CellPlan> plan;
  const std::size_t n_starts = std::max<std::size_t>(sweep.starts.size(), 1);
  for (std::size_t o = 0; o < sweep.optimizers.size(); ++o) {
    const auto &cs = sweep.optimizers[o].c_values.empty() ? sweep.c_grid
                                                          : sweep.optimizers[o].c_values;
    for (double c : cs)
      for (double beta : sweep.beta_grid)
        for (std::size_t s = 0; s < n_starts; ++s)
          for (std::uint64_t seed : sweep.seeds) plan.push_back({o, c, beta, s, seed});
  }

  // Problems are built up front (one per seed when resampling) and shared
  // read-only by the workers.
  std::map<std::uint64_t, std::shared_ptr<const StochasticObjective>> problems;
  auto problem_key = [&](std::uint64_t seed) { return sweep.resample_problem ? seed : 0; };
  for (std::uint64_t seed : sweep.seeds) {
    const auto key = problem_key(seed);
    if (problems.count(key)) continue;
    ProblemSpec ps = sweep.problem;
    if (sweep.resample_problem) ps.seed = seed;
    problems[key] = std::make_shared<const StochasticObjective>(build_problem(ps));
  }

  SweepResult result;
  result.cells.resize(plan.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.size()) return;
      const CellPlan &p = plan[i];
      const auto &opt = sweep.optimizers[p.opt];
      SweepCell &cell = result.cells[i];
      cell.index = i;
      cell.optimizer = opt.label;
      cell.c = p.c;
      cell.beta = p.beta;
      cell.seed = p.seed;
      try {
        const auto &problem = *problems.at(problem_key(p.seed));
        OptimizerSpec spec = opt.spec;
        spec.c = p.c;
        spec.beta1 = p.beta;
        if (spec.schedule == Schedule::InvSqrtK && spec.schedule_K == 0)
          spec.schedule_K = sweep.budget.max_steps;
        std::optional<Vector> x0;
        if (!sweep.starts.empty()) {
          const auto &s = sweep.starts[p.start];
          x0 = Vector(Eigen::Map<const Vector>(s.data(), static_cast<Eigen::Index>(s.size())));
        }
        cell.x0 = x0 ? (*x0)(0) : problem.default_start()(0);
        const RunRecord rec = run_once(problem, spec, sweep.budget, p.seed, x0);
        SweepCell summary = summarize(rec, opt.label);
        summary.index = i;
        summary.x0 = cell.x0;
        cell = std::move(summary);
        if (!sweep.trajectory_dir.empty()) {
          const std::string name = std::to_string(i) + "_" + opt.label + ".csv";
          const auto dir = std::filesystem::path(resolve_output_path(sweep.trajectory_dir));
          std::filesystem::create_directories(dir);
          write_trajectory_csv(rec, (dir / name).string());
        }
      } catch (const std::exception &e) {
        cell.status.reset();
        cell.error = e.what();
        cell.final_loss = cell.best_loss = kNaN;
        cell.x_final = kNaN;
      }
    }
  };

  if (threads == 0) threads = sweep.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(plan.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  return result;
}

std::string resolve_output_path(const std::string &path) {
  const char *dir = std::getenv("NGN_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0' || path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

}  // namespace ngn

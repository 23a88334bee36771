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

#ifndef NGN_HARNESS_HPP
#define NGN_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ngn/optimizers.hpp"
#include "ngn/problems.hpp"

namespace ngn {

struct RunBudget {
  std::int64_t max_steps = 1000;
  double success_loss = 1e-15;
  double diverge_loss = 1e10;
  std::size_t batch_size = 0;  // 0 selects the full batch
  // Full-batch loss cadence for stochastic runs; full-batch runs always
  // have it.
  std::int64_t full_loss_every = 1;
  // Keep per-step gradients, per-coordinate step-sizes and iterates.
  bool record_detail = false;

  void validate() const;
};

enum class RunStatus { Converged, Diverged, BudgetExhausted };

std::string_view to_string(RunStatus status);
RunStatus parse_run_status(std::string_view name);

/// Per-step data kept only when RunBudget::record_detail is set. Index k
/// refers to the sample taken at x^k.
struct RunDetail {
  std::vector<Vector> iterates;
  std::vector<Vector> grads;
  std::vector<std::vector<double>> gamma_coord;
  std::vector<std::vector<double>> c_coord;
};

struct RunRecord {
  std::vector<double> losses;       // f_{S_k}(x^k)
  std::vector<double> full_losses;  // f(x^k), NaN when not evaluated
  std::vector<double> grad_norms;
  // One entry per recorded loss. A run that stops on a loss check has no
  // update for the last entry; its report is NaN-filled.
  std::vector<StepReport> step_reports;
  RunStatus status = RunStatus::BudgetExhausted;
  std::int64_t status_step = -1;  // step index of convergence/divergence
  Vector x_final;
  RunDetail detail;

  OptimizerSpec spec;
  RunBudget budget;
  std::uint64_t seed = 0;
  Vector x0;

  std::size_t steps() const { return losses.size(); }
  double final_loss() const;
  double best_loss() const;
  std::optional<std::int64_t> steps_to_success() const;
};

/// Iterates spec from x0 (problem default when empty) until the budget, the
/// success threshold, or divergence (non-finite loss or loss above
/// diverge_loss). Stop checks use the full-batch loss whenever it was
/// evaluated for the step.
RunRecord run_once(const StochasticObjective &problem, const OptimizerSpec &spec,
                   const RunBudget &budget, std::uint64_t seed,
                   const std::optional<Vector> &x0 = std::nullopt);

struct SweepOptimizer {
  std::string label;
  OptimizerSpec spec;
  std::vector<double> c_values;  // empty uses the grid
};

struct SweepSpec {
  ProblemSpec problem;
  bool resample_problem = false;  // rebuild the problem with seed = run seed
  std::vector<SweepOptimizer> optimizers;
  std::vector<double> c_grid;
  std::vector<double> beta_grid{0.9};
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> starts;  // empty uses the problem default
  RunBudget budget;
  std::string summary_path = "summary.csv";
  std::string trajectory_dir;
  unsigned threads = 0;  // 0 picks the hardware concurrency

  std::size_t cell_count() const;
  void validate() const;
};

struct SweepCell {
  std::size_t index = 0;
  std::string optimizer;
  double c = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  double x0 = 0.0;  // first coordinate of the start
  std::optional<RunStatus> status;  // empty when the cell failed
  std::string error;
  double final_loss = 0.0;
  double best_loss = 0.0;
  std::optional<std::int64_t> steps_to_success;
  std::int64_t steps = 0;
  double x_final = 0.0;  // first coordinate of the final iterate
};

struct SweepResult {
  std::vector<SweepCell> cells;  // ordered by cell index
};

/// Executes every cell; results do not depend on the thread count. A cell
/// that throws is recorded with its error and the sweep continues.
SweepResult run_sweep(const SweepSpec &sweep, unsigned threads = 0);

/// Prefixes relative paths with $NGN_OUTPUT_DIR when it is set.
std::string resolve_output_path(const std::string &path);

}  // namespace ngn

#endif  // NGN_HARNESS_HPP

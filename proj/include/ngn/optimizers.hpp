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

#ifndef NGN_OPTIMIZERS_HPP
#define NGN_OPTIMIZERS_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ngn/common.hpp"
#include "ngn/problems.hpp"

namespace ngn {

enum class OptimizerKind {
  NGN,
  NGN_M_V1,
  NGN_M_V2,
  NGN_D,
  NGN_MD_V1,
  NGN_MD_V2,
  DEC_NGN_MDV1,  // decoupled weight decay on top of NGN-MDv1
  NGN_MDV1W,     // weight decay folded into the step-size
  SGDM,
  ADAM,
};

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view name);

enum class Schedule {
  Constant,
  InvSqrtK,     // c0 / sqrt(K), constant over the run
  InvSqrtStep,  // c0 / sqrt(k + 1)
};

std::string_view to_string(Schedule schedule);
Schedule parse_schedule(std::string_view name);

struct OptimizerSpec {
  OptimizerKind kind = OptimizerKind::NGN;
  double c = 1.0;  // step-size hyperparameter; learning rate for baselines
  double beta1 = 0.0;
  double beta2 = 0.999;
  double eps = 1e-8;
  double wd_lambda = 0.0;
  Schedule schedule = Schedule::Constant;
  std::int64_t schedule_K = 0;
  std::vector<double> c_coord;  // NGN-D per-coordinate c_j; empty broadcasts c
  bool ngn_d_precond = false;   // NGN-D with c_j = c / (D_k)_j
  bool precond_identity = false;
  // SGDM only: x' = x - (1 - dampening) c g + beta (x - x_prev). Empty
  // means dampening = beta.
  std::optional<double> dampening;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
  void validate_for_dim(std::size_t dim) const;
};

struct OptimizerState {
  Vector x;
  Vector x_prev;
  Vector v;  // second-moment EMA
  Vector m;  // first moment (NGN-M Ver.2 and Adam)
  std::int64_t k = 0;
};

/// x_prev = x and zeroed moments, as the algorithms are initialized.
OptimizerState init_state(const Vector &x0);

struct StepReport {
  double gamma_scalar = 0.0;
  double gamma_coord_min = 0.0;
  double gamma_coord_max = 0.0;
  double gamma_coord_mean = 0.0;
  double update_norm = 0.0;
  // Per-coordinate effective step-sizes and the c_j they were capped by.
  // gamma_scalar is the mean of gamma_coord for per-coordinate methods.
  std::vector<double> gamma_coord;
  std::vector<double> c_coord;
};

struct StepResult {
  OptimizerState state;
  StepReport report;
};

/// NGN step-size 2 c f / (2 f + c ||g||^2_w). Equals c when grad_sq = 0.
double ngn_gamma(double c, double loss, double grad_sq);

struct Preconditioner {
  Vector v;
  Vector D;
};

/// RMSprop-style diagonal: v' = beta2 v + (1 - beta2) g*g,
/// D = eps + sqrt(v' / (1 - beta2^(k+1))).
Preconditioner precond_update(const Vector &v, const Vector &grad, double beta2,
                              std::int64_t k, double eps);

double schedule_c(Schedule schedule, double c0, std::int64_t k, std::int64_t K);

StepResult step_ngn(const OptimizerState &state, const StepSample &sample,
                    const OptimizerSpec &spec);
StepResult step_ngn_m(const OptimizerState &state, const StepSample &sample,
                      const OptimizerSpec &spec);
StepResult step_ngn_d(const OptimizerState &state, const StepSample &sample,
                      const OptimizerSpec &spec);
StepResult step_ngn_md(const OptimizerState &state, const StepSample &sample,
                       const OptimizerSpec &spec);
StepResult step_ngn_md_wd(const OptimizerState &state, const StepSample &sample,
                          const OptimizerSpec &spec);
StepResult step_baseline(const OptimizerState &state, const StepSample &sample,
                         const OptimizerSpec &spec);

/// Dispatches on spec.kind.
StepResult step(const OptimizerState &state, const StepSample &sample,
                const OptimizerSpec &spec);

}  // namespace ngn

#endif  // NGN_OPTIMIZERS_HPP

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

#ifndef NGN_VERIFY_HPP
#define NGN_VERIFY_HPP

// Executable audits of the optimizer identities and convergence bounds.
// Tolerances are fixed per audit. Every audit is deterministic in its seed.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ngn/harness.hpp"

namespace ngn {

struct AuditReport {
  std::string name;
  bool passed = false;
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::string location;  // "step k", "step k coord j", ...
};

inline constexpr double kImaTolerance = 1e-10;
inline constexpr double kStepsizeTolerance = 1e-12;  // relative to c
inline constexpr double kEqualityTolerance = 1e-12;  // relative to f_S

/// Runs heavy-ball NGN-M and the two-sequence moving-average form on the
/// same batches. The violation is the larger of the iterate gap and the
/// residual of z^k = x^k + lambda (x^k - x^{k-1}).
AuditReport audit_ima_equivalence(const StochasticObjective &problem, const OptimizerSpec &spec,
                                  std::int64_t steps, std::uint64_t seed,
                                  std::size_t batch_size = 0);

/// Scalar bound c_k/(1 + c_k L) <= gamma_k <= c_k, with c_k following the
/// run's schedule. Violations are reported relative to c_k.
AuditReport audit_stepsize_bounds(const RunRecord &run, double c, double L);

/// Per-coordinate bound with the c_j recorded at each step. Needs a run
/// recorded with record_detail.
AuditReport audit_stepsize_bounds(const RunRecord &run, const std::vector<double> &L_coord);

/// |gamma_j g_j^2 - 2 ((c_j - gamma_j)/c_j) f_S| / f_S at every recorded
/// step and coordinate of an NGN-D run with record_detail.
AuditReport audit_fundamental_equality(const RunRecord &run);

/// The four parameter-collapse pairs, compared bit for bit.
std::vector<AuditReport> audit_reductions(const StochasticObjective &problem, std::uint64_t seed,
                                          std::int64_t steps = 100, std::size_t batch_size = 0);

/// Average suboptimality of NGN-M with c = 1/sqrt(K), beta = beta_max
/// against the constant-parameter bound. The problem must carry L, f_star
/// and x_star and is run full batch from its default start. Requires K >= 10.
/// max_violation is (average - bound); negative values are slack.
AuditReport audit_theorem_bound(const StochasticObjective &problem, std::int64_t K);

/// Decaying c_k = 1/sqrt(k+1), beta_k = beta_max(c_k, L), evaluated at the
/// rho-weighted average iterate against the decaying-schedule bound.
AuditReport audit_theorem_bound_decaying(const StochasticObjective &problem, std::int64_t K);

/// Coupled weight decay: random instances with a negative weight-decay
/// factor must produce a zero step-size and a pure shrink + momentum update.
AuditReport audit_weight_decay_clip(std::uint64_t seed, std::size_t instances = 1000);

/// Full suite used by `ngn verify`.
std::vector<AuditReport> run_all_audits(std::uint64_t seed = 0);

inline constexpr const char *kAuditHeader = "name,passed,max_violation,location";
std::string audit_row(const AuditReport &report);
void write_audit_csv(const std::vector<AuditReport> &reports, std::ostream &out);

}  // namespace ngn

#endif  // NGN_VERIFY_HPP

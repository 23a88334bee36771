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

#ifndef NGN_CSV_HPP
#define NGN_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ngn/harness.hpp"

namespace ngn {

inline constexpr const char *kTrajectoryHeader =
    "step,loss,full_loss,grad_norm,gamma_scalar,gamma_coord_min,gamma_coord_max,"
    "gamma_coord_mean,update_norm";
inline constexpr const char *kSummaryHeader =
    "optimizer,c,beta,seed,status,final_loss,best_loss,steps_to_success,x0,x_final";

/// 17 significant digits, so the text parses back to the same double.
std::string format_double(double v);

void write_trajectory_csv(const RunRecord &record, std::ostream &out);
void write_trajectory_csv(const RunRecord &record, const std::string &path);

std::string summary_row(const SweepCell &cell);
SweepCell summarize(const RunRecord &record, const std::string &optimizer_label);

void write_summary_csv(const SweepResult &result, std::ostream &out);
void write_summary_csv(const SweepResult &result, const std::string &path);

/// One trajectory row as numbers, in header order.
struct TrajectoryRow {
  std::int64_t step;
  double loss, full_loss, grad_norm, gamma_scalar, gamma_coord_min, gamma_coord_max,
      gamma_coord_mean, update_norm;
};

std::vector<TrajectoryRow> read_trajectory_csv(std::istream &in);
std::vector<SweepCell> read_summary_csv(std::istream &in);

}  // namespace ngn

#endif  // NGN_CSV_HPP

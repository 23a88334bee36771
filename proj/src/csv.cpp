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

#include "ngn/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace ngn {

namespace {

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string &s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "-nan") return -std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidArgument("csv: malformed number '" + s + "'");
  return v;
}

template <typename Int = std::int64_t>
Int parse_int(const std::string &s) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw InvalidArgument("csv: malformed integer '" + s + "'");
  return v;
}

std::ofstream open_for_write(const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void check_header(std::istream &in, const char *expected) {
  std::string line;
  if (!std::getline(in, line) || line != expected)
    throw InvalidArgument("csv: unexpected header");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_trajectory_csv(const RunRecord &record, std::ostream &out) {
  out << kTrajectoryHeader << '\n';
  for (std::size_t k = 0; k < record.losses.size(); ++k) {
    const StepReport &r = record.step_reports[k];
    out << k << ',' << format_double(record.losses[k]) << ','
        << format_double(record.full_losses[k]) << ',' << format_double(record.grad_norms[k])
        << ',' << format_double(r.gamma_scalar) << ',' << format_double(r.gamma_coord_min)
        << ',' << format_double(r.gamma_coord_max) << ',' << format_double(r.gamma_coord_mean)
        << ',' << format_double(r.update_norm) << '\n';
  }
}

void write_trajectory_csv(const RunRecord &record, const std::string &path) {
  auto out = open_for_write(path);
  write_trajectory_csv(record, out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

SweepCell summarize(const RunRecord &record, const std::string &optimizer_label) {
  SweepCell cell;
  cell.optimizer = optimizer_label;
  cell.c = record.spec.c;
  cell.beta = record.spec.beta1;
  cell.seed = record.seed;
  cell.x0 = record.x0.size() > 0 ? record.x0(0) : 0.0;
  cell.status = record.status;
  cell.final_loss = record.final_loss();
  cell.best_loss = record.best_loss();
  cell.steps_to_success = record.steps_to_success();
  cell.steps = static_cast<std::int64_t>(record.steps());
  cell.x_final = record.x_final.size() > 0 ? record.x_final(0) : 0.0;
  return cell;
}

std::string summary_row(const SweepCell &cell) {
  std::string row = cell.optimizer + ',' + format_double(cell.c) + ',' +
                    format_double(cell.beta) + ',' + std::to_string(cell.seed) + ',' +
                    (cell.status ? std::string(to_string(*cell.status)) : "Error") + ',' +
                    format_double(cell.final_loss) + ',' + format_double(cell.best_loss) + ',' +
                    (cell.steps_to_success ? std::to_string(*cell.steps_to_success) : "") +
                    ',' + format_double(cell.x0) + ',' + format_double(cell.x_final);
  return row;
}

void write_summary_csv(const SweepResult &result, std::ostream &out) {
  out << kSummaryHeader << '\n';
  for (const auto &cell : result.cells) out << summary_row(cell) << '\n';
}

void write_summary_csv(const SweepResult &result, const std::string &path) {
  auto out = open_for_write(path);
  write_summary_csv(result, out);
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream &in) {
  check_header(in, kTrajectoryHeader);
  std::vector<TrajectoryRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 9) throw InvalidArgument("csv: trajectory row needs 9 fields");
    rows.push_back({parse_int(f[0]), parse_double(f[1]), parse_double(f[2]),
                    parse_double(f[3]), parse_double(f[4]), parse_double(f[5]),
                    parse_double(f[6]), parse_double(f[7]), parse_double(f[8])});
  }
  return rows;
}

std::vector<SweepCell> read_summary_csv(std::istream &in) {
  check_header(in, kSummaryHeader);
  std::vector<SweepCell> cells;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) throw InvalidArgument("csv: summary row needs 10 fields");
    SweepCell c;
    c.index = cells.size();
    c.optimizer = f[0];
    c.c = parse_double(f[1]);
    c.beta = parse_double(f[2]);
    c.seed = parse_int<std::uint64_t>(f[3]);
    if (f[4] != "Error") c.status = parse_run_status(f[4]);
    c.final_loss = parse_double(f[5]);
    c.best_loss = parse_double(f[6]);
    if (!f[7].empty()) c.steps_to_success = parse_int(f[7]);
    c.x0 = parse_double(f[8]);
    c.x_final = parse_double(f[9]);
    cells.push_back(std::move(c));
  }
  return cells;
}

}  // namespace ngn

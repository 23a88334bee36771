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

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "ngn/csv.hpp"
#include "support.hpp"

using namespace ngn;
using namespace ngn::testing;

namespace {

bool same_bits(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

RunRecord sample_run(std::size_t batch_size, std::int64_t steps = 40) {
  ProblemSpec ps;
  ps.kind = ProblemKind::LeastSquares;
  ps.dim = 4;
  ps.rows = 10;
  ps.seed = 5;
  const auto p = build_problem(ps);
  OptimizerSpec spec;
  spec.kind = OptimizerKind::NGN_MD_V2;
  spec.c = 0.37;
  spec.beta1 = 0.6;
  RunBudget b;
  b.max_steps = steps;
  b.batch_size = batch_size;
  b.full_loss_every = 3;
  return run_once(p, spec, b, 2);
}

}  // namespace

TEST_SUITE("csv") {
  TEST_CASE("format_double round-trips and renders specials") {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
      const double v = rng.normal() * std::pow(10.0, rng.uniform(-300.0, 300.0));
      const std::string s = format_double(v);
      REQUIRE(same_bits(std::strtod(s.c_str(), nullptr), v));
    }
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(same_bits(std::strtod(format_double(0.1).c_str(), nullptr), 0.1));
  }

  TEST_CASE("empty run gives a header-only trajectory") {
    RunRecord empty;
    std::ostringstream out;
    write_trajectory_csv(empty, out);
    CHECK(out.str() == std::string(kTrajectoryHeader) + "\n");
    std::istringstream in(out.str());
    CHECK(read_trajectory_csv(in).empty());
  }

  TEST_CASE("trajectory round-trip is bit-exact") {
    for (std::size_t bs : {std::size_t{0}, std::size_t{3}}) {
      const auto rec = sample_run(bs);
      std::ostringstream out;
      write_trajectory_csv(rec, out);
      std::istringstream in(out.str());
      const auto rows = read_trajectory_csv(in);
      REQUIRE(rows.size() == rec.steps());
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto &r = rows[k];
        const auto &s = rec.step_reports[k];
        REQUIRE(r.step == static_cast<std::int64_t>(k));
        REQUIRE(same_bits(r.loss, rec.losses[k]));
        REQUIRE(same_bits(r.full_loss, rec.full_losses[k]));
        REQUIRE(same_bits(r.grad_norm, rec.grad_norms[k]));
        REQUIRE(same_bits(r.gamma_scalar, s.gamma_scalar));
        REQUIRE(same_bits(r.gamma_coord_min, s.gamma_coord_min));
        REQUIRE(same_bits(r.gamma_coord_max, s.gamma_coord_max));
        REQUIRE(same_bits(r.gamma_coord_mean, s.gamma_coord_mean));
        REQUIRE(same_bits(r.update_norm, s.update_norm));
      }
    }
  }

  TEST_CASE("converged runs end with a NaN-filled report row") {
    ProblemSpec ps;
    ps.kind = ProblemKind::Polynomial1D;
    OptimizerSpec spec;
    spec.kind = OptimizerKind::NGN_M_V1;
    spec.c = 10.0;
    spec.beta1 = 0.9;
    RunBudget b;
    b.max_steps = 10000;
    const auto rec = run_once(build_problem(ps), spec, b, 0);
    REQUIRE(rec.status == RunStatus::Converged);
    std::ostringstream out;
    write_trajectory_csv(rec, out);
    const std::string text = out.str();
    const auto last = text.substr(text.rfind('\n', text.size() - 2) + 1);
    CHECK(last.find(",nan,nan,nan,nan,nan\n") != std::string::npos);
  }

  TEST_CASE("summary rows and round-trip") {
    SweepResult result;
    result.cells.push_back(summarize(sample_run(0), "md2"));
    result.cells.push_back(summarize(sample_run(3, 1), "stoch"));
    SweepCell failed;
    failed.optimizer = "bad";
    failed.c = 2.0;
    failed.beta = 0.5;
    failed.seed = 7;
    failed.final_loss = failed.best_loss = failed.x_final = std::numeric_limits<double>::quiet_NaN();
    result.cells.push_back(failed);

    std::ostringstream out;
    write_summary_csv(result, out);
    const std::string text = out.str();
    CHECK(text.rfind(std::string(kSummaryHeader) + "\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    CHECK(text.find("bad,2,0.5,7,Error,nan,nan,,0,nan\n") != std::string::npos);

    std::istringstream in(text);
    const auto cells = read_summary_csv(in);
    REQUIRE(cells.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto &a = cells[i];
      const auto &b = result.cells[i];
      CHECK(a.optimizer == b.optimizer);
      CHECK(same_bits(a.c, b.c));
      CHECK(same_bits(a.beta, b.beta));
      CHECK(a.seed == b.seed);
      CHECK(a.status == b.status);
      CHECK(same_bits(a.final_loss, b.final_loss));
      CHECK(same_bits(a.best_loss, b.best_loss));
      CHECK(a.steps_to_success == b.steps_to_success);
      CHECK(same_bits(a.x0, b.x0));
      CHECK(same_bits(a.x_final, b.x_final));
      CHECK(summary_row(a) == summary_row(b));
    }
  }

  TEST_CASE("summarize copies the run") {
    const auto rec = sample_run(0);
    const auto cell = summarize(rec, "x");
    CHECK(cell.c == 0.37);
    CHECK(cell.beta == 0.6);
    CHECK(cell.seed == 2);
    CHECK(cell.status == rec.status);
    CHECK(cell.steps == static_cast<std::int64_t>(rec.steps()));
    CHECK(cell.x0 == rec.x0(0));
    CHECK(cell.x_final == rec.x_final(0));
    CHECK(same_bits(cell.final_loss, rec.final_loss()));
  }

  TEST_CASE("malformed input is rejected") {
    std::istringstream bad_header("step,loss\n");
    CHECK_THROWS_AS(read_trajectory_csv(bad_header), InvalidArgument);
    std::istringstream short_row(std::string(kTrajectoryHeader) + "\n0,1,2\n");
    CHECK_THROWS_AS(read_trajectory_csv(short_row), InvalidArgument);
    std::istringstream bad_number(std::string(kTrajectoryHeader) + "\n0,1,2,x,4,5,6,7,8\n");
    CHECK_THROWS_AS(read_trajectory_csv(bad_number), InvalidArgument);
    std::istringstream bad_status(std::string(kSummaryHeader) + "\na,1,0.9,0,Done,1,1,,0,0\n");
    CHECK_THROWS_AS(read_summary_csv(bad_status), InvalidArgument);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_summary_csv(empty), InvalidArgument);
  }

  TEST_CASE("writing to an unwritable path is an I/O error") {
    CHECK_THROWS_AS(write_summary_csv(SweepResult{}, "/nonexistent/dir/out.csv"), IoError);
    CHECK_THROWS_AS(write_trajectory_csv(RunRecord{}, "/nonexistent/dir/t.csv"), IoError);
  }
}

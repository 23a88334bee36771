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

#ifndef NGN_PROBLEMS_HPP
#define NGN_PROBLEMS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ngn/common.hpp"

namespace ngn {

enum class ProblemKind {
  LeastSquares,
  RidgeQuadratic,
  Rosenbrock,
  Multimodal1D,
  Polynomial1D,
  LinearRegressionData,
};

std::string_view to_string(ProblemKind kind);
ProblemKind parse_problem_kind(std::string_view name);

/// Everything needed to construct an objective.
///
/// Generated least squares draws an rows x dim standard-normal matrix; with
/// `interpolating` the targets are b = A x_true so every sub-system is
/// consistent. Explicit `A`/`b` take precedence over generation.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::Rosenbrock;
  std::size_t dim = 0;
  std::size_t rows = 0;
  double ridge_r = 0.0;
  std::uint64_t seed = 0;
  bool interpolating = false;
  std::vector<double> poly_coeffs{0.0, 1.0};  // p(x), ascending powers
  double poly_L = 1.0;
  std::string data_path;
  std::optional<Matrix> A;
  std::optional<Vector> b;
  std::vector<double> x0;  // starting point; empty selects the default
};

/// Analytic facts about an objective. Absent fields are unknown or do not
/// exist (Rosenbrock has no global smoothness constant).
struct ObjectiveMetadata {
  std::optional<double> L;
  std::vector<double> L_coord;
  std::optional<double> f_star;
  std::optional<Vector> x_star;
  std::optional<double> mu;
  std::optional<double> C_poly;
  // Smoothness valid for every single-sample loss f_i, hence for every batch.
  std::optional<double> L_component;
  std::vector<double> L_coord_component;
};

struct Batch {
  std::vector<std::size_t> indices;
};

struct StepSample {
  double loss = 0.0;
  Vector grad;
  Batch batch;
};

/// Non-negative finite-sum loss f(x) = (1/n) sum_i f_i(x) with exact
/// gradients. Immutable after construction.
///
/// For the least-squares family f_i(x) = (n/2)(a_i^T x - b_i)^2, so the full
/// objective is (1/2)||Ax - b||^2 and a batch S gives
/// f_S(x) = (n / 2|S|) sum_{i in S} (a_i^T x - b_i)^2.
class StochasticObjective {
 public:
  ProblemKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  std::size_t n_samples() const { return n_samples_; }
  const ObjectiveMetadata &metadata() const { return metadata_; }
  const Vector &default_start() const { return start_; }
  bool is_least_squares() const { return A_.size() > 0; }

  /// Data matrix and targets of the least-squares family.
  const Matrix &design() const { return A_; }
  const Vector &targets() const { return b_; }

  StepSample evaluate(const Vector &x, const Batch &batch) const;
  StepSample evaluate_full(const Vector &x) const;
  double loss(const Vector &x, const Batch &batch) const;
  double full_loss(const Vector &x) const;
  Batch full_batch() const;

  /// min_x f_S(x) when it can be computed: a minimum-norm least-squares
  /// solve for the least-squares family, the known optimum for
  /// single-sample objectives with f_star. Empty otherwise.
  std::optional<double> batch_minimum(const Batch &batch) const;

 private:
  friend StochasticObjective build_problem(const ProblemSpec &spec);
  StochasticObjective() = default;

  void check_point(const Vector &x) const;
  void check_batch(const Batch &batch) const;

  ProblemKind kind_ = ProblemKind::Rosenbrock;
  std::size_t dim_ = 0;
  std::size_t n_samples_ = 1;
  ObjectiveMetadata metadata_;
  Vector start_;
  Matrix A_;
  Vector b_;
  std::vector<double> poly_;
  double poly_L_ = 1.0;
};

StochasticObjective build_problem(const ProblemSpec &spec);

/// Deterministic batch for (seed, step): batch_size distinct indices drawn
/// without replacement, returned sorted. The full batch is 0..n-1.
Batch sample_batch(const StochasticObjective &problem, std::uint64_t seed,
                   std::uint64_t step, std::size_t batch_size);

/// Central differences (f(x + h e_j) - f(x - h e_j)) / 2h.
Vector finite_diff_grad(const StochasticObjective &problem, const Vector &x,
                        const Batch &batch, double h);

/// Raw design matrix and targets from a comma-separated file whose last
/// column is the target. A non-numeric first row is treated as a header.
struct RegressionData {
  Matrix features;
  Vector targets;
};
RegressionData load_regression_csv(const std::string &path);

/// sup_x x p(x) p'(x) / (1 + p(x)^2), the constant C with
/// C (1 + p^2) >= x p p' everywhere.
double polynomial_assumption_constant(const std::vector<double> &coeffs);

}  // namespace ngn

#endif  // NGN_PROBLEMS_HPP

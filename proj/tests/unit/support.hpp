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

#ifndef NGN_TESTS_SUPPORT_HPP
#define NGN_TESTS_SUPPORT_HPP

// Generators and independent reference computations shared by the unit
// tests. Oracles here deliberately avoid the library's own code paths.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ngn/problems.hpp"
#include "ngn/rng.hpp"

namespace ngn::testing {

inline Matrix random_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
  Matrix A(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) A(i, j) = scale * rng.normal();
  return A;
}

inline Vector random_vector(Rng &rng, Eigen::Index n, double scale = 1.0) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * rng.normal();
  return v;
}

/// Least-squares problem with explicit data, so tests know A and b.
inline StochasticObjective explicit_least_squares(const Matrix &A, const Vector &b) {
  ProblemSpec spec;
  spec.kind = ProblemKind::LeastSquares;
  spec.A = A;
  spec.b = b;
  return build_problem(spec);
}

struct RandomLs {
  Matrix A;
  Vector b;
  StochasticObjective problem;
};

inline RandomLs random_least_squares(Rng &rng, Eigen::Index rows, Eigen::Index cols,
                                     bool interpolating = false) {
  Matrix A = random_matrix(rng, rows, cols);
  Vector b = interpolating ? Vector(A * random_vector(rng, cols)) : random_vector(rng, rows);
  StochasticObjective p = explicit_least_squares(A, b);
  return {std::move(A), std::move(b), std::move(p)};
}

/// f_S(x) = (n / (2|S|)) sum_{i in S} (a_i'x - b_i)^2, scalar loops only.
inline double ls_batch_loss(const Matrix &A, const Vector &b, const Vector &x,
                            const std::vector<std::size_t> &batch) {
  double sum = 0.0;
  for (std::size_t i : batch) {
    double r = -b(static_cast<Eigen::Index>(i));
    for (Eigen::Index j = 0; j < A.cols(); ++j) r += A(static_cast<Eigen::Index>(i), j) * x(j);
    sum += r * r;
  }
  return 0.5 * static_cast<double>(A.rows()) / static_cast<double>(batch.size()) * sum;
}

inline Vector ls_batch_grad(const Matrix &A, const Vector &b, const Vector &x,
                            const std::vector<std::size_t> &batch) {
  Vector g = Vector::Zero(A.cols());
  const double scale = static_cast<double>(A.rows()) / static_cast<double>(batch.size());
  for (std::size_t i : batch) {
    const auto row = static_cast<Eigen::Index>(i);
    double r = -b(row);
    for (Eigen::Index j = 0; j < A.cols(); ++j) r += A(row, j) * x(j);
    for (Eigen::Index j = 0; j < A.cols(); ++j) g(j) += scale * r * A(row, j);
  }
  return g;
}

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
inline double power_iteration(const Matrix &M, int iters = 5000) {
  Vector v = Vector::Ones(M.rows()) / std::sqrt(static_cast<double>(M.rows()));
  double lambda = 0.0;
  for (int k = 0; k < iters; ++k) {
    Vector w = M * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    lambda = v.dot(w);
    v = w / n;
  }
  return lambda;
}

/// Smoothness over every single-sample loss: max_i n ||a_i||^2.
inline double component_smoothness(const Matrix &A) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    best = std::max(best, static_cast<double>(A.rows()) * A.row(i).squaredNorm());
  return best;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace ngn::testing

#endif  // NGN_TESTS_SUPPORT_HPP

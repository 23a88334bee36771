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

#include "ngn/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "ngn/rng.hpp"

namespace ngn {

namespace {

constexpr std::size_t kDiabetesRows = 442;
constexpr std::size_t kDiabetesCols = 10;

double poly_value(const std::vector<double> &c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

double poly_derivative(const std::vector<double> &c, double x) {
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) v = v * x + static_cast<double>(i) * c[i];
  return v;
}

Matrix gaussian_matrix(Rng &rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  // Row-major fill so the draw order does not depend on the storage order.
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

Vector gaussian_vector(Rng &rng, std::size_t n) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

void standardize_columns(Matrix &m) {
  const auto n = static_cast<double>(m.rows());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double mean = m.col(j).sum() / n;
    m.col(j).array() -= mean;
    const double sd = std::sqrt(m.col(j).squaredNorm() / n);
    if (sd > 0.0) m.col(j) /= sd;
  }
}

// Fills metadata for f(x) = (1/2)||Ax - b||^2 split into n = rows samples.
void least_squares_metadata(const Matrix &A, const Vector &b,
                            ObjectiveMetadata &meta) {
  const Matrix gram = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const Vector &ev = eig.eigenvalues();
  meta.L = std::max(ev(ev.size() - 1), 0.0);
  meta.L_coord.resize(static_cast<std::size_t>(A.cols()));
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    meta.L_coord[static_cast<std::size_t>(j)] = gram(j, j);

  const double rank_tol =
      std::max(1.0, *meta.L) * 1e-10 * static_cast<double>(A.cols());
  if (ev(0) > rank_tol) meta.mu = ev(0);

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
  const Vector x_star = cod.solve(b);
  meta.x_star = x_star;
  meta.f_star = 0.5 * (A * x_star - b).squaredNorm();

  const auto n = static_cast<double>(A.rows());
  double l_comp = 0.0;
  meta.L_coord_component.assign(static_cast<std::size_t>(A.cols()), 0.0);
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    l_comp = std::max(l_comp, n * A.row(i).squaredNorm());
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      auto &slot = meta.L_coord_component[static_cast<std::size_t>(j)];
      slot = std::max(slot, n * A(i, j) * A(i, j));
    }
  }
  meta.L_component = l_comp;
}

}  // namespace

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::LeastSquares: return "least-squares";
    case ProblemKind::RidgeQuadratic: return "ridge";
    case ProblemKind::Rosenbrock: return "rosenbrock";
    case ProblemKind::Multimodal1D: return "multimodal";
    case ProblemKind::Polynomial1D: return "polynomial";
    case ProblemKind::LinearRegressionData: return "regression";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(std::string_view name) {
  for (auto k : {ProblemKind::LeastSquares, ProblemKind::RidgeQuadratic,
                 ProblemKind::Rosenbrock, ProblemKind::Multimodal1D,
                 ProblemKind::Polynomial1D, ProblemKind::LinearRegressionData}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown problem kind '" + std::string(name) + "'");
}

double polynomial_assumption_constant(const std::vector<double> &coeffs) {
  std::size_t degree = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0.0) degree = i;
  // The ratio tends to deg(p) as |x| grows; scan the finite part.
  double best = static_cast<double>(degree);
  auto probe = [&](double x) {
    const double p = poly_value(coeffs, x);
    const double r = x * p * poly_derivative(coeffs, x) / (1.0 + p * p);
    if (std::isfinite(r)) best = std::max(best, r);
  };
  for (int i = -20000; i <= 20000; ++i) probe(i * 1e-3);
  for (int e = -400; e <= 400; ++e) {
    const double x = std::pow(10.0, e / 100.0);
    probe(x);
    probe(-x);
  }
  return best;
}

RegressionData load_regression_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t", used) != std::string::npos) numeric = false;
        row.push_back(v);
      } catch (const std::exception &) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw InvalidArgument(path + ":" + std::to_string(line_no) +
                            ": non-numeric value");
    }
    if (row.size() < 2)
      throw InvalidArgument(path + ":" + std::to_string(line_no) +
                            ": need at least one feature and a target");
    if (!rows.empty() && row.size() != rows.front().size())
      throw InvalidArgument(path + ":" + std::to_string(line_no) +
                            ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument(path + ": no data rows");
  const std::size_t cols = rows.front().size() - 1;
  RegressionData data{Matrix(rows.size(), cols), Vector(rows.size())};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) data.features(i, j) = rows[i][j];
    data.targets(i) = rows[i][cols];
  }
  return data;
}

StochasticObjective build_problem(const ProblemSpec &spec) {
  StochasticObjective p;
  p.kind_ = spec.kind;
  Rng rng(spec.seed);

  switch (spec.kind) {
    case ProblemKind::LeastSquares: {
      if (spec.A || spec.b) {
        require(spec.A && spec.b, "least-squares: both A and b are required");
        require(spec.A->rows() == spec.b->size(),
                "least-squares: A has " + std::to_string(spec.A->rows()) +
                    " rows but b has " + std::to_string(spec.b->size()) + " entries");
        require(spec.A->rows() > 0 && spec.A->cols() > 0, "least-squares: empty A");
        p.A_ = *spec.A;
        p.b_ = *spec.b;
      } else {
        require(spec.dim >= 1, "least-squares: dim must be >= 1");
        const std::size_t rows = spec.rows > 0 ? spec.rows : 2 * spec.dim;
        p.A_ = gaussian_matrix(rng, rows, spec.dim);
        if (spec.interpolating) {
          const Vector x_true = gaussian_vector(rng, spec.dim);
          p.b_ = p.A_ * x_true;
        } else {
          p.b_ = gaussian_vector(rng, rows);
        }
      }
      break;
    }
    case ProblemKind::RidgeQuadratic: {
      require(spec.dim >= 1, "ridge: dim must be >= 1");
      require(spec.ridge_r >= 0.0 && std::isfinite(spec.ridge_r),
              "ridge: r must be finite and >= 0");
      Matrix A = gaussian_matrix(rng, spec.dim, spec.dim);
      const Vector y = gaussian_vector(rng, spec.dim);
      A.diagonal().array() += spec.ridge_r;
      p.A_ = std::move(A);
      p.b_ = y;
      break;
    }
    case ProblemKind::LinearRegressionData: {
      RegressionData data;
      if (!spec.data_path.empty()) {
        data = load_regression_csv(spec.data_path);
      } else {
        // Synthetic stand-in with the Diabetes shape.
        data.features = gaussian_matrix(rng, kDiabetesRows, kDiabetesCols);
        const Vector w = gaussian_vector(rng, kDiabetesCols);
        data.targets = data.features * w;
        for (Eigen::Index i = 0; i < data.targets.size(); ++i)
          data.targets(i) += 0.5 * rng.normal();
      }
      standardize_columns(data.features);
      p.A_ = std::move(data.features);
      p.b_ = std::move(data.targets);
      break;
    }
    case ProblemKind::Rosenbrock:
      p.dim_ = 2;
      p.start_ = Vector(2);
      p.start_ << -1.2, 1.0;
      p.metadata_.f_star = 0.0;
      p.metadata_.x_star = Vector::Ones(2);
      break;
    case ProblemKind::Multimodal1D:
      p.dim_ = 1;
      p.start_ = Vector::Constant(1, 1.0);
      break;
    case ProblemKind::Polynomial1D: {
      require(spec.poly_L > 0.0 && std::isfinite(spec.poly_L),
              "polynomial: L must be finite and > 0");
      require(!spec.poly_coeffs.empty(), "polynomial: empty coefficient list");
      for (double c : spec.poly_coeffs)
        require(std::isfinite(c), "polynomial: non-finite coefficient");
      p.dim_ = 1;
      p.poly_ = spec.poly_coeffs;
      p.poly_L_ = spec.poly_L;
      p.start_ = Vector::Constant(1, 3.0);
      p.metadata_.f_star = 0.0;
      p.metadata_.x_star = Vector::Zero(1);
      p.metadata_.C_poly = polynomial_assumption_constant(p.poly_);
      break;
    }
  }

  if (p.A_.size() > 0) {
    for (Eigen::Index i = 0; i < p.A_.size(); ++i)
      require(std::isfinite(p.A_.data()[i]), "non-finite entry in data matrix");
    for (Eigen::Index i = 0; i < p.b_.size(); ++i)
      require(std::isfinite(p.b_(i)), "non-finite entry in target vector");
    p.dim_ = static_cast<std::size_t>(p.A_.cols());
    p.n_samples_ = static_cast<std::size_t>(p.A_.rows());
    p.start_ = Vector::Zero(p.A_.cols());
    least_squares_metadata(p.A_, p.b_, p.metadata_);
  }

  if (!spec.x0.empty()) {
    require(spec.x0.size() == p.dim_,
            "x0 has " + std::to_string(spec.x0.size()) + " entries, problem dim is " +
                std::to_string(p.dim_));
    p.start_ = Eigen::Map<const Vector>(spec.x0.data(),
                                        static_cast<Eigen::Index>(spec.x0.size()));
    p.check_point(p.start_);
  }
  return p;
}

void StochasticObjective::check_point(const Vector &x) const {
  if (static_cast<std::size_t>(x.size()) != dim_)
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) +
                          ", expected " + std::to_string(dim_));
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!std::isfinite(x(i)))
      throw NumericError("non-finite coordinate " + std::to_string(i));
}

void StochasticObjective::check_batch(const Batch &batch) const {
  if (batch.indices.empty()) throw InvalidArgument("empty batch");
  for (auto i : batch.indices)
    if (i >= n_samples_)
      throw InvalidArgument("batch index " + std::to_string(i) + " out of range");
}

Batch StochasticObjective::full_batch() const {
  Batch b;
  b.indices.resize(n_samples_);
  std::iota(b.indices.begin(), b.indices.end(), std::size_t{0});
  return b;
}

StepSample StochasticObjective::evaluate(const Vector &x, const Batch &batch) const {
  check_point(x);
  check_batch(batch);
  StepSample s;
  s.batch = batch;
  s.grad = Vector::Zero(static_cast<Eigen::Index>(dim_));

  switch (kind_) {
    case ProblemKind::LeastSquares:
    case ProblemKind::RidgeQuadratic:
    case ProblemKind::LinearRegressionData: {
      if (batch.indices.size() == n_samples_) {
        const Vector r = A_ * x - b_;
        s.loss = 0.5 * r.squaredNorm();
        s.grad.noalias() = A_.transpose() * r;
      } else {
        const double scale =
            static_cast<double>(n_samples_) / static_cast<double>(batch.indices.size());
        double sum = 0.0;
        for (auto i : batch.indices) {
          const auto row = static_cast<Eigen::Index>(i);
          const double r = A_.row(row).dot(x) - b_(row);
          sum += r * r;
          s.grad += (scale * r) * A_.row(row).transpose();
        }
        s.loss = 0.5 * scale * sum;
      }
      break;
    }
    case ProblemKind::Rosenbrock: {
      const double a = x(0), b = x(1);
      const double t = b - a * a;
      s.loss = (a - 1.0) * (a - 1.0) + 100.0 * t * t;
      s.grad(0) = 2.0 * (a - 1.0) - 400.0 * a * t;
      s.grad(1) = 200.0 * t;
      break;
    }
    case ProblemKind::Multimodal1D: {
      constexpr double pi = std::numbers::pi;
      const double z = x(0);
      const double u = std::sin(1.0 + std::cos(-pi + z));
      const double du = std::cos(1.0 + std::cos(-pi + z)) * -std::sin(-pi + z);
      const double w = std::sin(1.0 + std::cos(pi - z));
      const double dw = std::cos(1.0 + std::cos(pi - z)) * std::sin(pi - z);
      const double p = u - 0.2 * z;
      const double q = w + 0.2 * z;
      s.loss = p * p + q * q * q * q;
      s.grad(0) = 2.0 * p * (du - 0.2) + 4.0 * q * q * q * (dw + 0.2);
      break;
    }
    case ProblemKind::Polynomial1D: {
      const double z = x(0);
      const double p = poly_value(poly_, z);
      const double dp = poly_derivative(poly_, z);
      s.loss = poly_L_ * z * z * (1.0 + p * p);
      s.grad(0) = poly_L_ * (2.0 * z * (1.0 + p * p) + 2.0 * z * z * p * dp);
      break;
    }
  }
  return s;
}

StepSample StochasticObjective::evaluate_full(const Vector &x) const {
  return evaluate(x, full_batch());
}

double StochasticObjective::loss(const Vector &x, const Batch &batch) const {
  return evaluate(x, batch).loss;
}

double StochasticObjective::full_loss(const Vector &x) const {
  if (is_least_squares()) {
    check_point(x);
    return 0.5 * (A_ * x - b_).squaredNorm();
  }
  return evaluate(x, full_batch()).loss;
}

std::optional<double> StochasticObjective::batch_minimum(const Batch &batch) const {
  check_batch(batch);
  if (is_least_squares()) {
    if (batch.indices.size() == n_samples_) return metadata_.f_star;
    const auto m = static_cast<Eigen::Index>(batch.indices.size());
    Matrix As(m, A_.cols());
    Vector bs(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      const auto row = static_cast<Eigen::Index>(batch.indices[static_cast<std::size_t>(r)]);
      As.row(r) = A_.row(row);
      bs(r) = b_(row);
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(As);
    const Vector xs = cod.solve(bs);
    const double scale = static_cast<double>(n_samples_) / static_cast<double>(m);
    return 0.5 * scale * (As * xs - bs).squaredNorm();
  }
  return metadata_.f_star;
}

Batch sample_batch(const StochasticObjective &problem, std::uint64_t seed,
                   std::uint64_t step, std::size_t batch_size) {
  const std::size_t n = problem.n_samples();
  require(batch_size >= 1, "batch size must be >= 1");
  require(batch_size <= n, "batch size " + std::to_string(batch_size) +
                               " exceeds sample count " + std::to_string(n));
  if (batch_size == n) return problem.full_batch();

  // Partial Fisher-Yates over an index permutation.
  Rng rng(seed, step);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < batch_size; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(perm[i], perm[j]);
  }
  Batch b;
  b.indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(batch_size));
  std::sort(b.indices.begin(), b.indices.end());
  return b;
}

Vector finite_diff_grad(const StochasticObjective &problem, const Vector &x,
                        const Batch &batch, double h) {
  require(h > 0.0 && std::isfinite(h), "finite-difference width must be > 0");
  Vector g(x.size());
  Vector probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe(j) = x(j) + h;
    const double up = problem.loss(probe, batch);
    probe(j) = x(j) - h;
    const double down = problem.loss(probe, batch);
    probe(j) = x(j);
    const double d = (up - down) / (2.0 * h);
    if (!std::isfinite(d))
      throw NumericError("non-finite finite difference at coordinate " +
                         std::to_string(j));
    g(j) = d;
  }
  return g;
}

}  // namespace ngn

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

#include "ngn/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ngn {

namespace {

void require_positive(double v, const char *name) {
  require(std::isfinite(v) && v > 0.0, std::string(name) + " must be finite and > 0");
}

void require_nonnegative(double v, const char *name) {
  require(std::isfinite(v) && v >= 0.0, std::string(name) + " must be finite and >= 0");
}

// Number of size-k subsets of n items, saturating above `cap`.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  k = std::min(k, n - k);
  double acc = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (acc > static_cast<double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(std::llround(acc));
}

struct Accumulator {
  double sum_int = 0.0, sum_pos = 0.0, sq_int = 0.0, sq_pos = 0.0;
  std::size_t count = 0;

  void add(double f_star, double fs_star) {
    const double gap = f_star - fs_star;
    sum_int += gap;
    sq_int += gap * gap;
    sum_pos += fs_star;
    sq_pos += fs_star * fs_star;
    ++count;
  }
};

double batch_min_or_throw(const StochasticObjective &problem, const Batch &b) {
  const auto m = problem.batch_minimum(b);
  if (!m) throw InvalidArgument("estimate_sigmas: per-batch minimum is not computable");
  return *m;
}

SigmaEstimate monte_carlo(const StochasticObjective &problem, std::size_t batch_size,
                          std::size_t n_mc, std::uint64_t seed, double f_star) {
  require(n_mc >= 2, "estimate_sigmas: need at least two Monte-Carlo samples");
  Accumulator acc;
  for (std::size_t i = 0; i < n_mc; ++i) {
    const Batch b = sample_batch(problem, seed, i, batch_size);
    acc.add(f_star, batch_min_or_throw(problem, b));
  }
  const auto n = static_cast<double>(acc.count);
  SigmaEstimate est;
  est.sigma_int_sq = acc.sum_int / n;
  est.sigma_pos_sq = acc.sum_pos / n;
  const double var_int = std::max(0.0, (acc.sq_int - n * est.sigma_int_sq * est.sigma_int_sq) / (n - 1.0));
  const double var_pos = std::max(0.0, (acc.sq_pos - n * est.sigma_pos_sq * est.sigma_pos_sq) / (n - 1.0));
  est.se_int = std::sqrt(var_int / n);
  est.se_pos = std::sqrt(var_pos / n);
  est.batches = acc.count;
  return est;
}

}  // namespace

MomentumParams ngn_m_params(double c, double L) {
  require_positive(c, "c");
  require_positive(L, "L");
  const double cl = c * L;
  const double denom = (1.0 + cl) * (1.0 + 2.0 * cl);
  MomentumParams p;
  p.rho = c / denom;
  p.lambda_max = std::min(cl, 0.5 / denom);
  p.beta_max = p.lambda_max / (1.0 + p.lambda_max);
  return p;
}

double ngn_m_bound(const TheoryInputs &in) {
  require_positive(in.c, "c");
  require_positive(in.L, "L");
  require(in.K >= 1, "K must be >= 1");
  require_nonnegative(in.dist0_sq, "dist0_sq");
  require_nonnegative(in.sigma_int_sq, "sigma_int_sq");
  require_nonnegative(in.sigma_pos_sq, "sigma_pos_sq");
  const double cl = in.c * in.L;
  const double a = (1.0 + 2.0 * cl) * (1.0 + 2.0 * cl);
  return in.dist0_sq * a / (in.c * static_cast<double>(in.K)) +
         8.0 * cl * a * in.sigma_int_sq +
         2.0 * cl * std::max(2.0 * cl - 1.0, 0.0) * in.sigma_pos_sq;
}

double ngn_m_bound_decaying(double c0, double L, std::int64_t K, double dist0_sq,
                            double sigma_int_sq, double sigma_pos_sq) {
  require_positive(c0, "c0");
  require_positive(L, "L");
  require(K >= 1, "K must be >= 1");
  require_nonnegative(dist0_sq, "dist0_sq");
  require_nonnegative(sigma_int_sq, "sigma_int_sq");
  require_nonnegative(sigma_pos_sq, "sigma_pos_sq");
  const double cl = c0 * L;
  const double sk = std::sqrt(static_cast<double>(K));
  const double lg = std::log(static_cast<double>(K) + 2.0);
  return 5.0 * (1.0 + cl) * (1.0 + 2.0 * cl) * dist0_sq / (4.0 * c0 * sk) +
         10.0 * L * c0 * (1.0 + cl) * (1.0 + 2.0 * cl) * sigma_int_sq * lg / sk +
         5.0 * cl * (1.0 + cl) * lg / (2.0 * sk) * std::max(2.0 * cl - 1.0, 0.0) * sigma_pos_sq;
}

std::vector<double> decaying_average_weights(double c0, double L, std::int64_t K) {
  require_positive(c0, "c0");
  require_positive(L, "L");
  require(K >= 1, "K must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(K));
  double total = 0.0;
  for (std::int64_t k = 0; k < K; ++k) {
    const double ck = c0 / std::sqrt(static_cast<double>(k + 1));
    const double rho = ck / ((1.0 + ck * L) * (1.0 + 2.0 * ck * L));
    w[static_cast<std::size_t>(k)] = rho;
    total += rho;
  }
  for (double &x : w) x /= total;
  return w;
}

double ngn_d_bound(const TheoryInputs &in, NgnDMode mode) {
  const std::size_t d = in.c_coord.size();
  require(d >= 1, "ngn_d_bound: c_coord is empty");
  require(in.L_coord.size() == d && in.sigma_coord.size() == d,
          "ngn_d_bound: c_coord, L_coord and sigma_coord lengths differ");
  require(in.K >= 1, "K must be >= 1");
  require_nonnegative(in.f0_gap, "f0_gap");
  if (mode == NgnDMode::PL) require_positive(in.mu, "mu");

  double c_min = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < d; ++j) {
    const double cj = in.c_coord[j], lj = in.L_coord[j];
    require_positive(cj, "c_j");
    require_nonnegative(lj, "L_j");
    require_nonnegative(in.sigma_coord[j], "sigma_j");
    if (lj > 0.0)
      require(cj <= 1.0 / (2.0 * lj), "ngn_d_bound: c_j must satisfy c_j <= 1/(2 L_j)");
    if (mode == NgnDMode::PL)
      require(cj <= 6.0 / in.mu, "ngn_d_bound: c_j must satisfy c_j <= 6/mu");
    c_min = std::min(c_min, cj);
  }

  double noise = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double cj = in.c_coord[j], sj = in.sigma_coord[j];
    noise += in.L_coord[j] * cj * cj * sj * sj;
  }
  const auto K = static_cast<double>(in.K);
  if (mode == NgnDMode::Nonconvex)
    return 12.0 * in.f0_gap / (c_min * K) + 18.0 * noise / c_min;
  return std::pow(1.0 - in.mu * c_min / 6.0, K) * in.f0_gap + 9.0 / (in.mu * c_min) * noise;
}

GammaHatRange gammahat_range(double C_poly) {
  require(C_poly >= 0.0 && !std::isnan(C_poly), "C_poly must be >= 0");
  if (std::isinf(C_poly)) return {0.0, 2.0, 1.0};
  const double a = 2.0 * (1.0 + C_poly);
  return {1.0 / a, 2.0, (a - 1.0) * (a - 1.0) / ((a + 1.0) * (a + 1.0))};
}

SigmaEstimate estimate_sigmas(const StochasticObjective &problem, std::size_t batch_size,
                              std::size_t n_mc, std::uint64_t seed) {
  const auto f_star = problem.metadata().f_star;
  if (!f_star) throw InvalidArgument("estimate_sigmas: f_star is unknown for this problem");
  const std::size_t n = problem.n_samples();
  require(batch_size >= 1 && batch_size <= n, "estimate_sigmas: invalid batch size");

  const std::size_t total = binomial_capped(n, batch_size, kEnumerationLimit);
  if (total > kEnumerationLimit)
    return monte_carlo(problem, batch_size, n_mc, seed, *f_star);

  // Lexicographic walk over all size-b subsets.
  Accumulator acc;
  std::vector<std::size_t> idx(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) idx[i] = i;
  while (true) {
    acc.add(*f_star, batch_min_or_throw(problem, Batch{idx}));
    std::size_t pos = batch_size;
    while (pos > 0 && idx[pos - 1] == n - batch_size + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < batch_size; ++i) idx[i] = idx[i - 1] + 1;
  }
  SigmaEstimate est;
  est.sigma_int_sq = acc.sum_int / static_cast<double>(acc.count);
  est.sigma_pos_sq = acc.sum_pos / static_cast<double>(acc.count);
  est.enumerated = true;
  est.batches = acc.count;
  return est;
}

SigmaEstimate estimate_sigmas_monte_carlo(const StochasticObjective &problem,
                                          std::size_t batch_size, std::size_t n_mc,
                                          std::uint64_t seed) {
  const auto f_star = problem.metadata().f_star;
  if (!f_star) throw InvalidArgument("estimate_sigmas: f_star is unknown for this problem");
  require(batch_size >= 1 && batch_size <= problem.n_samples(),
          "estimate_sigmas: invalid batch size");
  return monte_carlo(problem, batch_size, n_mc, seed, *f_star);
}

}  // namespace ngn

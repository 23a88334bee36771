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

#ifndef NGN_THEORY_HPP
#define NGN_THEORY_HPP

// Closed-form convergence bounds and hyperparameter constraints for the NGN
// family. Bounds are the right-hand sides as stated in the corresponding
// theorems; none of them tighten the constants.

#include <cstdint>
#include <vector>

#include "ngn/problems.hpp"

namespace ngn {

struct TheoryInputs {
  double c = 1.0;
  double L = 1.0;
  std::int64_t K = 1;
  double dist0_sq = 0.0;      // ||x0 - x*||^2
  double sigma_int_sq = 0.0;  // E_S[f* - f_S*]
  double sigma_pos_sq = 0.0;  // E_S[f_S*]
  double mu = 0.0;            // PL constant
  double f0_gap = 0.0;        // f(x0) - f*
  std::vector<double> c_coord;
  std::vector<double> L_coord;
  std::vector<double> sigma_coord;  // per-coordinate noise sigma_j
};

struct MomentumParams {
  double rho;
  double lambda_max;
  double beta_max;
};

/// rho = c/((1+cL)(1+2cL)), lambda_max = min{cL, 0.5/((1+cL)(1+2cL))},
/// beta_max = lambda_max / (1 + lambda_max).
MomentumParams ngn_m_params(double c, double L);

/// ||x0-x*||^2 (1+2cL)^2/(cK) + 8cL(1+2cL)^2 s_int + 2cL max{2cL-1,0} s_pos.
double ngn_m_bound(const TheoryInputs &in);

/// Bound for c_k = c0/sqrt(k+1) on the rho_k-weighted average iterate.
double ngn_m_bound_decaying(double c0, double L, std::int64_t K, double dist0_sq,
                            double sigma_int_sq, double sigma_pos_sq);

/// Normalized averaging weights rho_k / sum rho_k for k = 0..K-1 under the
/// decaying schedule.
std::vector<double> decaying_average_weights(double c0, double L, std::int64_t K);

enum class NgnDMode { Nonconvex, PL };

/// Nonconvex: bound on min_k E||grad f(x^k)||^2. PL: bound on E[f(x^K) - f*].
double ngn_d_bound(const TheoryInputs &in, NgnDMode mode);

struct GammaHatRange {
  double lo;
  double hi;
  double beta_threshold;  // smallest beta with guaranteed convergence
};

/// Range of the rescaled NGN-M step on x^2(1+p(x)^2) for c >= 1/(2L).
GammaHatRange gammahat_range(double C_poly);

struct SigmaEstimate {
  double sigma_int_sq = 0.0;
  double sigma_pos_sq = 0.0;
  // Standard errors of the two means (zero when enumerated exactly).
  double se_int = 0.0;
  double se_pos = 0.0;
  bool enumerated = false;
  std::size_t batches = 0;
};

inline constexpr std::size_t kDefaultSigmaSamples = 10000;
inline constexpr std::size_t kEnumerationLimit = 10000;

/// E_S[f* - f_S*] and E_S[f_S*] over uniformly drawn batches. Every batch is
/// enumerated when there are at most kEnumerationLimit of them, otherwise
/// n_mc seeded batches are averaged.
SigmaEstimate estimate_sigmas(const StochasticObjective &problem, std::size_t batch_size,
                              std::size_t n_mc, std::uint64_t seed);

/// Same, with the enumeration path disabled.
SigmaEstimate estimate_sigmas_monte_carlo(const StochasticObjective &problem,
                                          std::size_t batch_size, std::size_t n_mc,
                                          std::uint64_t seed);

}  // namespace ngn

#endif  // NGN_THEORY_HPP

// Copyright 2026 The lsmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LSMIX_PMLE_HPP_
#define LSMIX_PMLE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lsmix/family.hpp"
#include "lsmix/fit_report.hpp"
#include "lsmix/mixture.hpp"
#include "lsmix/sample.hpp"

namespace lsmix {

enum class ScaleStatistic {
  kVariance,               // s_x^2
  kInterquartileRangeSq,   // IQR^2, for families without finite variance
};

// Penalty a_N sum_k { scale_stat / sigma_k^2 + log sigma_k^2 }.
struct PenaltyConfig {
  double a_n = 0.0;
  double scale_stat = 0.0;

  // a_N = N^{-1/2} unless overridden, scale statistic from the sample.
  static PenaltyConfig for_sample(const SortedSample& sample, std::optional<double> a_n = std::nullopt,
                                  ScaleStatistic stat = ScaleStatistic::kVariance);
  double term(double sigma) const;
};

// Row-major N x K posterior membership probabilities.
struct ResponsibilityMatrix {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> w;

  double operator()(std::size_t row, std::size_t comp) const { return w[row * k + comp]; }
};

double log_likelihood(const MixingDistribution& g, const SortedSample& sample, Family family);
// l_N(G) minus the penalty. Throws DomainError if some scale is zero.
double penalized_loglik(const MixingDistribution& g, const SortedSample& sample, Family family,
                        const PenaltyConfig& penalty);

// E-step, computed in log space.
ResponsibilityMatrix responsibilities(const MixingDistribution& g, const SortedSample& sample,
                                      Family family);

// One EM iteration for the penalized likelihood. Weights become column
// means of the responsibilities. Normal components use the closed form
//   mu = sum r x / sum r,  sigma^2 = (sum r (x - mu)^2 + 2 a_N s) / (sum r + 2 a_N);
// other families maximize sum_n r_nk log f(x_n|mu, sigma) - penalty(sigma)
// over (mu, log sigma) by BFGS warm-started at the current component.
// Throws NumericError if a component receives zero total responsibility.
MixingDistribution em_step(const MixingDistribution& g, const SortedSample& sample, Family family,
                           const PenaltyConfig& penalty);

struct PmleConfig {
  std::size_t n_starts = 10;
  std::size_t max_iter = 2000;
  double tol = 1e-8;  // stop when an iteration improves pl_N by less than this
  std::uint64_t seed = 0;
  std::optional<double> a_n;  // default N^{-1/2}
  ScaleStatistic scale_stat = ScaleStatistic::kVariance;
};

// Penalized MLE by multi-start EM; keeps the start with the largest pl_N.
FitReport fit_pmle(const SortedSample& sample, Family family, std::size_t k, const PmleConfig& config = {});

// Unpenalized MLE for K = 1: closed form for the normal family, BFGS on
// (mu, log sigma) otherwise.
struct HomogeneousMle {
  double mu = 0.0;
  double sigma = 0.0;
};
HomogeneousMle fit_homogeneous_mle(const SortedSample& sample, Family family);

}  // namespace lsmix

#endif  // LSMIX_PMLE_HPP_

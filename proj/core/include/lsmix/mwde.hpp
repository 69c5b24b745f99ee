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

#ifndef LSMIX_MWDE_HPP_
#define LSMIX_MWDE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lsmix/family.hpp"
#include "lsmix/fit_report.hpp"
#include "lsmix/mixture.hpp"
#include "lsmix/sample.hpp"

namespace lsmix {

// Unconstrained coordinates of a mixing distribution:
// sigma_k = exp(tau_k), w_k = softmax(t)_k.
struct UnconstrainedParams {
  std::vector<double> mus;
  std::vector<double> taus;
  std::vector<double> ts;

  // Uses the gauge t_K = 0. Requires positive weights and scales.
  static UnconstrainedParams from_mixing(const MixingDistribution& g);
  // Inverse of flatten(); `flat` holds (mu_1..mu_K, tau_1..tau_K, t_1..t_K).
  static UnconstrainedParams unflatten(std::span<const double> flat);

  std::size_t size() const { return mus.size(); }
  MixingDistribution to_mixing() const;
  std::vector<double> flatten() const;
};

// Mixture quantiles xi_0 = -inf < xi_1 <= ... <= xi_{N-1} < xi_N = +inf at
// levels n/N, and the standardized component CDF and partial-mean values at
// each of them. Increments Delta F_nk and Delta T_nk are differences of
// consecutive rows.
struct QuantileWorkspace {
  std::size_t n = 0;  // sample size N
  std::size_t k = 0;
  std::vector<double> xi;       // N + 1 entries
  std::vector<double> cdf;      // (N + 1) x K, F0((xi_n - mu_k) / sigma_k)
  std::vector<double> partial;  // (N + 1) x K, T((xi_n - mu_k) / sigma_k)

  // n in 1..N.
  double delta_f(std::size_t row, std::size_t comp) const {
    return cdf[row * k + comp] - cdf[(row - 1) * k + comp];
  }
  double delta_t(std::size_t row, std::size_t comp) const {
    return partial[row * k + comp] - partial[(row - 1) * k + comp];
  }
};

// Squared 2-Wasserstein distance W_N(G) between the empirical distribution
// of a fixed sample and F(.|G), evaluated through the closed-form expansion
//
//   W_N(G) = mean(x^2) + sum_k w_k E_k[X^2]
//            - 2 sum_k w_k { mu_k sum_n x_(n) dF_nk + sigma_k sum_n x_(n) dT_nk }.
//
// Internally the sample and locations are shifted by the sample mean, which
// leaves W_N unchanged and avoids cancellation for offset data. No N > K
// guard is applied here; the free functions below enforce it.
class W2Objective {
 public:
  W2Objective(const SortedSample& sample, Family family);

  std::size_t sample_size() const { return centered_.size(); }
  Family family() const { return family_; }

  // Requires all scales > 0.
  QuantileWorkspace workspace(const MixingDistribution& g) const;
  double value(const MixingDistribution& g) const;
  // Objective and gradient in unconstrained coordinates (layout of
  // UnconstrainedParams::flatten). Returns NaN for parameters that do not map
  // to a valid mixture (overflowing scales).
  double value_and_gradient(std::span<const double> flat, std::span<double> grad) const;

 private:
  double evaluate(const MixingDistribution& centered_g, std::span<double> grad) const;
  MixingDistribution center(const MixingDistribution& g) const;

  std::vector<double> centered_;
  double shift_ = 0.0;
  double mean_sq_ = 0.0;  // of the centered sample
  Family family_;
  std::vector<double> std_quantiles_;  // F0^{-1}(n/N), n = 1..N-1
  struct Gap {
    std::size_t row;  // n with x_(n+1) > x_(n)
    double dx;
  };
  std::vector<Gap> gaps_;
};

// Throws DegenerateSampleError if N <= K, UnsupportedError if some scale is
// zero.
QuantileWorkspace build_quantile_workspace(const MixingDistribution& g, const SortedSample& sample,
                                           Family family);
double objective_w2(const MixingDistribution& g, const SortedSample& sample, Family family);
// Gradient with respect to (mu_1..mu_K, tau_1..tau_K, t_1..t_K).
std::vector<double> gradient_w2(const UnconstrainedParams& params, const SortedSample& sample,
                                Family family);

struct MwdeConfig {
  std::size_t n_starts = 10;
  std::size_t max_iter = 500;
  double grad_tol = 1e-6;
  std::uint64_t seed = 0;
};

// Minimum W2 distance estimate of a K-component mixing distribution: BFGS in
// unconstrained coordinates from `n_starts` start points (see
// initial_mixing), keeping the lowest W_N. Throws DegenerateSampleError if
// N <= K or the sample is constant.
FitReport fit_mwde(const SortedSample& sample, Family family, std::size_t k,
                   const MwdeConfig& config = {});

struct HomogeneousEstimate {
  double mu = 0.0;
  double sigma = 0.0;
  bool degenerate = false;  // constant sample; sigma is 0
};

// Closed-form MWDE for K = 1. With z_n = F0^{-1}(n/N) and
// S = sum_n x_(n) {T(z_n) - T(z_{n-1})}, (mu, sigma) solves
//   mu + mu0 sigma = mean(x),  mu0 mu + (mu0^2 + sigma0^2) sigma = S,
// which reduces to the familiar normal, logistic and Gumbel formulas.
// Requires N >= 2.
HomogeneousEstimate fit_homogeneous_mwde(const SortedSample& sample, Family family);

}  // namespace lsmix

#endif  // LSMIX_MWDE_HPP_

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

#ifndef LSMIX_METRICS_HPP_
#define LSMIX_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lsmix/family.hpp"
#include "lsmix/mixture.hpp"

namespace lsmix {

// s(n, m) = integral of f(x|theta_n) f(x|theta~_m) dx.
struct ProductMomentMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> s;

  double operator()(std::size_t r, std::size_t c) const { return s[r * cols + c]; }
};

// Integral of the product of two component densities. Closed form for the
// normal family; adaptive Gauss-Kronrod over the range carrying both
// components' mass otherwise. Throws NumericError if the quadrature error
// estimate stays above tolerance.
double product_integral(Family family, double mu1, double sigma1, double mu2, double sigma2);
ProductMomentMatrix product_moments(const MixingDistribution& g1, const MixingDistribution& g2,
                                    Family family);

// L2 distance between the mixture densities f(.|G1) and f(.|G2):
// { w'S11 w - 2 w'S12 w~ + w~'S22 w~ }^{1/2}. Requires positive scales.
double l2_mixture_distance(const MixingDistribution& g1, const MixingDistribution& g2, Family family);

// Pair counts behind the adjusted Rand index: sum_ij C(n_ij, 2),
// sum_i C(a_i, 2), sum_j C(b_j, 2) and C(N, 2).
struct AriCounts {
  std::int64_t index = 0;
  std::int64_t sum_rows = 0;
  std::int64_t sum_cols = 0;
  std::int64_t total_pairs = 0;
};

AriCounts ari_counts(std::span<const int> labels_a, std::span<const int> labels_b);

// Adjusted Rand index, evaluated from integer pair counts as the reduced
// fraction 2(C(N,2) idx - ab) / (C(N,2)(a + b) - 2ab). Partitions that
// leave the fraction undefined (both trivial) score 1. Throws DomainError on
// length mismatch or N < 2.
double ari(std::span<const int> labels_a, std::span<const int> labels_b);

struct DirectedOverlap {
  double j_given_i = 0.0;  // o_{j|i}
  double i_given_j = 0.0;  // o_{i|j}
  double total = 0.0;      // o_ij
};

// Overlap between components i and j under the maximum-posterior rule.
// o_{j|i} averages 1{w_i f(x|theta_i) < w_j f(x|theta_j)} over the
// mid-quantile grid x_m = F^{-1}((m - 1/2)/M | theta_i), m = 1..M.
DirectedOverlap pairwise_overlap(const MixingDistribution& g, Family family, std::size_t i, std::size_t j,
                                 std::size_t resolution = 200000);

struct OverlapReport {
  std::size_t k = 0;
  std::vector<double> o;  // K x K, symmetric, zero diagonal
  double mean_omega = 0.0;

  double operator()(std::size_t i, std::size_t j) const { return o[i * k + j]; }
};

OverlapReport overlap_report(const MixingDistribution& g, Family family, std::size_t resolution = 200000);

// Location b of the two-component mixture p f(x|0, a) + (1 - p) f(x|b, 1)
// whose overlap o_12 equals `target`. Checks that o_12 is nonincreasing on
// a grid over the search range [1e-3, 50], then bisects on b. Throws
// NumericError if monotonicity fails or the target is outside the range.
double solve_b_for_overlap(double p, double a, Family family, double target,
                           std::size_t resolution = 200000);

}  // namespace lsmix

#endif  // LSMIX_METRICS_HPP_

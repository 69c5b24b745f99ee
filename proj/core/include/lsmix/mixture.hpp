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

#ifndef LSMIX_MIXTURE_HPP_
#define LSMIX_MIXTURE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsmix/family.hpp"

namespace lsmix {

// A finite mixing distribution G = sum_k w_k {(mu_k, sigma_k)}.
//
// Weights are nonnegative and sum to one, scales are nonnegative. A zero
// scale is a point mass at its location; those atoms are supported by the
// CDF and the sampler but not by density or quantile evaluation.
class MixingDistribution {
 public:
  // Throws DomainError on size mismatch, K = 0, negative or non-finite
  // entries, or weights whose sum differs from one by more than 1e-9.
  // Accepted weights are rescaled to sum to one.
  MixingDistribution(std::vector<double> weights, std::vector<double> locations,
                     std::vector<double> scales);

  static MixingDistribution single(double location, double scale);

  std::size_t size() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> locations() const { return locations_; }
  std::span<const double> scales() const { return scales_; }
  double weight(std::size_t k) const { return weights_[k]; }
  double location(std::size_t k) const { return locations_[k]; }
  double scale(std::size_t k) const { return scales_[k]; }

  bool has_point_mass() const;
  bool all_point_masses() const;
  double min_scale() const;

  // Components reordered by ascending location (ties by scale).
  MixingDistribution sorted_by_location() const;

  // Applies x -> c x + m to every component (c > 0).
  MixingDistribution affine(double c, double m) const;

  friend bool operator==(const MixingDistribution&, const MixingDistribution&) = default;

 private:
  std::vector<double> weights_;
  std::vector<double> locations_;
  std::vector<double> scales_;
};

// A family paired with a mixing distribution; this is the unit of JSON
// interchange: {"family": str, "weights": [...], "locations": [...],
// "scales": [...]}.
struct MixtureModel {
  Family family;
  MixingDistribution mixing;

  std::string to_json() const;
  // Throws ConfigError on malformed input. Weights within 1e-6 of summing to
  // one are renormalized.
  static MixtureModel from_json(std::string_view text);
};

double mixture_cdf(const MixingDistribution& g, Family family, double x);
// Requires all scales > 0 (throws UnsupportedError otherwise).
double mixture_pdf(const MixingDistribution& g, Family family, double x);
double component_log_density(const MixingDistribution& g, Family family, std::size_t k,
                             double x);

// The t-quantile of F(.|G).
//
// Continuous G: the root of F(x|G) = t inside the bracket
// [min_k F^{-1}(t|theta_k), max_k F^{-1}(t|theta_k)] located by safeguarded
// bisection. Pure point-mass G: the smallest atom location whose cumulative
// weight reaches t. Throws DomainError for t outside (0, 1) and
// UnsupportedError if G mixes point masses with continuous atoms.
double mixture_quantile(const MixingDistribution& g, Family family, double t);

// Bracketed root of F(x|G) = t. Requires F(lo) <= t <= F(hi) and a
// continuous G; guess is clamped into the bracket. Iterates Newton steps
// that fall inside the current bracket and bisects otherwise, until the
// bracket or step reaches double resolution (at most 200 iterations).
double solve_mixture_quantile(const MixingDistribution& g, Family family, double t, double lo,
                              double hi, double guess);

// argmax_k w_k f(x|theta_k), ties to the smallest index. Requires scales > 0.
std::size_t map_classify(const MixingDistribution& g, Family family, double x);
std::vector<int> map_classify_all(const MixingDistribution& g, Family family,
                                  std::span<const double> xs);

// Draws n i.i.d. observations: component k with probability w_k, then
// mu_k + sigma_k Y with Y ~ f0 by inverse-CDF. Deterministic given seed.
std::vector<double> sample(const MixingDistribution& g, Family family, std::size_t n,
                           std::uint64_t seed);

}  // namespace lsmix

#endif  // LSMIX_MIXTURE_HPP_

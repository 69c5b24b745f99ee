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

#ifndef LSMIX_SAMPLE_HPP_
#define LSMIX_SAMPLE_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace lsmix {

// Order statistics x_(1) <= ... <= x_(N) with cached moments.
class SortedSample {
 public:
  // Sorts a copy of `values`. Throws DomainError if empty or non-finite.
  explicit SortedSample(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double mean() const { return mean_; }
  // N^{-1} sum x_n^2.
  double mean_sq() const { return mean_sq_; }
  // Unbiased sample variance (denominator N - 1); zero when N = 1.
  double var_s() const { return var_s_; }
  double sd() const;
  // Sample quantile by linear interpolation between order statistics.
  double quantile(double p) const;
  double interquartile_range() const { return quantile(0.75) - quantile(0.25); }

  SortedSample affine(double c, double m) const;

 private:
  std::vector<double> values_;
  double mean_ = 0.0;
  double mean_sq_ = 0.0;
  double var_s_ = 0.0;
};

}  // namespace lsmix

#endif  // LSMIX_SAMPLE_HPP_

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

#include "lsmix/sample.hpp"

#include <algorithm>
#include <cmath>

#include "lsmix/errors.hpp"

namespace lsmix {

SortedSample::SortedSample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("sample must contain at least one value");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("sample values must be finite");
  }
  std::sort(values_.begin(), values_.end());
  const double n = static_cast<double>(values_.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : values_) {
    sum += v;
    sum_sq += v * v;
  }
  mean_ = sum / n;
  mean_sq_ = sum_sq / n;
  // Two-pass variance; the one-pass identity loses digits for offset data.
  double ss = 0.0;
  for (double v : values_) ss += (v - mean_) * (v - mean_);
  var_s_ = values_.size() > 1 ? ss / (n - 1.0) : 0.0;
  mean_sq_ = std::max(mean_sq_, mean_ * mean_);
  if (values_.front() == values_.back()) {
    mean_ = values_.front();
    mean_sq_ = mean_ * mean_;
    var_s_ = 0.0;
  }
}

double SortedSample::sd() const { return std::sqrt(var_s_); }

double SortedSample::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sample quantile level must lie in [0, 1]");
  const double pos = p * static_cast<double>(values_.size() - 1);
  const std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= values_.size()) return values_.back();
  const double frac = pos - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

SortedSample SortedSample::affine(double c, double m) const {
  std::vector<double> out(values_);
  for (double& v : out) v = c * v + m;
  return SortedSample(std::move(out));
}

}  // namespace lsmix

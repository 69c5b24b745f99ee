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

#ifndef LSMIX_FAMILY_HPP_
#define LSMIX_FAMILY_HPP_

#include <string_view>

namespace lsmix {

enum class FamilyKind { kNormal, kLogistic, kGumbel };

// A standard location-scale density f0 together with the quantities the
// estimators need from it. Members take a standardized argument
// z = (x - mu) / sigma; infinite arguments are accepted wherever the limit
// is finite.
class Family {
 public:
  constexpr explicit Family(FamilyKind kind = FamilyKind::kNormal) : kind_(kind) {}

  static constexpr Family normal() { return Family(FamilyKind::kNormal); }
  static constexpr Family logistic() { return Family(FamilyKind::kLogistic); }
  // Type I extreme-value (maximum) distribution, F0(z) = exp(-exp(-z)).
  static constexpr Family gumbel() { return Family(FamilyKind::kGumbel); }

  // Accepts "normal", "logistic", "gumbel" (case-sensitive). Throws
  // ConfigError otherwise.
  static Family from_name(std::string_view name);

  constexpr FamilyKind kind() const { return kind_; }
  std::string_view name() const;

  // E[Y] and Var[Y] for Y ~ f0.
  double mean() const;
  double variance() const;

  double pdf(double z) const;
  double log_pdf(double z) const;
  // d/dz log f0(z).
  double dlog_pdf(double z) const;
  double cdf(double z) const;
  // Inverse CDF on (0, 1); returns -inf / +inf at 0 / 1.
  double quantile(double p) const;

  // Partial mean T(z) = integral of t f0(t) over (-inf, z].
  // T(-inf) = 0, T(+inf) = mean().
  double partial_mean(double z) const;

  friend constexpr bool operator==(Family a, Family b) { return a.kind_ == b.kind_; }

 private:
  FamilyKind kind_;
};

// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.57721566490153286060651209;

}  // namespace lsmix

#endif  // LSMIX_FAMILY_HPP_

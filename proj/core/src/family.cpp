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

#include "lsmix/family.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "lsmix/errors.hpp"

namespace lsmix {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;

// Stable log(1 + exp(x)).
double Softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double LogisticPartialMean(double z) {
  if (std::isinf(z)) return 0.0;
  // z F0(z) - log(1 + e^z), rearranged per sign to avoid inf - inf.
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return -z * e / (1.0 + e) - std::log1p(e);
  }
  const double e = std::exp(z);
  return z * e / (1.0 + e) - std::log1p(e);
}

// T(z) = z exp(-e^{-z}) - E1(e^{-z}).
double GumbelPartialMean(double z) {
  if (z == kInf) return kEulerGamma;
  if (z == -kInf) return 0.0;
  const double a = std::exp(-z);
  if (std::isinf(a)) return 0.0;
  if (a < 1.0) {
    // E1(a) = -gamma - log(a) - sum_{k>=1} (-a)^k / (k k!), so the
    // z - z cancellation is done analytically.
    double series = 0.0;
    double term = 1.0;  // (-a)^k / k!
    for (int k = 1; k <= 60; ++k) {
      term *= -a / k;
      const double contrib = term / k;
      series += contrib;
      if (std::fabs(contrib) < 1e-18 * std::fabs(series)) break;
    }
    return kEulerGamma + z * std::expm1(-a) + series;
  }
  return z * std::exp(-a) - boost::math::expint(1, a);
}

}  // namespace

Family Family::from_name(std::string_view name) {
  if (name == "normal") return normal();
  if (name == "logistic") return logistic();
  if (name == "gumbel") return gumbel();
  throw ConfigError("unknown family '" + std::string(name) +
                    "' (expected normal, logistic or gumbel)");
}

std::string_view Family::name() const {
  switch (kind_) {
    case FamilyKind::kNormal: return "normal";
    case FamilyKind::kLogistic: return "logistic";
    case FamilyKind::kGumbel: return "gumbel";
  }
  return "normal";
}

double Family::mean() const {
  return kind_ == FamilyKind::kGumbel ? kEulerGamma : 0.0;
}

double Family::variance() const {
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  switch (kind_) {
    case FamilyKind::kNormal: return 1.0;
    case FamilyKind::kLogistic: return pi2 / 3.0;
    case FamilyKind::kGumbel: return pi2 / 6.0;
  }
  return 1.0;
}

double Family::log_pdf(double z) const {
  if (std::isinf(z)) return -kInf;
  switch (kind_) {
    case FamilyKind::kNormal: return -0.5 * z * z - kLogSqrt2Pi;
    case FamilyKind::kLogistic: {
      const double az = std::fabs(z);
      return -az - 2.0 * std::log1p(std::exp(-az));
    }
    case FamilyKind::kGumbel: return -z - std::exp(-z);
  }
  return -kInf;
}

double Family::pdf(double z) const { return std::exp(log_pdf(z)); }

double Family::dlog_pdf(double z) const {
  switch (kind_) {
    case FamilyKind::kNormal: return -z;
    case FamilyKind::kLogistic: return -std::tanh(0.5 * z);
    case FamilyKind::kGumbel: return std::expm1(-z);
  }
  return 0.0;
}

double Family::cdf(double z) const {
  switch (kind_) {
    case FamilyKind::kNormal: return 0.5 * std::erfc(-z / std::numbers::sqrt2);
    case FamilyKind::kLogistic:
      if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
      return std::exp(z - Softplus(z));
    case FamilyKind::kGumbel: return std::exp(-std::exp(-z));
  }
  return 0.0;
}

double Family::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("quantile level must lie in [0, 1]");
  }
  if (p == 0.0) return -kInf;
  if (p == 1.0) return kInf;
  switch (kind_) {
    case FamilyKind::kNormal:
      return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
    case FamilyKind::kLogistic: return std::log(p) - std::log1p(-p);
    case FamilyKind::kGumbel: return -std::log(-std::log(p));
  }
  return 0.0;
}

double Family::partial_mean(double z) const {
  switch (kind_) {
    case FamilyKind::kNormal: return -pdf(z);
    case FamilyKind::kLogistic: return LogisticPartialMean(z);
    case FamilyKind::kGumbel: return GumbelPartialMean(z);
  }
  return 0.0;
}

}  // namespace lsmix

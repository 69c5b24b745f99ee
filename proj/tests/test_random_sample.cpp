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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "lsmix/errors.hpp"
#include "lsmix/random.hpp"
#include "lsmix/sample.hpp"

namespace lsmix {
namespace {

TEST(DeriveSeed, PureAndPathSensitive) {
  EXPECT_EQ(derive_seed(7, {100, 3}), derive_seed(7, {100, 3}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t n : {100u, 500u, 1000u}) {
    for (std::uint64_t r = 0; r < 200; ++r) {
      seen.insert(derive_seed(7, {n, r}));
      seen.insert(derive_seed(7, {n, r, 1}));
    }
  }
  EXPECT_EQ(seen.size(), 3u * 200u * 2u);
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
  EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
}

TEST(Rng, UniformOpenInterval) {
  Rng rng(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 1e5, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / 1e5));
}

TEST(Rng, CategoricalFrequenciesAndZeroWeights) {
  Rng rng(5);
  const std::vector<double> w{0.2, 0.0, 0.8, 0.0};
  std::array<int, 4> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[rng.categorical(w)];
  EXPECT_EQ(counts[1], 0);
  EXPECT_EQ(counts[3], 0);
  EXPECT_NEAR(counts[0] / static_cast<double>(n), 0.2, 4.0 * std::sqrt(0.16 / n));
}

TEST(Rng, StudentTDistributionFunction) {
  // P(T_4 <= 1) and P(T_2 <= 1) from the closed-form t CDFs.
  const double u = 1.0 + 1.0 / 4.0;
  const double p4 = 0.5 + 0.375 / std::sqrt(u) * (1.0 - 1.0 / (12.0 * u));
  const double p2 = 0.5 + 0.5 / std::sqrt(3.0);
  for (auto [df, p] : {std::pair{4, p4}, std::pair{2, p2}}) {
    Rng rng(11);
    const int n = 200000;
    int below = 0;
    for (int i = 0; i < n; ++i) below += rng.student_t(df) <= 1.0;
    EXPECT_NEAR(below / static_cast<double>(n), p, 4.0 * std::sqrt(p * (1 - p) / n)) << "df=" << df;
  }
}

TEST(SortedSample, Moments) {
  const SortedSample s({3.0, -1.0, 2.0, 0.0});
  EXPECT_EQ(s[0], -1.0);
  EXPECT_EQ(s[3], 3.0);
  EXPECT_DOUBLE_EQ(s.mean(), 1.0);
  EXPECT_DOUBLE_EQ(s.mean_sq(), 14.0 / 4.0);
  EXPECT_DOUBLE_EQ(s.var_s(), 10.0 / 3.0);
  EXPECT_GE(s.mean_sq(), s.mean() * s.mean());
  EXPECT_DOUBLE_EQ(s.quantile(0.0), -1.0);
  EXPECT_DOUBLE_EQ(s.quantile(1.0), 3.0);
  EXPECT_DOUBLE_EQ(s.quantile(0.5), 1.0);
  EXPECT_DOUBLE_EQ(s.interquartile_range(), s.quantile(0.75) - s.quantile(0.25));
  EXPECT_EQ(SortedSample({5.0}).var_s(), 0.0);
}

TEST(SortedSample, LargeOffsetVariance) {
  const SortedSample s({1e9 + 1.0, 1e9 - 1.0});
  EXPECT_DOUBLE_EQ(s.var_s(), 2.0);
}

TEST(SortedSample, Affine) {
  const SortedSample s({1.0, 2.0, 4.0});
  const SortedSample t = s.affine(2.0, -1.0);
  EXPECT_DOUBLE_EQ(t.mean(), 2.0 * s.mean() - 1.0);
  EXPECT_DOUBLE_EQ(t.var_s(), 4.0 * s.var_s());
}

TEST(SortedSample, Errors) {
  EXPECT_THROW(SortedSample({}), DomainError);
  EXPECT_THROW(SortedSample({1.0, std::nan("")}), DomainError);
  EXPECT_THROW(SortedSample({1.0, INFINITY}), DomainError);
}

}  // namespace
}  // namespace lsmix

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
#include <limits>

#include "lsmix/bfgs.hpp"

namespace lsmix {
namespace {

double rosenbrock(std::span<const double> x, std::span<double> g) {
  const double a = 1.0 - x[0], b = x[1] - x[0] * x[0];
  g[0] = -2.0 * a - 400.0 * x[0] * b;
  g[1] = 200.0 * b;
  return a * a + 100.0 * b * b;
}

TEST(Bfgs, Rosenbrock) {
  const BfgsResult r = minimize_bfgs(rosenbrock, {-1.2, 1.0});
  EXPECT_TRUE(r.converged) << r.stop_reason;
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], 1.0, 1e-5);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i], r.trace[i - 1]);
  EXPECT_EQ(r.trace.size(), r.iterations + 1);
}

TEST(Bfgs, IllConditionedQuadratic) {
  const auto fn = [](std::span<const double> x, std::span<double> g) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double c = std::pow(10.0, static_cast<double>(i));
      g[i] = c * (x[i] - 1.0);
      v += 0.5 * c * (x[i] - 1.0) * (x[i] - 1.0);
    }
    return v;
  };
  BfgsOptions opt;
  opt.grad_tol = 1e-10;
  const BfgsResult r = minimize_bfgs(fn, std::vector<double>(5, 0.0), opt);
  EXPECT_TRUE(r.converged);
  for (double x : r.x) EXPECT_NEAR(x, 1.0, 1e-9);
}

TEST(Bfgs, BacktracksFromInfeasibleRegion) {
  // Minimum of x - 2 log x at x = 2; x <= 0 is infeasible.
  const auto fn = [](std::span<const double> x, std::span<double> g) {
    if (!(x[0] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    g[0] = 1.0 - 2.0 / x[0];
    return x[0] - 2.0 * std::log(x[0]);
  };
  const BfgsResult r = minimize_bfgs(fn, {0.05});
  EXPECT_TRUE(r.converged) << r.stop_reason;
  EXPECT_NEAR(r.x[0], 2.0, 1e-5);
}

TEST(Bfgs, NonFiniteStart) {
  const auto fn = [](std::span<const double>, std::span<double>) { return std::numeric_limits<double>::infinity(); };
  const BfgsResult r = minimize_bfgs(fn, {0.0});
  EXPECT_FALSE(r.converged);
  EXPECT_FALSE(r.stop_reason.empty());
}

TEST(Bfgs, IterationLimit) {
  BfgsOptions opt;
  opt.max_iter = 3;
  const BfgsResult r = minimize_bfgs(rosenbrock, {-1.2, 1.0}, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3u);
}

}  // namespace
}  // namespace lsmix

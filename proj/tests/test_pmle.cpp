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
#include <numbers>
#include <random>

#include "lsmix/errors.hpp"
#include "lsmix/mixture.hpp"
#include "lsmix/pmle.hpp"
#include "lsmix/sample.hpp"
#include "support/oracles.hpp"

namespace lsmix {
namespace {

double log_phi(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

TEST(PenalizedLoglik, HandExample) {
  const SortedSample s({-1.0, 1.0});
  const PenaltyConfig pen{1.0 / std::sqrt(2.0), 2.0};
  EXPECT_NEAR(penalized_loglik(MixingDistribution::single(0.0, 1.0), s, Family::normal(), pen), -4.2520907, 1e-7);
  const PenaltyConfig auto_pen = PenaltyConfig::for_sample(s);
  EXPECT_DOUBLE_EQ(auto_pen.a_n, 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(auto_pen.scale_stat, 2.0);
}

TEST(PenalizedLoglik, EqualsLoglikMinusIndependentPenalty) {
  const MixingDistribution g({0.3, 0.7}, {-1.0, 2.0}, {0.6, 1.7});
  const SortedSample s(sample(g, Family::normal(), 60, 2));
  const PenaltyConfig pen = PenaltyConfig::for_sample(s);
  double ll = 0.0;
  for (double x : s.values()) {
    ll += std::log(0.3 * std::exp(log_phi(x, -1.0, 0.6)) + 0.7 * std::exp(log_phi(x, 2.0, 1.7)));
  }
  const double penalty =
      pen.a_n * (s.var_s() / 0.36 + std::log(0.36) + s.var_s() / (1.7 * 1.7) + std::log(1.7 * 1.7));
  EXPECT_NEAR(log_likelihood(g, s, Family::normal()), ll, 1e-12 * std::fabs(ll));
  EXPECT_NEAR(penalized_loglik(g, s, Family::normal(), pen), ll - penalty, 1e-12 * std::fabs(ll));
}

TEST(PenaltyConfig, TermIsMinimalAtRootScaleStatistic) {
  const PenaltyConfig pen{0.3, 2.5};
  const double best = pen.term(std::sqrt(2.5));
  EXPECT_NEAR(best, 0.3 * (1.0 + std::log(2.5)), 1e-14);
  for (double s : {0.5, 1.0, 1.5, 1.6, 1.59, 2.0, 4.0}) EXPECT_GE(pen.term(s), best);
  EXPECT_THROW(penalized_loglik(MixingDistribution({0.5, 0.5}, {0.0, 1.0}, {1.0, 0.0}), SortedSample({0.0, 1.0, 2.0}),
                                Family::normal(), pen),
               DomainError);
}

TEST(PenaltyConfig, ScaleStatistics) {
  const SortedSample s({1.0, 2.0, 3.0, 4.0, 10.0});
  const PenaltyConfig v = PenaltyConfig::for_sample(s);
  EXPECT_DOUBLE_EQ(v.scale_stat, s.var_s());
  EXPECT_DOUBLE_EQ(v.a_n, 1.0 / std::sqrt(5.0));
  const PenaltyConfig q = PenaltyConfig::for_sample(s, 0.25, ScaleStatistic::kInterquartileRangeSq);
  EXPECT_DOUBLE_EQ(q.scale_stat, s.interquartile_range() * s.interquartile_range());
  EXPECT_EQ(q.a_n, 0.25);
  EXPECT_THROW(PenaltyConfig::for_sample(s, -1.0), DomainError);
  EXPECT_THROW(PenaltyConfig::for_sample(SortedSample({1.0, 1.0})), DegenerateSampleError);
}

TEST(Responsibilities, RowsSumToOne) {
  const MixingDistribution g({0.2, 0.5, 0.3}, {-2.0, 0.0, 3.0}, {0.5, 1.0, 0.1});
  const SortedSample s(sample(g, Family::gumbel(), 200, 8));
  const ResponsibilityMatrix r = responsibilities(g, s, Family::gumbel());
  for (std::size_t n = 0; n < r.n; ++n) {
    double total = 0.0;
    for (std::size_t k = 0; k < r.k; ++k) {
      EXPECT_GE(r(n, k), 0.0);
      EXPECT_LE(r(n, k), 1.0);
      total += r(n, k);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(EmStep, SingleNormalHandExample) {
  const SortedSample s({-1.0, 1.0});
  const PenaltyConfig pen{1.0 / std::sqrt(2.0), 2.0};
  const MixingDistribution next = em_step(MixingDistribution::single(0.4, 3.0), s, Family::normal(), pen);
  EXPECT_NEAR(next.location(0), 0.0, 1e-15);
  EXPECT_NEAR(next.scale(0) * next.scale(0), 1.4142136, 1e-7);

  // 2-D maximization of the penalized Q with unit responsibilities.
  const auto neg_q = [&](double mu, double sigma) {
    return -(log_phi(-1.0, mu, sigma) + log_phi(1.0, mu, sigma)) + pen.a_n * (2.0 / (sigma * sigma) + std::log(sigma * sigma));
  };
  double mu = 0.0;
  const double sigma = oracle::golden_min(
      [&](double sg) {
        mu = oracle::golden_min([&](double m) { return neg_q(m, sg); }, -2.0, 2.0, 1e-14);
        return neg_q(mu, sg);
      },
      0.2, 5.0, 1e-13);
  EXPECT_NEAR(next.scale(0), sigma, 1e-7);
  EXPECT_NEAR(next.location(0), mu, 1e-7);
}

TEST(EmStep, NormalClosedFormMaximizesPenalizedQ) {
  const MixingDistribution g({0.45, 0.55}, {-1.0, 1.5}, {0.8, 1.1});
  const SortedSample s(sample(g, Family::normal(), 80, 21));
  const PenaltyConfig pen = PenaltyConfig::for_sample(s);
  const ResponsibilityMatrix r = responsibilities(g, s, Family::normal());
  const MixingDistribution next = em_step(g, s, Family::normal(), pen);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto neg_q = [&](double mu, double sigma) {
      double q = 0.0;
      for (std::size_t n = 0; n < s.size(); ++n) q += r(n, k) * log_phi(s[n], mu, sigma);
      return -q + pen.a_n * (pen.scale_stat / (sigma * sigma) + std::log(sigma * sigma));
    };
    double mu = 0.0;
    const double sigma = oracle::golden_min(
        [&](double sg) {
          mu = oracle::golden_min([&](double m) { return neg_q(m, sg); }, -5.0, 5.0, 1e-15);
          return neg_q(mu, sg);
        },
        0.05, 5.0, 1e-14);
    // Golden-section resolution is about sqrt(machine epsilon).
    EXPECT_NEAR(next.location(k), mu, 1e-7);
    EXPECT_NEAR(next.scale(k), sigma, 1e-7);
    EXPECT_LE(neg_q(next.location(k), next.scale(k)), neg_q(mu, sigma) + 1e-12 * std::fabs(neg_q(mu, sigma)));
  }
  EXPECT_NEAR(next.weight(0) + next.weight(1), 1.0, 1e-12);
}

TEST(EmStep, FixedPointAfterConvergence) {
  const MixingDistribution truth({0.4, 0.6}, {0.0, 5.0}, {1.0, 1.0});
  const SortedSample s(sample(truth, Family::normal(), 400, 3));
  const PenaltyConfig pen = PenaltyConfig::for_sample(s);
  MixingDistribution g({0.5, 0.5}, {1.0, 4.0}, {1.5, 1.5});
  for (int i = 0; i < 5000; ++i) g = em_step(g, s, Family::normal(), pen);
  const MixingDistribution again = em_step(g, s, Family::normal(), pen);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_NEAR(again.weight(k), g.weight(k), 1e-8);
    EXPECT_NEAR(again.location(k), g.location(k), 1e-8);
    EXPECT_NEAR(again.scale(k), g.scale(k), 1e-8);
  }
}

TEST(EmStep, ExchangeSymmetry) {
  std::vector<double> xs = sample(MixingDistribution::single(0.0, 2.0), Family::logistic(), 50, 9);
  const std::size_t half = xs.size();
  for (std::size_t i = 0; i < half; ++i) xs.push_back(-xs[i]);
  const SortedSample s(xs);
  const PenaltyConfig pen = PenaltyConfig::for_sample(s);
  for (Family f : {Family::normal(), Family::logistic()}) {
    const MixingDistribution next = em_step(MixingDistribution({0.5, 0.5}, {-1.0, 1.0}, {1.3, 1.3}), s, f, pen);
    EXPECT_NEAR(next.weight(0), next.weight(1), 1e-12);
    EXPECT_NEAR(next.location(0), -next.location(1), 1e-8);
    EXPECT_NEAR(next.scale(0), next.scale(1), 1e-8);
  }
}

TEST(EmStep, AscentOnRandomRuns) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> loc(-3.0, 3.0), scl(0.5, 2.0);
  for (int run = 0; run < 12; ++run) {
    const Family f = run % 3 == 0 ? Family::gumbel() : run % 2 ? Family::logistic() : Family::normal();
    const std::size_t k = 2 + run % 2;
    std::vector<double> w(k, 1.0 / k), mu(k), s(k);
    for (std::size_t c = 0; c < k; ++c) {
      mu[c] = loc(rng);
      s[c] = scl(rng);
    }
    const SortedSample data(sample(MixingDistribution(w, mu, s), f, 150, 700 + run));
    const PenaltyConfig pen = PenaltyConfig::for_sample(data);
    std::vector<double> start_mu;
    for (std::size_t c = 0; c < k; ++c) start_mu.push_back(data.quantile((c + 0.5) / static_cast<double>(k)));
    MixingDistribution g(w, start_mu, std::vector<double>(k, data.sd()));
    double prev = penalized_loglik(g, data, f, pen);
    for (int it = 0; it < 60; ++it) {
      g = em_step(g, data, f, pen);
      const double cur = penalized_loglik(g, data, f, pen);
      EXPECT_GE(cur, prev - 1e-9) << f.name() << " run " << run << " it " << it;
      prev = cur;
    }
  }
}

TEST(EmStep, StarvedComponent) {
  const SortedSample s({-0.5, 0.0, 0.5, 1.0});
  const MixingDistribution g({0.5, 0.5}, {0.0, 1e6}, {1.0, 1e-3});
  EXPECT_THROW(em_step(g, s, Family::normal(), PenaltyConfig::for_sample(s)), NumericError);
}

TEST(FitPmle, RecoversSeparatedMixture) {
  const SortedSample s(sample(MixingDistribution({0.5, 0.5}, {0.0, 6.0}, {1.0, 1.0}), Family::normal(), 1000, 2024));
  const FitReport rep = fit_pmle(s, Family::normal(), 2);
  const MixingDistribution g = rep.g_hat.sorted_by_location();
  EXPECT_NEAR(g.location(0), 0.0, 0.2);
  EXPECT_NEAR(g.location(1), 6.0, 0.2);
  EXPECT_EQ(rep.method, "pmle");
  for (std::size_t i = 1; i < rep.trace.size(); ++i) EXPECT_GE(rep.trace[i], rep.trace[i - 1] - 1e-9);
}

TEST(FitPmle, SingleNormalClosedForm) {
  const SortedSample s(sample(MixingDistribution::single(1.0, 2.0), Family::normal(), 90, 5));
  const FitReport rep = fit_pmle(s, Family::normal(), 1);
  const double a = 1.0 / std::sqrt(90.0);
  double ss = 0.0;
  for (double x : s.values()) ss += (x - s.mean()) * (x - s.mean());
  EXPECT_NEAR(rep.g_hat.location(0), s.mean(), 1e-14 * std::max(1.0, std::fabs(s.mean())));
  EXPECT_NEAR(rep.g_hat.scale(0), std::sqrt((ss + 2.0 * a * s.var_s()) / (90.0 + 2.0 * a)), 1e-13);
}

TEST(FitPmle, OutlierKeepsScalesAwayFromZero) {
  std::vector<double> xs = sample(MixingDistribution({0.5, 0.5}, {0.0, 3.0}, {1.0, 1.0}), Family::normal(), 200, 6);
  xs.push_back(8.0);
  const FitReport rep = fit_pmle(SortedSample(xs), Family::normal(), 2);
  EXPECT_GT(rep.g_hat.min_scale(), 1e-3);
  EXPECT_TRUE(std::isfinite(rep.objective));
}

TEST(FitPmle, AffineEquivariance) {
  const std::vector<double> z = sample(MixingDistribution({0.4, 0.6}, {0.0, 4.0}, {1.0, 0.7}), Family::normal(), 300, 8);
  std::vector<double> y(z);
  for (double& v : y) v = 0.5 * v - 2.0;
  const MixingDistribution a = fit_pmle(SortedSample(z), Family::normal(), 2).g_hat.sorted_by_location();
  const MixingDistribution b = fit_pmle(SortedSample(y), Family::normal(), 2).g_hat.sorted_by_location();
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_NEAR(b.weight(k), a.weight(k), 1e-6);
    EXPECT_NEAR(b.location(k), 0.5 * a.location(k) - 2.0, 1e-6);
    EXPECT_NEAR(b.scale(k), 0.5 * a.scale(k), 1e-6);
  }
}

TEST(HomogeneousMle, NormalClosedForm) {
  const SortedSample s({0.0, 1.0, 5.0});
  const HomogeneousMle m = fit_homogeneous_mle(s, Family::normal());
  EXPECT_DOUBLE_EQ(m.mu, 2.0);
  EXPECT_NEAR(m.sigma, std::sqrt((4.0 + 1.0 + 9.0) / 3.0), 1e-15);
}

TEST(HomogeneousMle, LogisticAndGumbelMatchBruteForce) {
  for (Family f : {Family::logistic(), Family::gumbel()}) {
    const SortedSample s(sample(MixingDistribution::single(1.0, 2.0), f, 200, 44));
    const HomogeneousMle m = fit_homogeneous_mle(s, f);
    const auto nll = [&](double mu, double sigma) {
      double v = 0.0;
      for (double x : s.values()) v -= f.log_pdf((x - mu) / sigma) - std::log(sigma);
      return v;
    };
    double mu = 0.0;
    const double sigma = oracle::golden_min(
        [&](double sg) {
          mu = oracle::golden_min([&](double m0) { return nll(m0, sg); }, -5.0, 7.0, 1e-14);
          return nll(mu, sg);
        },
        0.2, 8.0, 1e-13);
    EXPECT_NEAR(m.mu, mu, 1e-6) << f.name();
    EXPECT_NEAR(m.sigma, sigma, 1e-6) << f.name();
  }
}

}  // namespace
}  // namespace lsmix

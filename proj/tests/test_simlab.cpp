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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lsmix/errors.hpp"
#include "lsmix/simlab.hpp"

namespace lsmix {
namespace {

TEST(Scenario, Table1RowI) {
  const ScenarioSpec s = ScenarioSpec::table1("I");
  ASSERT_EQ(s.true_g.size(), 3u);
  const double w[] = {0.4, 0.5, 0.1}, mu[] = {-2, 0, 1}, sg[] = {0.3, 2, 0.4};
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_DOUBLE_EQ(s.true_g.weight(k), w[k]);
    EXPECT_DOUBLE_EQ(s.true_g.location(k), mu[k]);
    EXPECT_DOUBLE_EQ(s.true_g.scale(k), sg[k]);
  }
  EXPECT_EQ(s.fitted_k(), 3u);
  EXPECT_THROW(ScenarioSpec::table1("IX"), ConfigError);
}

TEST(Scenario, TwoComponentLayout) {
  const ScenarioSpec s = ScenarioSpec::two_component(Family::logistic(), 0.3, 2.0, 4.0);
  EXPECT_DOUBLE_EQ(s.true_g.weight(0), 0.3);
  EXPECT_DOUBLE_EQ(s.true_g.location(1), 4.0);
  EXPECT_DOUBLE_EQ(s.true_g.scale(0), 2.0);
  EXPECT_DOUBLE_EQ(s.true_g.scale(1), 1.0);
  EXPECT_EQ(s.family.kind(), FamilyKind::kLogistic);
  EXPECT_NE(s.id.find("logistic"), std::string::npos);
}

TEST(Generate, Deterministic) {
  const ScenarioSpec s = ScenarioSpec::misspecified_two(0.5, 1.0, 3.0);
  EXPECT_EQ(generate_dataset(s, 500, 42), generate_dataset(s, 500, 42));
  EXPECT_NE(generate_dataset(s, 500, 42), generate_dataset(s, 500, 43));
}

TEST(Generate, DegenerateWeightGivesStandardNormal) {
  const std::vector<double> x = generate_dataset(ScenarioSpec::two_component(Family::normal(), 1.0, 1.0, 100.0), 100000, 7);
  double m = 0.0, v = 0.0;
  for (double e : x) m += e;
  m /= static_cast<double>(x.size());
  for (double e : x) v += (e - m) * (e - m);
  v /= static_cast<double>(x.size() - 1);
  EXPECT_NEAR(m, 0.0, 0.015);
  EXPECT_NEAR(v, 1.0, 0.02);
}

TEST(Generate, OutlierFraction) {
  const LabeledDataset d = generate_labeled(ScenarioSpec::outlier_contaminated(0.5, 1.0, 3.0, 0.01), 100000, 11);
  const auto outliers = std::count(d.source.begin(), d.source.end(), -1);
  EXPECT_NEAR(static_cast<double>(outliers) / 1e5, 0.01, 0.003);
  double m = 0.0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (d.source[i] == -1) m += d.values[i];
  }
  EXPECT_NEAR(m / static_cast<double>(outliers), 8.0, 0.15);
}

TEST(Generate, DensityContaminantSpread) {
  const LabeledDataset d = generate_labeled(ScenarioSpec::density_contaminated(0.5, 1.0, 4.0, 0.2), 50000, 12);
  std::vector<double> c;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (d.source[i] == -1) c.push_back(d.values[i]);
  }
  double m = 0.0, v = 0.0;
  for (double e : c) m += e;
  m /= static_cast<double>(c.size());
  for (double e : c) v += (e - m) * (e - m);
  v /= static_cast<double>(c.size() - 1);
  EXPECT_NEAR(m, 2.0, 0.3);
  EXPECT_NEAR(std::sqrt(v), 7.0, 0.2);
}

TEST(Generate, StudentTComponentsHeavierTails) {
  const LabeledDataset d = generate_labeled(ScenarioSpec::misspecified_one(0.5, 1.0, 20.0), 200000, 13);
  std::size_t beyond = 0, first = 0;
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (d.source[i] != 0) continue;
    ++first;
    if (std::fabs(d.values[i]) > 4.0) ++beyond;
  }
  // P(|t4| > 4) = 0.01613; the normal tail would be 6e-5.
  const double frac = static_cast<double>(beyond) / static_cast<double>(first);
  EXPECT_NEAR(frac, 0.01613, 0.002);
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.scenario = ScenarioSpec::two_component(Family::normal(), 0.5, 1.0, 4.0);
  c.sample_sizes = {100};
  c.replications = 2;
  c.master_seed = 3;
  c.n_starts = 2;
  return c;
}

TEST(Experiment, Cardinality) {
  const std::vector<ResultRow> rows = run_experiment(small_config(), 1);
  ASSERT_EQ(rows.size(), 4u);
  for (const ResultRow& r : rows) {
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_GE(r.l2, 0.0);
    EXPECT_LE(r.ari, 1.0);
    EXPECT_EQ(r.weights.size(), 2u);
    EXPECT_LE(r.locations[0], r.locations[1]);
  }
}

TEST(Experiment, ThreadCountInvariance) {
  ExperimentConfig c = small_config();
  c.sample_sizes = {60, 120};
  c.replications = 3;
  const std::vector<ResultRow> a = run_experiment(c, 1), b = run_experiment(c, 4);
  EXPECT_EQ(results_csv(a), results_csv(b));
  EXPECT_EQ(summary_json(aggregate(a)), summary_json(aggregate(b)));
}

TEST(Experiment, HomogeneousRecordsSquaredErrors) {
  ExperimentConfig c;
  c.scenario = ScenarioSpec::homogeneous(Family::normal(), 0.0, 1.0);
  c.sample_sizes = {50};
  c.replications = 2;
  c.estimators = {Estimator::kMwde, Estimator::kMle};
  const std::vector<ResultRow> rows = run_experiment(c, 1);
  ASSERT_EQ(rows.size(), 4u);
  for (const ResultRow& r : rows) {
    ASSERT_TRUE(r.location_sq_error.has_value());
    EXPECT_NEAR(*r.location_sq_error, r.locations[0] * r.locations[0], 1e-15);
    EXPECT_NEAR(*r.scale_sq_error, (r.scales[0] - 1.0) * (r.scales[0] - 1.0), 1e-15);
  }
}

TEST(Experiment, ValidationErrors) {
  ExperimentConfig c = small_config();
  c.sample_sizes = {};
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.replications = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.estimators = {Estimator::kMle};
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.sample_sizes = {2};
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ExperimentConfig, ParsesJson) {
  const ExperimentConfig c = ExperimentConfig::from_json(R"({
    "scenario": {"kind": "two_component", "family": "normal", "p": 0.5, "a": 1, "overlap": 0.1},
    "sample_sizes": [100, 1000], "replications": 7, "estimators": ["pmle"], "master_seed": 9})");
  EXPECT_NEAR(c.scenario.b, 3.2897, 1e-3);
  EXPECT_EQ(c.sample_sizes, (std::vector<std::size_t>{100, 1000}));
  EXPECT_EQ(c.replications, 7u);
  ASSERT_EQ(c.estimators.size(), 1u);
  EXPECT_EQ(c.estimators[0], Estimator::kPmle);
  EXPECT_EQ(c.master_seed, 9u);
  const ExperimentConfig t = ExperimentConfig::from_json(R"({"scenario": {"kind": "table1", "row": "VI"}, "sample_sizes": [50]})");
  EXPECT_EQ(t.scenario.id, "table1:VI");
}

TEST(ExperimentConfig, RejectsBadJson) {
  EXPECT_THROW(ExperimentConfig::from_json("{"), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(R"({"sample_sizes": [10]})"), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(R"({"scenario": {"kind": "nope"}, "sample_sizes": [10]})"), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(
                   R"({"scenario": {"kind": "two_component", "p": 0.5, "a": 1, "b": 3, "overlap": 0.1}, "sample_sizes": [10]})"),
               ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(
                   R"({"scenario": {"kind": "table1", "row": "I", "colour": 1}, "sample_sizes": [10]})"),
               ConfigError);
  EXPECT_THROW(ExperimentConfig::from_json(R"({"scenario": {"kind": "table1", "row": "I"}, "sample_sizes": [10], "estimators": ["em"]})"),
               ConfigError);
}

ResultRow row(const std::string& id, Estimator e, std::size_t n, double l2, double ari) {
  ResultRow r;
  r.scenario_id = id;
  r.estimator = e;
  r.n = n;
  r.l2 = l2;
  r.ari = ari;
  return r;
}

TEST(Aggregate, SingleRow) {
  const std::vector<ResultRow> rows{row("s", Estimator::kMwde, 10, 0.25, 0.5)};
  const std::vector<SummaryCell> cells = aggregate(rows);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].ml2, 0.25);
  EXPECT_EQ(cells[0].mari, 0.5);
  EXPECT_FALSE(cells[0].se_l2.has_value());
  EXPECT_FALSE(cells[0].se_ari.has_value());
}

TEST(Aggregate, MeanAndStandardError) {
  const std::vector<ResultRow> rows{row("s", Estimator::kPmle, 10, 0.1, 1.0), row("s", Estimator::kPmle, 10, 0.3, 0.0)};
  const std::vector<SummaryCell> cells = aggregate(rows);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_NEAR(cells[0].ml2, 0.2, 1e-15);
  EXPECT_NEAR(*cells[0].se_l2, 0.1, 1e-15);
  EXPECT_NEAR(*cells[0].se_ari, 0.5, 1e-15);
}

TEST(Aggregate, FailuresAndPermutationInvariance) {
  std::vector<ResultRow> rows{row("a", Estimator::kMwde, 10, 0.1, 0.9), row("b", Estimator::kMwde, 10, 0.2, 0.8),
                              row("a", Estimator::kPmle, 10, 0.3, 0.7), row("a", Estimator::kMwde, 20, 0.4, 0.6),
                              row("a", Estimator::kMwde, 10, 0.5, 0.5)};
  rows.push_back(row("a", Estimator::kMwde, 10, 9.0, 9.0));
  rows.back().error = "boom";
  const std::string base = summary_json(aggregate(rows));
  std::reverse(rows.begin(), rows.end());
  EXPECT_EQ(summary_json(aggregate(rows)), base);
  std::rotate(rows.begin(), rows.begin() + 2, rows.end());
  EXPECT_EQ(summary_json(aggregate(rows)), base);
  const std::vector<SummaryCell> cells = aggregate(rows);
  const auto it = std::find_if(cells.begin(), cells.end(), [](const SummaryCell& c) {
    return c.scenario_id == "a" && c.estimator == Estimator::kMwde && c.n == 10;
  });
  ASSERT_NE(it, cells.end());
  EXPECT_EQ(it->count, 2u);
  EXPECT_EQ(it->failures, 1u);
  EXPECT_NEAR(it->ml2, 0.3, 1e-15);
}

TEST(Aggregate, EmptyInput) { EXPECT_THROW(aggregate(std::vector<ResultRow>{}), DomainError); }

TEST(Reports, CsvHeaders) {
  const std::vector<ResultRow> rows{row("s", Estimator::kMwde, 10, 0.25, 0.5)};
  const std::string csv = results_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "scenario_id,estimator,n,replication,l2,ari,converged,min_scale,location_sq_error,scale_sq_error,weights,"
            "locations,scales,error");
  const std::string t = timings_csv(rows);
  EXPECT_EQ(t.substr(0, t.find('\n')), "scenario_id,estimator,n,replication,wall_ms");
}

}  // namespace
}  // namespace lsmix

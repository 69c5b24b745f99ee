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

#ifndef LSMIX_SIMLAB_HPP_
#define LSMIX_SIMLAB_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsmix/family.hpp"
#include "lsmix/mixture.hpp"

namespace lsmix {

enum class ScenarioKind {
  kTwoComponent,
  kThreeComponentTable1,
  kOutlierContaminated,
  kDensityContaminated,
  kMisspecifiedI,
  kMisspecifiedII,
  kHomogeneous,
};

std::string_view scenario_kind_name(ScenarioKind kind);

// A data-generating process and the mixture it is scored against.
//
// Robustness kinds (outliers, contamination, Student-t components) are
// scored against the clean two-component normal mixture
// p N(0, a) + (1 - p) N(b, 1); every second parameter is a standard
// deviation.
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kTwoComponent;
  Family family;                // fitted family; also the data family where parametric
  MixingDistribution true_g = MixingDistribution::single(0.0, 1.0);
  double p = 1.0, a = 1.0, b = 0.0;
  double alpha = 0.0;           // contamination rate
  double contaminant_location = 0.0;
  double contaminant_scale = 1.0;
  int df_first = 0;             // Student-t degrees of freedom
  int df_second = 0;
  std::string id;

  std::size_t fitted_k() const { return true_g.size(); }

  static ScenarioSpec two_component(Family family, double p, double a, double b);
  // Rows "I" through "VIII" of the three-component normal table.
  static ScenarioSpec table1(std::string_view row);
  // (1 - alpha) clean + alpha N(8, 1).
  static ScenarioSpec outlier_contaminated(double p, double a, double b, double alpha = 0.01);
  // (1 - alpha) clean + alpha N(b/2, 7).
  static ScenarioSpec density_contaminated(double p, double a, double b, double alpha = 0.01);
  // Both components Student-t(4).
  static ScenarioSpec misspecified_one(double p, double a, double b);
  // Student-t(2) and Student-t(4) components.
  static ScenarioSpec misspecified_two(double p, double a, double b);
  static ScenarioSpec homogeneous(Family family, double mu = 0.0, double sigma = 1.0);
};

struct LabeledDataset {
  std::vector<double> values;
  // Generating component (0-based), or -1 for a contaminant draw. Never
  // passed to estimators.
  std::vector<int> source;
};

LabeledDataset generate_labeled(const ScenarioSpec& spec, std::size_t n, std::uint64_t seed);
std::vector<double> generate_dataset(const ScenarioSpec& spec, std::size_t n, std::uint64_t seed);

enum class Estimator { kMwde, kPmle, kMle };
std::string_view estimator_name(Estimator e);
Estimator estimator_from_name(std::string_view name);

struct ExperimentConfig {
  ScenarioSpec scenario;
  std::vector<std::size_t> sample_sizes;
  std::size_t replications = 100;
  std::vector<Estimator> estimators{Estimator::kMwde, Estimator::kPmle};
  std::uint64_t master_seed = 0;
  std::size_t n_starts = 5;
  std::size_t max_iter = 500;

  // Throws ConfigError listing the first violation. Schema:
  // {"scenario": {"kind": ..., ...}, "sample_sizes": [..],
  //  "replications": R, "estimators": ["mwde", "pmle", "mle"],
  //  "master_seed": S, "starts": n, "max_iter": n}
  static ExperimentConfig from_json(std::string_view text);
  void validate() const;
};

struct ResultRow {
  std::string scenario_id;
  Estimator estimator = Estimator::kMwde;
  std::size_t n = 0;
  std::size_t replication = 0;
  double l2 = 0.0;
  double ari = 0.0;
  double wall_ms = 0.0;
  bool converged = false;
  double min_scale = 0.0;          // smallest fitted scale
  std::string error;               // non-empty if the fit failed
  std::optional<double> location_sq_error;  // K = 1 scenarios
  std::optional<double> scale_sq_error;
  std::vector<double> weights, locations, scales;  // fitted, by ascending location
};

// Replication r at size N draws its data from the substream
// derive_seed(master, {N, r}) and seeds every estimator's start points from
// derive_seed(master, {N, r, 1}), so estimators within a cell see identical
// data and starts. Replications run on up to `threads` workers
// (0 = hardware concurrency); the returned rows are ordered by
// (sample size as configured, replication, estimator as configured)
// independent of scheduling. Fit failures are recorded in the row.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, std::size_t threads = 0);

struct SummaryCell {
  std::string scenario_id;
  Estimator estimator = Estimator::kMwde;
  std::size_t n = 0;
  std::size_t count = 0;     // successful rows
  std::size_t failures = 0;
  double ml2 = 0.0;
  std::optional<double> se_l2;  // absent for a single row
  double mari = 0.0;
  std::optional<double> se_ari;
  std::optional<double> mse_location;
  std::optional<double> mse_scale;
};

// Per (scenario, estimator, N) means and standard errors, sorted by key.
// Throws DomainError on empty input.
std::vector<SummaryCell> aggregate(std::span<const ResultRow> rows);

std::string results_csv(std::span<const ResultRow> rows);
std::string timings_csv(std::span<const ResultRow> rows);
std::string summary_json(std::span<const SummaryCell> cells);

}  // namespace lsmix

#endif  // LSMIX_SIMLAB_HPP_

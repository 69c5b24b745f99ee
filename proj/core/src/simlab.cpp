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

#include "lsmix/simlab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "lsmix/errors.hpp"
#include "lsmix/metrics.hpp"
#include "lsmix/mwde.hpp"
#include "lsmix/pmle.hpp"
#include "lsmix/random.hpp"
#include "lsmix/sample.hpp"
#include "lsmix/text_io.hpp"

namespace lsmix {
namespace {

using json = nlohmann::json;

std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void require_two_component_args(double p, double a) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("mixing proportion p must lie in [0, 1]");
  if (!(a > 0.0)) throw DomainError("scale a must be positive");
}

MixingDistribution clean_two_component(double p, double a, double b) {
  return MixingDistribution({p, 1.0 - p}, {0.0, b}, {a, 1.0});
}

ScenarioSpec robust_base(ScenarioKind kind, double p, double a, double b, const char* tag) {
  require_two_component_args(p, a);
  ScenarioSpec s;
  s.kind = kind;
  s.family = Family::normal();
  s.true_g = clean_two_component(p, a, b);
  s.p = p;
  s.a = a;
  s.b = b;
  s.id = std::string(tag) + ":p=" + fmt_param(p) + ":a=" + fmt_param(a) + ":b=" + fmt_param(b);
  return s;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

std::string opt_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

// Keys allowed in a JSON object; anything else is a schema violation.
void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

double get_number(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ConfigError(std::string(where) + ": missing numeric '" + key + "'");
  }
  return j[key].get<double>();
}

double get_number_or(const json& j, const char* key, double fallback, const char* where) {
  return j.contains(key) ? get_number(j, key, where) : fallback;
}

std::size_t get_count(const json& j, const char* key, std::size_t fallback, const char* where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_unsigned()) throw ConfigError(std::string(where) + ": '" + key + "' must be a nonnegative integer");
  return j[key].get<std::size_t>();
}

// b given directly or through a target overlap o_12.
double resolve_b(const json& j, double p, double a, Family family, const char* where) {
  const bool has_b = j.contains("b");
  const bool has_o = j.contains("overlap");
  if (has_b == has_o) throw ConfigError(std::string(where) + ": give exactly one of 'b' or 'overlap'");
  if (has_b) return get_number(j, "b", where);
  return solve_b_for_overlap(p, a, family, get_number(j, "overlap", where));
}

ScenarioSpec scenario_from_json(const json& j) {
  constexpr const char* kWhere = "scenario";
  if (!j.is_object()) throw ConfigError("scenario: expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) throw ConfigError("scenario: missing string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  ScenarioSpec spec;
  if (kind == "two_component") {
    check_keys(j, {"kind", "id", "family", "p", "a", "b", "overlap"}, kWhere);
    const Family family = Family::from_name(j.value("family", std::string("normal")));
    const double p = get_number(j, "p", kWhere);
    const double a = get_number(j, "a", kWhere);
    spec = ScenarioSpec::two_component(family, p, a, resolve_b(j, p, a, family, kWhere));
  } else if (kind == "table1") {
    check_keys(j, {"kind", "id", "row"}, kWhere);
    if (!j.contains("row") || !j["row"].is_string()) throw ConfigError("scenario: table1 needs string 'row'");
    spec = ScenarioSpec::table1(j["row"].get<std::string>());
  } else if (kind == "outlier" || kind == "contaminated" || kind == "misspecified_1" || kind == "misspecified_2") {
    const bool contaminated = kind == "outlier" || kind == "contaminated";
    if (contaminated) {
      check_keys(j, {"kind", "id", "p", "a", "b", "overlap", "alpha"}, kWhere);
    } else {
      check_keys(j, {"kind", "id", "p", "a", "b", "overlap"}, kWhere);
    }
    const double p = get_number(j, "p", kWhere);
    const double a = get_number(j, "a", kWhere);
    const double b = resolve_b(j, p, a, Family::normal(), kWhere);
    const double alpha = get_number_or(j, "alpha", 0.01, kWhere);
    if (kind == "outlier") spec = ScenarioSpec::outlier_contaminated(p, a, b, alpha);
    if (kind == "contaminated") spec = ScenarioSpec::density_contaminated(p, a, b, alpha);
    if (kind == "misspecified_1") spec = ScenarioSpec::misspecified_one(p, a, b);
    if (kind == "misspecified_2") spec = ScenarioSpec::misspecified_two(p, a, b);
  } else if (kind == "homogeneous") {
    check_keys(j, {"kind", "id", "family", "mu", "sigma"}, kWhere);
    spec = ScenarioSpec::homogeneous(Family::from_name(j.value("family", std::string("normal"))),
                                     get_number_or(j, "mu", 0.0, kWhere), get_number_or(j, "sigma", 1.0, kWhere));
  } else {
    throw ConfigError("scenario: unknown kind '" + kind + "'");
  }
  if (j.contains("id")) {
    if (!j["id"].is_string()) throw ConfigError("scenario: 'id' must be a string");
    spec.id = j["id"].get<std::string>();
  }
  return spec;
}

struct Task {
  std::size_t size_index;
  std::size_t replication;
};

std::vector<ResultRow> run_task(const ExperimentConfig& cfg, const Task& task) {
  const ScenarioSpec& spec = cfg.scenario;
  const std::size_t n = cfg.sample_sizes[task.size_index];
  const std::size_t r = task.replication;
  const std::uint64_t data_seed = derive_seed(cfg.master_seed, {n, r});
  const std::uint64_t fit_seed = derive_seed(cfg.master_seed, {n, r, 1});
  const std::size_t k = spec.fitted_k();

  std::vector<ResultRow> rows;
  std::vector<double> data;
  std::string data_error;
  try {
    data = generate_dataset(spec, n, data_seed);
  } catch (const Error& e) {
    data_error = e.what();
  }
  const std::vector<int> true_labels =
      data_error.empty() ? map_classify_all(spec.true_g, spec.family, data) : std::vector<int>{};

  for (Estimator est : cfg.estimators) {
    ResultRow row;
    row.scenario_id = spec.id;
    row.estimator = est;
    row.n = n;
    row.replication = r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if (!data_error.empty()) throw NumericError(data_error);
      const SortedSample sample(data);
      MixingDistribution g_hat = MixingDistribution::single(0.0, 1.0);
      if (k == 1 && est != Estimator::kPmle) {
        if (est == Estimator::kMwde) {
          const HomogeneousEstimate h = fit_homogeneous_mwde(sample, spec.family);
          if (h.degenerate) throw DegenerateSampleError("constant sample");
          g_hat = MixingDistribution::single(h.mu, h.sigma);
        } else {
          const HomogeneousMle h = fit_homogeneous_mle(sample, spec.family);
          g_hat = MixingDistribution::single(h.mu, h.sigma);
        }
        row.converged = true;
      } else if (est == Estimator::kMwde) {
        MwdeConfig mc;
        mc.n_starts = cfg.n_starts;
        mc.max_iter = cfg.max_iter;
        mc.seed = fit_seed;
        const FitReport rep = fit_mwde(sample, spec.family, k, mc);
        g_hat = rep.g_hat;
        row.converged = rep.converged;
      } else if (est == Estimator::kPmle) {
        PmleConfig pc;
        pc.n_starts = cfg.n_starts;
        pc.seed = fit_seed;
        const FitReport rep = fit_pmle(sample, spec.family, k, pc);
        g_hat = rep.g_hat;
        row.converged = rep.converged;
      } else {
        throw ConfigError("the unpenalized MLE is only available for homogeneous scenarios");
      }
      g_hat = g_hat.sorted_by_location();
      row.min_scale = g_hat.min_scale();
      row.weights.assign(g_hat.weights().begin(), g_hat.weights().end());
      row.locations.assign(g_hat.locations().begin(), g_hat.locations().end());
      row.scales.assign(g_hat.scales().begin(), g_hat.scales().end());
      if (row.min_scale > 0.0) {
        row.l2 = l2_mixture_distance(g_hat, spec.true_g, spec.family);
        row.ari = ari(true_labels, map_classify_all(g_hat, spec.family, data));
      } else {
        row.l2 = std::numeric_limits<double>::quiet_NaN();
        row.ari = std::numeric_limits<double>::quiet_NaN();
        row.error = "degenerate fit (zero scale)";
      }
      if (k == 1) {
        const double dm = g_hat.location(0) - spec.true_g.location(0);
        const double ds = g_hat.scale(0) - spec.true_g.scale(0);
        row.location_sq_error = dm * dm;
        row.scale_sq_error = ds * ds;
      }
    } catch (const Error& e) {
      row.error = e.what();
      row.l2 = std::numeric_limits<double>::quiet_NaN();
      row.ari = std::numeric_limits<double>::quiet_NaN();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string_view scenario_kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kTwoComponent: return "two_component";
    case ScenarioKind::kThreeComponentTable1: return "table1";
    case ScenarioKind::kOutlierContaminated: return "outlier";
    case ScenarioKind::kDensityContaminated: return "contaminated";
    case ScenarioKind::kMisspecifiedI: return "misspecified_1";
    case ScenarioKind::kMisspecifiedII: return "misspecified_2";
    case ScenarioKind::kHomogeneous: return "homogeneous";
  }
  return "unknown";
}

ScenarioSpec ScenarioSpec::two_component(Family family, double p, double a, double b) {
  require_two_component_args(p, a);
  ScenarioSpec s;
  s.kind = ScenarioKind::kTwoComponent;
  s.family = family;
  s.true_g = clean_two_component(p, a, b);
  s.p = p;
  s.a = a;
  s.b = b;
  s.id = "two_component:" + std::string(family.name()) + ":p=" + fmt_param(p) + ":a=" + fmt_param(a) +
         ":b=" + fmt_param(b);
  return s;
}

ScenarioSpec ScenarioSpec::table1(std::string_view row) {
  struct Row {
    const char* name;
    double w[3], mu[3], sigma[3];
  };
  constexpr double t = 1.0 / 3.0;
  static constexpr Row kRows[] = {
      {"I", {0.4, 0.5, 0.1}, {-2, 0, 1}, {0.3, 2, 0.4}},
      {"II", {0.4, 0.5, 0.1}, {-2, 0, 1}, {0.3, 1, 0.4}},
      {"III", {0.3, 0.5, 0.2}, {-3, 0, 3}, {1, 1, 1}},
      {"IV", {0.3, 0.5, 0.2}, {-2, 0, 2}, {1, 1, 1}},
      {"V", {t, t, t}, {-1, 0, 1}, {1.5, 0.1, 0.5}},
      {"VI", {t, t, t}, {-0.5, 0, 0.5}, {1.5, 0.1, 0.5}},
      {"VII", {t, t, t}, {-3, 0, 3}, {1, 1, 1}},
      {"VIII", {t, t, t}, {-2, 0, 2}, {1, 1, 1}},
  };
  for (const Row& r : kRows) {
    if (row == r.name) {
      ScenarioSpec s;
      s.kind = ScenarioKind::kThreeComponentTable1;
      s.family = Family::normal();
      s.true_g = MixingDistribution({r.w[0], r.w[1], r.w[2]}, {r.mu[0], r.mu[1], r.mu[2]},
                                    {r.sigma[0], r.sigma[1], r.sigma[2]});
      s.id = "table1:" + std::string(r.name);
      return s;
    }
  }
  throw ConfigError("unknown three-component table row '" + std::string(row) + "'");
}

ScenarioSpec ScenarioSpec::outlier_contaminated(double p, double a, double b, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("contamination rate must lie in [0, 1)");
  ScenarioSpec s = robust_base(ScenarioKind::kOutlierContaminated, p, a, b, "outlier");
  s.alpha = alpha;
  s.contaminant_location = 8.0;
  s.contaminant_scale = 1.0;
  s.id += ":alpha=" + fmt_param(alpha);
  return s;
}

ScenarioSpec ScenarioSpec::density_contaminated(double p, double a, double b, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("contamination rate must lie in [0, 1)");
  ScenarioSpec s = robust_base(ScenarioKind::kDensityContaminated, p, a, b, "contaminated");
  s.alpha = alpha;
  s.contaminant_location = b / 2.0;
  s.contaminant_scale = 7.0;
  s.id += ":alpha=" + fmt_param(alpha);
  return s;
}

ScenarioSpec ScenarioSpec::misspecified_one(double p, double a, double b) {
  ScenarioSpec s = robust_base(ScenarioKind::kMisspecifiedI, p, a, b, "misspecified_1");
  s.df_first = 4;
  s.df_second = 4;
  return s;
}

ScenarioSpec ScenarioSpec::misspecified_two(double p, double a, double b) {
  ScenarioSpec s = robust_base(ScenarioKind::kMisspecifiedII, p, a, b, "misspecified_2");
  s.df_first = 2;
  s.df_second = 4;
  return s;
}

ScenarioSpec ScenarioSpec::homogeneous(Family family, double mu, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("homogeneous scenario needs a positive scale");
  ScenarioSpec s;
  s.kind = ScenarioKind::kHomogeneous;
  s.family = family;
  s.true_g = MixingDistribution::single(mu, sigma);
  s.id = "homogeneous:" + std::string(family.name()) + ":mu=" + fmt_param(mu) + ":sigma=" + fmt_param(sigma);
  return s;
}

LabeledDataset generate_labeled(const ScenarioSpec& spec, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  LabeledDataset out;
  out.values.resize(n);
  out.source.resize(n);
  const MixingDistribution& g = spec.true_g;
  for (std::size_t i = 0; i < n; ++i) {
    switch (spec.kind) {
      case ScenarioKind::kOutlierContaminated:
      case ScenarioKind::kDensityContaminated:
        if (rng.uniform() < spec.alpha) {
          out.values[i] = spec.contaminant_location + spec.contaminant_scale * rng.normal();
          out.source[i] = -1;
          continue;
        }
        [[fallthrough]];
      case ScenarioKind::kTwoComponent:
      case ScenarioKind::kThreeComponentTable1:
      case ScenarioKind::kHomogeneous: {
        const std::size_t k = rng.categorical(g.weights());
        out.values[i] = g.location(k) + g.scale(k) * rng.standard(spec.family);
        out.source[i] = static_cast<int>(k);
        break;
      }
      case ScenarioKind::kMisspecifiedI:
      case ScenarioKind::kMisspecifiedII: {
        const std::size_t k = rng.categorical(g.weights());
        const int df = k == 0 ? spec.df_first : spec.df_second;
        out.values[i] = g.location(k) + g.scale(k) * rng.student_t(df);
        out.source[i] = static_cast<int>(k);
        break;
      }
    }
  }
  return out;
}

std::vector<double> generate_dataset(const ScenarioSpec& spec, std::size_t n, std::uint64_t seed) {
  return generate_labeled(spec, n, seed).values;
}

std::string_view estimator_name(Estimator e) {
  switch (e) {
    case Estimator::kMwde: return "mwde";
    case Estimator::kPmle: return "pmle";
    case Estimator::kMle: return "mle";
  }
  return "unknown";
}

Estimator estimator_from_name(std::string_view name) {
  if (name == "mwde") return Estimator::kMwde;
  if (name == "pmle") return Estimator::kPmle;
  if (name == "mle") return Estimator::kMle;
  throw ConfigError("unknown estimator '" + std::string(name) + "' (expected mwde, pmle or mle)");
}

void ExperimentConfig::validate() const {
  if (sample_sizes.empty()) throw ConfigError("experiment: 'sample_sizes' must not be empty");
  if (replications == 0) throw ConfigError("experiment: 'replications' must be at least 1");
  if (estimators.empty()) throw ConfigError("experiment: 'estimators' must not be empty");
  if (n_starts == 0) throw ConfigError("experiment: 'starts' must be at least 1");
  const std::size_t k = scenario.fitted_k();
  for (std::size_t n : sample_sizes) {
    if (n < k + 1 || n < 2) {
      throw ConfigError("experiment: sample size " + std::to_string(n) + " must be at least K + 1 = " +
                        std::to_string(k + 1) + " and at least 2");
    }
  }
  std::set<std::size_t> unique(sample_sizes.begin(), sample_sizes.end());
  if (unique.size() != sample_sizes.size()) throw ConfigError("experiment: duplicate sample sizes");
  for (Estimator e : estimators) {
    if (e == Estimator::kMle && k != 1) {
      throw ConfigError("experiment: estimator 'mle' requires a homogeneous (K = 1) scenario");
    }
  }
}

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("experiment: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("experiment: expected a JSON object");
  check_keys(j, {"scenario", "sample_sizes", "replications", "estimators", "master_seed", "starts", "max_iter"},
             "experiment");
  if (!j.contains("scenario")) throw ConfigError("experiment: missing 'scenario'");
  ExperimentConfig cfg;
  try {
    cfg.scenario = scenario_from_json(j["scenario"]);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  } catch (const NumericError& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  if (!j.contains("sample_sizes") || !j["sample_sizes"].is_array()) {
    throw ConfigError("experiment: missing array 'sample_sizes'");
  }
  for (const auto& v : j["sample_sizes"]) {
    if (!v.is_number_unsigned()) throw ConfigError("experiment: sample sizes must be positive integers");
    cfg.sample_sizes.push_back(v.get<std::size_t>());
  }
  cfg.replications = get_count(j, "replications", cfg.replications, "experiment");
  if (j.contains("estimators")) {
    if (!j["estimators"].is_array()) throw ConfigError("experiment: 'estimators' must be an array");
    cfg.estimators.clear();
    for (const auto& v : j["estimators"]) {
      if (!v.is_string()) throw ConfigError("experiment: estimator names must be strings");
      cfg.estimators.push_back(estimator_from_name(v.get<std::string>()));
    }
  }
  if (j.contains("master_seed")) {
    if (!j["master_seed"].is_number_unsigned()) throw ConfigError("experiment: 'master_seed' must be an unsigned integer");
    cfg.master_seed = j["master_seed"].get<std::uint64_t>();
  }
  cfg.n_starts = get_count(j, "starts", cfg.n_starts, "experiment");
  cfg.max_iter = get_count(j, "max_iter", cfg.max_iter, "experiment");
  cfg.validate();
  return cfg;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, std::size_t threads) {
  config.validate();
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < config.sample_sizes.size(); ++s) {
    for (std::size_t r = 0; r < config.replications; ++r) tasks.push_back({s, r});
  }
  std::vector<std::vector<ResultRow>> per_task(tasks.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, tasks.size());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
      per_task[i] = run_task(config, tasks[i]);
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<ResultRow> rows;
  rows.reserve(tasks.size() * config.estimators.size());
  for (auto& chunk : per_task) {
    for (auto& row : chunk) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SummaryCell> aggregate(std::span<const ResultRow> rows) {
  if (rows.empty()) throw DomainError("cannot aggregate an empty result set");
  using Key = std::tuple<std::string, int, std::size_t>;
  std::map<Key, std::vector<const ResultRow*>> groups;
  for (const ResultRow& r : rows) {
    groups[{r.scenario_id, static_cast<int>(r.estimator), r.n}].push_back(&r);
  }
  const auto mean_se = [](const std::vector<double>& v, double& mean, std::optional<double>& se) {
    mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    se.reset();
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
  };

  std::vector<SummaryCell> cells;
  for (const auto& [key, members] : groups) {
    SummaryCell cell;
    cell.scenario_id = std::get<0>(key);
    cell.estimator = static_cast<Estimator>(std::get<1>(key));
    cell.n = std::get<2>(key);
    std::vector<double> l2s, aris, loc, scl;
    for (const ResultRow* r : members) {
      if (!r->error.empty()) {
        ++cell.failures;
        continue;
      }
      l2s.push_back(r->l2);
      aris.push_back(r->ari);
      if (r->location_sq_error) loc.push_back(*r->location_sq_error);
      if (r->scale_sq_error) scl.push_back(*r->scale_sq_error);
    }
    cell.count = l2s.size();
    if (cell.count > 0) {
      mean_se(l2s, cell.ml2, cell.se_l2);
      mean_se(aris, cell.mari, cell.se_ari);
    } else {
      cell.ml2 = cell.mari = std::numeric_limits<double>::quiet_NaN();
    }
    std::optional<double> unused;
    if (!loc.empty()) {
      double m = 0.0;
      mean_se(loc, m, unused);
      cell.mse_location = m;
    }
    if (!scl.empty()) {
      double m = 0.0;
      mean_se(scl, m, unused);
      cell.mse_scale = m;
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::string results_csv(std::span<const ResultRow> rows) {
  std::string out =
      "scenario_id,estimator,n,replication,l2,ari,converged,min_scale,location_sq_error,scale_sq_error,"
      "weights,locations,scales,error\n";
  for (const ResultRow& r : rows) {
    out += csv_field(r.scenario_id) + ',' + std::string(estimator_name(r.estimator)) + ',' + std::to_string(r.n) +
           ',' + std::to_string(r.replication) + ',' + format_double(r.l2) + ',' + format_double(r.ari) + ',' +
           (r.converged ? "1" : "0") + ',' + format_double(r.min_scale) + ',' + opt_field(r.location_sq_error) +
           ',' + opt_field(r.scale_sq_error) + ',' + join(r.weights) + ',' + join(r.locations) + ',' +
           join(r.scales) + ',' + csv_field(r.error) + '\n';
  }
  return out;
}

std::string timings_csv(std::span<const ResultRow> rows) {
  std::string out = "scenario_id,estimator,n,replication,wall_ms\n";
  for (const ResultRow& r : rows) {
    out += csv_field(r.scenario_id) + ',' + std::string(estimator_name(r.estimator)) + ',' + std::to_string(r.n) +
           ',' + std::to_string(r.replication) + ',' + format_double(r.wall_ms) + '\n';
  }
  return out;
}

std::string summary_json(std::span<const SummaryCell> cells) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  const auto opt = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  for (const SummaryCell& c : cells) {
    nlohmann::ordered_json e;
    e["scenario_id"] = c.scenario_id;
    e["estimator"] = std::string(estimator_name(c.estimator));
    e["n"] = c.n;
    e["count"] = c.count;
    e["failures"] = c.failures;
    e["ml2"] = std::isfinite(c.ml2) ? nlohmann::ordered_json(c.ml2) : nlohmann::ordered_json(nullptr);
    e["se_l2"] = opt(c.se_l2);
    e["mari"] = std::isfinite(c.mari) ? nlohmann::ordered_json(c.mari) : nlohmann::ordered_json(nullptr);
    e["se_ari"] = opt(c.se_ari);
    e["mse_location"] = opt(c.mse_location);
    e["mse_scale"] = opt(c.mse_scale);
    arr.push_back(e);
  }
  return arr.dump(2) + "\n";
}

}  // namespace lsmix

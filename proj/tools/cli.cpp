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

#include "cli.hpp"

#include <chrono>
#include <charconv>
#include <ctime>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lsmix/errors.hpp"
#include "lsmix/family.hpp"
#include "lsmix/imgseg.hpp"
#include "lsmix/metrics.hpp"
#include "lsmix/mixture.hpp"
#include "lsmix/mwde.hpp"
#include "lsmix/pmle.hpp"
#include "lsmix/sample.hpp"
#include "lsmix/simlab.hpp"
#include "lsmix/text_io.hpp"

namespace lsmix::cli {
namespace {

namespace fs = std::filesystem;

// Bumped when an output schema changes.
constexpr int kFormatVersion = 1;

std::string version_string() {
  return std::string("lsmix ") + LSMIX_VERSION + " (output format v" + std::to_string(kFormatVersion) + ")";
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Provenance of one invocation.
class Manifest {
 public:
  Manifest(int argc, const char* const* argv) : started_(utc_now()) {
    for (int i = 0; i < argc; ++i) {
      args_.emplace_back(argv[i]);
      if (i > 0) {
        hash_ = fnv1a64(args_.back(), hash_);
        hash_ = fnv1a64(std::string_view("\0", 1), hash_);
      }
    }
  }

  void absorb(std::string_view input_bytes) { hash_ = fnv1a64(input_bytes, hash_); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  std::string hash_hex() const { return hex64(hash_); }

  std::string to_json() const {
    nlohmann::ordered_json j;
    j["command_line"] = args_;
    j["config_hash"] = hash_hex();
    j["master_seed"] = seed_;
    j["version"] = version_string();
    j["started_at"] = started_;
    j["finished_at"] = utc_now();
    return j.dump(2) + "\n";
  }

 private:
  std::vector<std::string> args_;
  std::uint64_t hash_ = fnv1a64("");
  std::uint64_t seed_ = 0;
  std::string started_;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

void emit_manifest(const Manifest& m, const std::string& out_path, std::ostream& err) {
  if (out_path.empty()) {
    err << m.to_json();
  } else {
    write_file(out_path + ".manifest.json", m.to_json());
  }
}

// Shortest round-trip form, always with a decimal point or exponent.
std::string decimal(double v) {
  std::string s = format_double(v);
  if (s.find_first_of(".eEni") == std::string::npos) s += ".0";
  return s;
}

// ---- fit

struct FitArgs {
  std::string method;
  std::string family = "normal";
  std::size_t k = 0;
  std::size_t starts = 10;
  std::uint64_t seed = 0;
  std::size_t max_iter = 0;
  std::string input;
  std::string out;
  std::string a_n = "auto";
  std::string scale_stat = "variance";
};

void run_fit(const FitArgs& a, Manifest& manifest, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(a.input);
  manifest.absorb(text);
  manifest.set_seed(a.seed);
  const SortedSample sample(parse_real_column(text));
  const Family family = Family::from_name(a.family);
  FitReport report;
  if (a.method == "mwde") {
    MwdeConfig cfg;
    cfg.n_starts = a.starts;
    cfg.seed = a.seed;
    if (a.max_iter) cfg.max_iter = a.max_iter;
    report = fit_mwde(sample, family, a.k, cfg);
  } else {
    PmleConfig cfg;
    cfg.n_starts = a.starts;
    cfg.seed = a.seed;
    if (a.max_iter) cfg.max_iter = a.max_iter;
    if (a.a_n != "auto") {
      double v = 0.0;
      const auto [p, ec] = std::from_chars(a.a_n.data(), a.a_n.data() + a.a_n.size(), v);
      if (ec != std::errc() || p != a.a_n.data() + a.a_n.size() || !(v > 0.0)) {
        throw ConfigError("--a-n must be 'auto' or a positive number");
      }
      cfg.a_n = v;
    }
    cfg.scale_stat = a.scale_stat == "iqr" ? ScaleStatistic::kInterquartileRangeSq : ScaleStatistic::kVariance;
    report = fit_pmle(sample, family, a.k, cfg);
  }
  emit(report.to_json(), a.out, out);
  emit_manifest(manifest, a.out, err);
}

// ---- simulate

struct SimulateArgs {
  std::string config;
  std::string out;
  std::size_t threads = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  bool full_scale = false;
};

void run_simulate(const SimulateArgs& a, Manifest& manifest) {
  const std::string text = read_file(a.config);
  manifest.absorb(text);
  ExperimentConfig cfg = ExperimentConfig::from_json(text);
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.full_scale) cfg.replications = 1000;
  if (a.replications) cfg.replications = *a.replications;
  cfg.validate();
  manifest.set_seed(cfg.master_seed);
  const std::vector<ResultRow> rows = run_experiment(cfg, a.threads);
  const std::vector<SummaryCell> cells = aggregate(rows);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_file(dir / "results.csv", results_csv(rows));
  write_file(dir / "summary.json", summary_json(cells));
  write_file(dir / "timings.csv", timings_csv(rows));
  write_file(dir / "manifest.json", manifest.to_json());
}

// ---- eval

struct EvalArgs {
  std::string metric;
  std::string g1, g2;
  std::string labels_a, labels_b;
  std::size_t resolution = 200000;
  std::string out;
};

MixtureModel load_model(const std::string& path, Manifest& manifest) {
  if (path.empty()) throw ConfigError("missing mixture file");
  const std::string text = read_file(path);
  manifest.absorb(text);
  return MixtureModel::from_json(text);
}

void run_eval(const EvalArgs& a, Manifest& manifest, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::string, double>> rows;
  if (a.metric == "ari") {
    if (a.labels_a.empty() || a.labels_b.empty()) throw ConfigError("ari needs --labels-a and --labels-b");
    const std::string ta = read_file(a.labels_a);
    const std::string tb = read_file(a.labels_b);
    manifest.absorb(ta);
    manifest.absorb(tb);
    rows.emplace_back("ari", ari(parse_label_column(ta), parse_label_column(tb)));
  } else if (a.metric == "l2") {
    const MixtureModel m1 = load_model(a.g1, manifest);
    const MixtureModel m2 = load_model(a.g2, manifest);
    if (!(m1.family == m2.family)) throw ConfigError("l2 needs both mixtures in the same family");
    rows.emplace_back("l2", l2_mixture_distance(m1.mixing, m2.mixing, m1.family));
  } else {
    const MixtureModel m = load_model(a.g1, manifest);
    const OverlapReport rep = overlap_report(m.mixing, m.family, a.resolution);
    for (std::size_t i = 0; i < rep.k; ++i) {
      for (std::size_t j = i + 1; j < rep.k; ++j) {
        rows.emplace_back("overlap_" + std::to_string(i + 1) + "_" + std::to_string(j + 1), rep(i, j));
      }
    }
    rows.emplace_back("mean_omega", rep.mean_omega);
  }
  std::string csv = "metric,value,config_hash\n";
  for (const auto& [name, value] : rows) csv += name + ',' + decimal(value) + ',' + manifest.hash_hex() + '\n';
  emit(csv, a.out, out);
  emit_manifest(manifest, a.out, err);
}

// ---- segment

struct SegmentArgs {
  std::string input;
  std::string method = "both";
  std::string out;
  std::size_t threads = 0;
  std::size_t starts = 10;
  std::uint64_t seed = 0;
  std::size_t bins = 64;
};

void run_segment(const SegmentArgs& a, Manifest& manifest) {
  const std::string bytes = read_file(a.input);
  manifest.absorb(bytes);
  manifest.set_seed(a.seed);
  const ImageTensor image = parse_ppm(bytes);
  std::vector<SegmentMethod> methods;
  if (a.method == "both") {
    methods = {SegmentMethod::kPmle, SegmentMethod::kMwde};
  } else {
    methods = {segment_method_from_name(a.method)};
  }
  SegmentConfig cfg;
  cfg.n_starts = a.starts;
  cfg.seed = a.seed;
  cfg.threads = a.threads;

  const fs::path dir(a.out);
  fs::create_directories(dir);
  static constexpr const char* kChannels[3] = {"red", "green", "blue"};
  std::vector<SegmentationResult> results;
  for (SegmentMethod m : methods) {
    SegmentationResult r = segment(image, m, cfg);
    const std::string tag(segment_method_name(m));
    for (int c = 0; c < 3; ++c) {
      write_file(dir / ("labels_" + tag + "_" + kChannels[c] + ".pgm"),
                 encode_pgm(r.width, r.height, r.channels[c].labels, 2));
      write_file(dir / ("recolored_" + tag + "_" + kChannels[c] + ".ppm"), encode_ppm(r.recolored[c]));
    }
    write_file(dir / ("combined_" + tag + ".ppm"), encode_ppm(r.combined));
    results.push_back(std::move(r));
  }
  write_file(dir / "parameters.csv", parameter_table_csv(results));
  write_file(dir / "parameters.json", parameter_table_json(results));
  write_file(dir / "histogram.csv", transformed_histogram_csv(image, a.bins));
  write_file(dir / "manifest.json", manifest.to_json());
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite location-scale mixtures: minimum Wasserstein distance and penalized likelihood"};
  app.name("lsmix");
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a K-component mixture to a single-column CSV sample");
  fit_cmd->add_option("--method", fit.method, "mwde or pmle")->required()->check(CLI::IsMember({"mwde", "pmle"}));
  fit_cmd->add_option("--family", fit.family, "normal, logistic or gumbel")
      ->check(CLI::IsMember({"normal", "logistic", "gumbel"}));
  fit_cmd->add_option("--k", fit.k, "number of components")->required()->check(CLI::PositiveNumber);
  fit_cmd->add_option("--starts", fit.starts, "start points")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--seed", fit.seed, "seed for start points");
  fit_cmd->add_option("--max-iter", fit.max_iter, "iteration cap (default: method default)");
  fit_cmd->add_option("--input", fit.input, "CSV file")->required();
  fit_cmd->add_option("--out", fit.out, "output JSON (default: stdout)");
  fit_cmd->add_option("--a-n", fit.a_n, "pmle penalty weight: auto or a positive value");
  fit_cmd->add_option("--scale-stat", fit.scale_stat, "pmle penalty scale: variance or iqr")
      ->check(CLI::IsMember({"variance", "iqr"}));

  SimulateArgs sim;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Run a Monte-Carlo experiment from a JSON config");
  sim_cmd->add_option("--config", sim.config, "experiment JSON")->required();
  sim_cmd->add_option("--out", sim.out, "output directory")->required();
  sim_cmd->add_option("--threads", sim.threads, "worker cap (0 = all cores)");
  sim_cmd->add_option("--seed", sim.seed, "overrides master_seed");
  sim_cmd->add_option("--replications", sim.replications, "overrides replications")->check(CLI::PositiveNumber);
  sim_cmd->add_flag("--full-scale", sim.full_scale, "R = 1000 replications per cell");

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate L2 distance, ARI or pairwise overlap");
  eval_cmd->add_option("--metric", ev.metric, "l2, ari or overlap")
      ->required()
      ->check(CLI::IsMember({"l2", "ari", "overlap"}));
  eval_cmd->add_option("--g1", ev.g1, "mixture JSON");
  eval_cmd->add_option("--g2", ev.g2, "mixture JSON");
  eval_cmd->add_option("--labels-a", ev.labels_a, "label CSV");
  eval_cmd->add_option("--labels-b", ev.labels_b, "label CSV");
  eval_cmd->add_option("--resolution", ev.resolution, "overlap quantile grid size")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", ev.out, "output CSV (default: stdout)");

  SegmentArgs seg;
  CLI::App* seg_cmd = app.add_subcommand("segment", "Channel-wise two-cluster segmentation of a PPM image");
  seg_cmd->add_option("--input", seg.input, "binary PPM (P6)")->required();
  seg_cmd->add_option("--method", seg.method, "mwde, pmle or both")
      ->check(CLI::IsMember({"mwde", "pmle", "both"}));
  seg_cmd->add_option("--out", seg.out, "output directory")->required();
  seg_cmd->add_option("--threads", seg.threads, "worker cap (0 = all cores)");
  seg_cmd->add_option("--starts", seg.starts, "start points per fit")->check(CLI::PositiveNumber);
  seg_cmd->add_option("--seed", seg.seed, "seed for start points");
  seg_cmd->add_option("--bins", seg.bins, "histogram bins")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  Manifest manifest(argc, argv);
  try {
    if (*fit_cmd) run_fit(fit, manifest, out, err);
    if (*sim_cmd) run_simulate(sim, manifest);
    if (*eval_cmd) run_eval(ev, manifest, out, err);
    if (*seg_cmd) run_segment(seg, manifest);
  } catch (const NumericError& e) {
    err << "lsmix: numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const Error& e) {
    err << "lsmix: " << e.what() << "\n";
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "lsmix: " << e.what() << "\n";
    return kDataError;
  }
  return kOk;
}

}  // namespace lsmix::cli

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

#include "lsmix/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "lsmix/errors.hpp"
#include "lsmix/random.hpp"

namespace lsmix {
namespace {

using json = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_continuous(const MixingDistribution& g, const char* what) {
  if (g.has_point_mass()) {
    throw UnsupportedError(std::string(what) + " requires every scale to be positive");
  }
}

std::vector<double> read_array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ConfigError(std::string("mixture JSON: missing array '") + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw ConfigError(std::string("mixture JSON: non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

MixingDistribution::MixingDistribution(std::vector<double> weights, std::vector<double> locations,
                                       std::vector<double> scales)
    : weights_(std::move(weights)), locations_(std::move(locations)), scales_(std::move(scales)) {
  if (weights_.empty()) throw DomainError("mixing distribution needs at least one component");
  if (weights_.size() != locations_.size() || weights_.size() != scales_.size()) {
    throw DomainError("weights, locations and scales must have equal length");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    if (!std::isfinite(weights_[k]) || weights_[k] < 0.0 || weights_[k] > 1.0 + 1e-9) {
      throw DomainError("mixing weights must lie in [0, 1]");
    }
    if (!std::isfinite(locations_[k])) throw DomainError("locations must be finite");
    if (!std::isfinite(scales_[k]) || scales_[k] < 0.0) {
      throw DomainError("scales must be finite and nonnegative");
    }
    total += weights_[k];
  }
  if (std::fabs(total - 1.0) > 1e-9) throw DomainError("mixing weights must sum to one");
  for (double& w : weights_) w /= total;
}

MixingDistribution MixingDistribution::single(double location, double scale) {
  return MixingDistribution({1.0}, {location}, {scale});
}

bool MixingDistribution::has_point_mass() const {
  return std::any_of(scales_.begin(), scales_.end(), [](double s) { return s == 0.0; });
}

bool MixingDistribution::all_point_masses() const {
  return std::all_of(scales_.begin(), scales_.end(), [](double s) { return s == 0.0; });
}

double MixingDistribution::min_scale() const {
  return *std::min_element(scales_.begin(), scales_.end());
}

MixingDistribution MixingDistribution::sorted_by_location() const {
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    if (locations_[a] != locations_[b]) return locations_[a] < locations_[b];
    return scales_[a] < scales_[b];
  });
  std::vector<double> w, m, s;
  for (std::size_t k : order) {
    w.push_back(weights_[k]);
    m.push_back(locations_[k]);
    s.push_back(scales_[k]);
  }
  return MixingDistribution(std::move(w), std::move(m), std::move(s));
}

MixingDistribution MixingDistribution::affine(double c, double m) const {
  if (!(c > 0.0)) throw DomainError("affine scale factor must be positive");
  std::vector<double> loc(locations_), sc(scales_);
  for (std::size_t k = 0; k < size(); ++k) {
    loc[k] = c * loc[k] + m;
    sc[k] = c * sc[k];
  }
  return MixingDistribution(weights_, std::move(loc), std::move(sc));
}

std::string MixtureModel::to_json() const {
  json j;
  j["family"] = std::string(family.name());
  j["weights"] = std::vector<double>(mixing.weights().begin(), mixing.weights().end());
  j["locations"] = std::vector<double>(mixing.locations().begin(), mixing.locations().end());
  j["scales"] = std::vector<double>(mixing.scales().begin(), mixing.scales().end());
  return j.dump(2);
}

MixtureModel MixtureModel::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("mixture JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("mixture JSON: expected an object");
  if (!j.contains("family") || !j["family"].is_string()) {
    throw ConfigError("mixture JSON: missing string 'family'");
  }
  const Family family = Family::from_name(j["family"].get<std::string>());
  std::vector<double> w = read_array(j, "weights");
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::fabs(total - 1.0) > 1e-6) throw ConfigError("mixture JSON: weights must sum to one");
  for (double& v : w) v /= total;
  try {
    return MixtureModel{family, MixingDistribution(std::move(w), read_array(j, "locations"),
                                                   read_array(j, "scales"))};
  } catch (const DomainError& e) {
    throw ConfigError(std::string("mixture JSON: ") + e.what());
  }
}

double mixture_cdf(const MixingDistribution& g, Family family, double x) {
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double s = g.scale(k);
    const double c = s > 0.0 ? family.cdf((x - g.location(k)) / s) : (x >= g.location(k) ? 1.0 : 0.0);
    total += g.weight(k) * c;
  }
  return std::clamp(total, 0.0, 1.0);
}

double mixture_pdf(const MixingDistribution& g, Family family, double x) {
  require_continuous(g, "mixture density");
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    total += g.weight(k) * family.pdf((x - g.location(k)) / g.scale(k)) / g.scale(k);
  }
  return total;
}

double component_log_density(const MixingDistribution& g, Family family, std::size_t k, double x) {
  const double s = g.scale(k);
  return family.log_pdf((x - g.location(k)) / s) - std::log(s);
}

double solve_mixture_quantile(const MixingDistribution& g, Family family, double t, double lo,
                              double hi, double guess) {
  if (!(lo <= hi)) std::swap(lo, hi);
  double x = std::clamp(guess, lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(lo), std::fabs(hi)) ||
        hi == lo) {
      return 0.5 * (lo + hi);
    }
    const double resid = mixture_cdf(g, family, x) - t;
    if (resid == 0.0) return x;
    if (resid < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double dens = mixture_pdf(g, family, x);
    double next = dens > 0.0 ? x - resid / dens : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x))) {
      return next;
    }
    x = next;
  }
  return x;
}

double mixture_quantile(const MixingDistribution& g, Family family, double t) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  if (g.all_point_masses()) {
    const MixingDistribution sorted = g.sorted_by_location();
    double cum = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      cum += sorted.weight(k);
      if (cum >= t) return sorted.location(k);
    }
    return sorted.location(sorted.size() - 1);
  }
  if (g.has_point_mass()) {
    throw UnsupportedError("quantile of a mixture mixing point masses and continuous atoms");
  }
  const double z = family.quantile(t);
  double lo = kInf, hi = -kInf, guess = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double q = g.location(k) + g.scale(k) * z;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
    guess += g.weight(k) * q;
  }
  return solve_mixture_quantile(g, family, t, lo, hi, guess);
}

std::size_t map_classify(const MixingDistribution& g, Family family, double x) {
  require_continuous(g, "MAP classification");
  std::size_t best = 0;
  double best_score = -kInf;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double w = g.weight(k);
    const double score = w > 0.0 ? std::log(w) + component_log_density(g, family, k, x) : -kInf;
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

std::vector<int> map_classify_all(const MixingDistribution& g, Family family,
                                  std::span<const double> xs) {
  std::vector<int> labels(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    labels[i] = static_cast<int>(map_classify(g, family, xs[i]));
  }
  return labels;
}

std::vector<double> sample(const MixingDistribution& g, Family family, std::size_t n,
                           std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (double& x : out) {
    const std::size_t k = rng.categorical(g.weights());
    const double y = rng.standard(family);
    x = g.scale(k) > 0.0 ? g.location(k) + g.scale(k) * y : g.location(k);
  }
  return out;
}

}  // namespace lsmix

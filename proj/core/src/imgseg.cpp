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

#include "lsmix/imgseg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <boost/math/special_functions/erf.hpp>

#include "json.hpp"
#include "lsmix/errors.hpp"
#include "lsmix/mwde.hpp"
#include "lsmix/pmle.hpp"
#include "lsmix/random.hpp"
#include "lsmix/sample.hpp"
#include "lsmix/text_io.hpp"

namespace lsmix {
namespace {

constexpr const char* kChannelNames[3] = {"red", "green", "blue"};

double std_normal_quantile(double p) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p); }

void fall_back(ChannelSegmentation& out, std::span<const double> y, std::string why) {
  double m = 0.0;
  for (double v : y) m += v;
  m /= static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - m) * (v - m);
  out.g = MixingDistribution::single(m, std::sqrt(ss / static_cast<double>(y.size())));
  out.fallback = true;
  out.diagnostic = std::move(why);
  out.labels.assign(y.size(), 1);
}

ChannelSegmentation segment_channel(std::span<const double> x, SegmentMethod method, const SegmentConfig& cfg,
                                    std::uint64_t seed) {
  const std::size_t n = x.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = transform_intensity(x[i], n);

  ChannelSegmentation out;
  try {
    const SortedSample sample(y);
    FitReport rep;
    if (method == SegmentMethod::kMwde) {
      MwdeConfig mc;
      mc.n_starts = cfg.n_starts;
      mc.seed = seed;
      rep = fit_mwde(sample, Family::normal(), 2, mc);
    } else {
      PmleConfig pc;
      pc.n_starts = cfg.n_starts;
      pc.seed = seed;
      rep = fit_pmle(sample, Family::normal(), 2, pc);
    }
    const MixingDistribution g = rep.g_hat.sorted_by_location();
    if (!(g.min_scale() > 0.0)) {
      fall_back(out, y, "fit degenerated to a point mass");
    } else {
      out.g = g;
      out.labels.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        out.labels[i] = static_cast<std::uint8_t>(map_classify(g, Family::normal(), y[i]) + 1);
      }
    }
  } catch (const Error& e) {
    fall_back(out, y, e.what());
  }

  std::array<double, 2> sum{};
  std::array<std::size_t, 2> count{};
  for (std::size_t i = 0; i < n; ++i) {
    sum[out.labels[i] - 1] += x[i];
    ++count[out.labels[i] - 1];
  }
  for (int l = 0; l < 2; ++l) out.cluster_mean[l] = count[l] ? sum[l] / static_cast<double>(count[l]) : 0.0;
  return out;
}

}  // namespace

double transform_intensity(double x, std::size_t n_pixels) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("intensity must lie in [0, 1]");
  if (n_pixels == 0) throw DomainError("pixel count must be at least 1");
  const double inv_n = 1.0 / static_cast<double>(n_pixels);
  // Upper half by symmetry; 1 - x is exact there.
  if (x > 0.5) return -std_normal_quantile((1.0 - x + inv_n) / (1.0 + 2.0 * inv_n));
  return std_normal_quantile((x + inv_n) / (1.0 + 2.0 * inv_n));
}

std::string_view segment_method_name(SegmentMethod m) { return m == SegmentMethod::kMwde ? "mwde" : "pmle"; }

SegmentMethod segment_method_from_name(std::string_view name) {
  if (name == "mwde") return SegmentMethod::kMwde;
  if (name == "pmle") return SegmentMethod::kPmle;
  throw ConfigError("unknown segmentation method '" + std::string(name) + "' (expected mwde or pmle)");
}

SegmentationResult segment(const ImageTensor& image, SegmentMethod method, const SegmentConfig& config) {
  image.validate();
  SegmentationResult res;
  res.method = method;
  res.width = image.width;
  res.height = image.height;

  std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<std::size_t>(threads, 3);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t c = next.fetch_add(1); c < 3; c = next.fetch_add(1)) {
      res.channels[c] = segment_channel(image.channels[c], method, config, derive_seed(config.seed, {c}));
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  const std::size_t n = image.pixel_count();
  for (std::size_t c = 0; c < 3; ++c) {
    ImageTensor& rc = res.recolored[c];
    rc = ImageTensor::filled(image.width, image.height, 0.0, 0.0, 0.0);
    const ChannelSegmentation& ch = res.channels[c];
    for (std::size_t i = 0; i < n; ++i) rc.channels[c][i] = ch.cluster_mean[ch.labels[i] - 1];
  }

  std::array<std::array<double, 3>, 8> sum{};
  std::array<std::size_t, 8> count{};
  std::vector<std::uint8_t> cluster(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int id = (res.channels[0].labels[i] - 1) * 4 + (res.channels[1].labels[i] - 1) * 2 +
                   (res.channels[2].labels[i] - 1);
    cluster[i] = static_cast<std::uint8_t>(id);
    ++count[id];
    for (int c = 0; c < 3; ++c) sum[id][c] += image.channels[c][i];
  }
  res.combined = ImageTensor::filled(image.width, image.height, 0.0, 0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      res.combined.channels[c][i] = sum[cluster[i]][c] / static_cast<double>(count[cluster[i]]);
    }
  }
  return res;
}

namespace {

struct TableRow {
  double w1, w2, mu1, mu2, s1, s2;
};

TableRow table_row(const ChannelSegmentation& ch) {
  const MixingDistribution& g = ch.g;
  if (g.size() == 1) return {1.0, 0.0, g.location(0), g.location(0), g.scale(0), g.scale(0)};
  return {g.weight(0), g.weight(1), g.location(0), g.location(1), g.scale(0), g.scale(1)};
}

}  // namespace

std::string parameter_table_csv(std::span<const SegmentationResult> results) {
  std::string out = "channel,estimator,w1,w2,mu1,mu2,sigma1,sigma2\n";
  for (std::size_t c = 0; c < 3; ++c) {
    for (const SegmentationResult& r : results) {
      const TableRow t = table_row(r.channels[c]);
      out += std::string(kChannelNames[c]) + ',' + std::string(segment_method_name(r.method)) + ',' +
             format_double(t.w1) + ',' + format_double(t.w2) + ',' + format_double(t.mu1) + ',' +
             format_double(t.mu2) + ',' + format_double(t.s1) + ',' + format_double(t.s2) + '\n';
    }
  }
  return out;
}

std::string parameter_table_json(std::span<const SegmentationResult> results) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < 3; ++c) {
    for (const SegmentationResult& r : results) {
      const TableRow t = table_row(r.channels[c]);
      nlohmann::ordered_json e;
      e["channel"] = kChannelNames[c];
      e["estimator"] = std::string(segment_method_name(r.method));
      e["w1"] = t.w1;
      e["w2"] = t.w2;
      e["mu1"] = t.mu1;
      e["mu2"] = t.mu2;
      e["sigma1"] = t.s1;
      e["sigma2"] = t.s2;
      e["fallback"] = r.channels[c].fallback;
      if (r.channels[c].fallback) e["diagnostic"] = r.channels[c].diagnostic;
      arr.push_back(e);
    }
  }
  return arr.dump(2) + "\n";
}

std::string transformed_histogram_csv(const ImageTensor& image, std::size_t bins) {
  image.validate();
  if (bins == 0) throw DomainError("histogram needs at least one bin");
  const std::size_t n = image.pixel_count();
  const double lo = transform_intensity(0.0, n);
  const double hi = transform_intensity(1.0, n);
  const double width = (hi - lo) / static_cast<double>(bins);
  std::string out = "channel,bin,left,right,count,density\n";
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<std::size_t> counts(bins, 0);
    for (double x : image.channels[c]) {
      const double y = transform_intensity(x, n);
      const auto b = static_cast<std::size_t>(std::clamp((y - lo) / width, 0.0, static_cast<double>(bins - 1)));
      ++counts[b];
    }
    for (std::size_t b = 0; b < bins; ++b) {
      const double left = lo + width * static_cast<double>(b);
      out += std::string(kChannelNames[c]) + ',' + std::to_string(b) + ',' + format_double(left) + ',' +
             format_double(b + 1 == bins ? hi : left + width) + ',' + std::to_string(counts[b]) + ',' +
             format_double(static_cast<double>(counts[b]) / (static_cast<double>(n) * width)) + '\n';
    }
  }
  return out;
}

}  // namespace lsmix

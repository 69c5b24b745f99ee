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

#ifndef LSMIX_IMGSEG_HPP_
#define LSMIX_IMGSEG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsmix/image.hpp"
#include "lsmix/mixture.hpp"

namespace lsmix {

// y = Phi^{-1}((x + 1/N) / (1 + 2/N)). Strictly increasing in x and finite
// on [0, 1]. Throws DomainError for x outside [0, 1] or N = 0.
double transform_intensity(double x, std::size_t n_pixels);

enum class SegmentMethod { kMwde, kPmle };
std::string_view segment_method_name(SegmentMethod m);
SegmentMethod segment_method_from_name(std::string_view name);

struct SegmentConfig {
  std::size_t n_starts = 10;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

struct ChannelSegmentation {
  // Fit on the transformed scale, components by ascending location.
  // A single component when the channel fell back to one cluster.
  MixingDistribution g = MixingDistribution::single(0.0, 1.0);
  bool fallback = false;
  std::string diagnostic;
  std::vector<std::uint8_t> labels;       // 1 or 2 per pixel
  std::array<double, 2> cluster_mean{};   // mean original intensity per label
};

struct SegmentationResult {
  SegmentMethod method = SegmentMethod::kMwde;
  std::size_t width = 0, height = 0;
  std::array<ChannelSegmentation, 3> channels;
  // Channel c replaced by its cluster means, other channels zero.
  std::array<ImageTensor, 3> recolored;
  // Each pixel colored by the mean RGB of its 3-bit refined cluster.
  ImageTensor combined;
};

// Independent K = 2 normal fits on the transformed R, G and B values, MAP
// labels (ties to label 1) and recoloring by original-intensity means. A
// channel whose fit fails or degenerates is reported through `fallback`
// and assigned one cluster. Channel c's fit is seeded with
// derive_seed(config.seed, {c}).
SegmentationResult segment(const ImageTensor& image, SegmentMethod method, const SegmentConfig& config = {});

// Columns: channel,estimator,w1,w2,mu1,mu2,sigma1,sigma2 (fallback channels
// report w2 = 0 and repeat the first component).
std::string parameter_table_csv(std::span<const SegmentationResult> results);
std::string parameter_table_json(std::span<const SegmentationResult> results);

// Per-channel histogram of transformed intensities over the attainable
// range [y(0), y(1)] in `bins` equal cells. Columns:
// channel,bin,left,right,count,density.
std::string transformed_histogram_csv(const ImageTensor& image, std::size_t bins = 64);

}  // namespace lsmix

#endif  // LSMIX_IMGSEG_HPP_

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

#ifndef LSMIX_TESTS_SUPPORT_FIXTURES_HPP_
#define LSMIX_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "lsmix/image.hpp"

namespace fixture {

// Left half dark, right half bright in every channel, with byte-quantized
// uniform noise. Truth label 0 = left, 1 = right.
inline lsmix::ImageTensor half_split(std::size_t width, std::size_t height, std::uint64_t seed,
                                     std::vector<int>* truth = nullptr) {
  constexpr double kLeft[3] = {0.2, 0.7, 0.4};
  constexpr double kRight[3] = {0.8, 0.3, 0.9};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  lsmix::ImageTensor img = lsmix::ImageTensor::filled(width, height, 0.0, 0.0, 0.0);
  if (truth) truth->clear();
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const bool right = c >= width / 2;
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const double v = (right ? kRight[ch] : kLeft[ch]) + noise(rng);
        img.at(ch, r, c) = static_cast<double>(lsmix::to_byte(v)) / 255.0;
      }
      if (truth) truth->push_back(right ? 1 : 0);
    }
  }
  return img;
}

}  // namespace fixture

#endif  // LSMIX_TESTS_SUPPORT_FIXTURES_HPP_

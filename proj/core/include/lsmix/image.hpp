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

#ifndef LSMIX_IMAGE_HPP_
#define LSMIX_IMAGE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lsmix {

// Three row-major planes (R, G, B) of intensities in [0, 1].
struct ImageTensor {
  std::size_t width = 0;
  std::size_t height = 0;
  std::array<std::vector<double>, 3> channels;

  static ImageTensor filled(std::size_t width, std::size_t height, double r, double g, double b);

  std::size_t pixel_count() const { return width * height; }
  double& at(std::size_t c, std::size_t row, std::size_t col) { return channels[c][row * width + col]; }
  double at(std::size_t c, std::size_t row, std::size_t col) const { return channels[c][row * width + col]; }

  // Throws DomainError on zero dimensions, plane size mismatch or an
  // intensity outside [0, 1].
  void validate() const;
};

// Binary PPM (P6) with maxval <= 255; samples map to [0, 1] by v / maxval.
// Comments in the header are skipped. Throws ConfigError on malformed input.
ImageTensor parse_ppm(std::string_view bytes);
// P6, maxval 255, v -> round(255 x).
std::string encode_ppm(const ImageTensor& image);
// P5 grayscale; values must not exceed maxval.
std::string encode_pgm(std::size_t width, std::size_t height, std::span<const std::uint8_t> values,
                       std::uint8_t maxval = 255);

std::uint8_t to_byte(double intensity);

}  // namespace lsmix

#endif  // LSMIX_IMAGE_HPP_

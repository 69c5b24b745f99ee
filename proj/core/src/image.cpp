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

#include "lsmix/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "lsmix/errors.hpp"

namespace lsmix {
namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const unsigned char c = static_cast<unsigned char>(bytes_[pos_]);
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::size_t number(const char* what) {
    skip_space_and_comments();
    std::size_t v = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (v > (std::size_t{1} << 32)) throw ConfigError(std::string("PPM: ") + what + " too large");
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw ConfigError(std::string("PPM: missing ") + what);
    return v;
  }

  std::size_t& pos() { return pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

ImageTensor ImageTensor::filled(std::size_t width, std::size_t height, double r, double g, double b) {
  ImageTensor img;
  img.width = width;
  img.height = height;
  const double v[3] = {r, g, b};
  for (int c = 0; c < 3; ++c) img.channels[c].assign(width * height, v[c]);
  return img;
}

void ImageTensor::validate() const {
  if (width == 0 || height == 0) throw DomainError("image dimensions must be at least 1");
  for (const auto& plane : channels) {
    if (plane.size() != width * height) throw DomainError("image plane size does not match dimensions");
    for (double v : plane) {
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("image intensities must lie in [0, 1]");
    }
  }
}

std::uint8_t to_byte(double intensity) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(intensity, 0.0, 1.0) * 255.0));
}

ImageTensor parse_ppm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') throw ConfigError("PPM: expected a binary P6 image");
  HeaderReader rd(bytes.substr(2));
  const std::size_t width = rd.number("width");
  const std::size_t height = rd.number("height");
  const std::size_t maxval = rd.number("maxval");
  if (width == 0 || height == 0) throw ConfigError("PPM: zero image dimension");
  if (maxval == 0 || maxval > 255) throw ConfigError("PPM: only maxval in 1..255 is supported");
  std::size_t pos = rd.pos() + 2;
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw ConfigError("PPM: malformed header");
  }
  ++pos;
  const std::size_t n = width * height;
  if (bytes.size() - pos < 3 * n) throw ConfigError("PPM: truncated pixel data");

  ImageTensor img;
  img.width = width;
  img.height = height;
  for (auto& plane : img.channels) plane.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      const auto v = static_cast<unsigned char>(bytes[pos + 3 * i + c]);
      if (v > maxval) throw ConfigError("PPM: sample exceeds maxval");
      img.channels[c][i] = v / static_cast<double>(maxval);
    }
  }
  return img;
}

std::string encode_ppm(const ImageTensor& image) {
  image.validate();
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  const std::size_t n = image.pixel_count();
  out.reserve(out.size() + 3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) out.push_back(static_cast<char>(to_byte(image.channels[c][i])));
  }
  return out;
}

std::string encode_pgm(std::size_t width, std::size_t height, std::span<const std::uint8_t> values,
                       std::uint8_t maxval) {
  if (width == 0 || height == 0 || values.size() != width * height) {
    throw DomainError("PGM: dimensions do not match the value count");
  }
  if (maxval == 0 || std::any_of(values.begin(), values.end(), [&](std::uint8_t v) { return v > maxval; })) {
    throw DomainError("PGM: value exceeds maxval");
  }
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n" + std::to_string(maxval) + "\n";
  out.append(reinterpret_cast<const char*>(values.data()), values.size());
  return out;
}

}  // namespace lsmix

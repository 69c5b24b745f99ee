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

#ifndef LSMIX_TEXT_IO_HPP_
#define LSMIX_TEXT_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lsmix {

// Shortest decimal representation that round-trips; "nan", "inf", "-inf"
// for non-finite values.
std::string format_double(double v);

// Throws ConfigError if the file cannot be read.
std::string read_file(const std::filesystem::path& path);
// Throws ConfigError if the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view contents);

// Single-column CSV of reals. A first line that does not parse as a number
// is treated as a header; blank lines are skipped. Throws ConfigError on a
// malformed row.
std::vector<double> parse_real_column(std::string_view text);
std::vector<int> parse_label_column(std::string_view text);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

}  // namespace lsmix

#endif  // LSMIX_TEXT_IO_HPP_

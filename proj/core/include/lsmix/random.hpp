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

#ifndef LSMIX_RANDOM_HPP_
#define LSMIX_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

#include "lsmix/family.hpp"

namespace lsmix {

// SplitMix64 output function: a bijective 64-bit avalanche mix.
std::uint64_t mix64(std::uint64_t x);

// Seed of the substream identified by `path` under `master`. Distinct paths
// give statistically independent streams; the derivation is a pure function
// of its inputs.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// Seeded 64-bit generator (mt19937_64) with the variate transforms used by
// the library. Every transform is an explicit algorithm so streams are
// reproducible across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform();
  // Y ~ f0 by inverse CDF.
  double standard(Family family);
  double normal() { return standard(Family::normal()); }
  // Student-t with integer df: Z / sqrt(sum of df squared normals / df).
  double student_t(int df);
  // Index k with probability weights[k]; weights must sum to one.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace lsmix

#endif  // LSMIX_RANDOM_HPP_

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

#ifndef LSMIX_INIT_HPP_
#define LSMIX_INIT_HPP_

#include <cstddef>
#include <cstdint>

#include "lsmix/mixture.hpp"
#include "lsmix/sample.hpp"

namespace lsmix {

// Start point number `index` of a multi-start K-component fit, shared by
// both estimators so they begin from identical mixtures.
//
// Start 0 puts the locations at the sample quantiles of levels (k - 1/2)/K;
// start s > 0 draws K sorted uniform levels from the substream (seed, s).
// Every start uses uniform weights and scales sd / K.
MixingDistribution initial_mixing(const SortedSample& sample, std::size_t k, std::size_t index,
                                  std::uint64_t seed);

// Throws DegenerateSampleError unless N > K and the sample has positive
// spread.
void require_fittable(const SortedSample& sample, std::size_t k);

}  // namespace lsmix

#endif  // LSMIX_INIT_HPP_

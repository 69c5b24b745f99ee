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

#include "lsmix/init.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "lsmix/errors.hpp"
#include "lsmix/random.hpp"

namespace lsmix {

void require_fittable(const SortedSample& sample, std::size_t k) {
  if (k == 0) throw DomainError("number of components must be at least 1");
  if (sample.size() <= k) {
    throw DegenerateSampleError("sample size " + std::to_string(sample.size()) +
                                " must exceed the number of components " + std::to_string(k));
  }
  if (!(sample.var_s() > 0.0)) throw DegenerateSampleError("all sample values are equal");
}

MixingDistribution initial_mixing(const SortedSample& sample, std::size_t k, std::size_t index,
                                  std::uint64_t seed) {
  std::vector<double> levels(k);
  if (index == 0) {
    for (std::size_t j = 0; j < k; ++j) levels[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(k);
  } else {
    Rng rng(derive_seed(seed, {index}));
    for (double& l : levels) l = rng.uniform();
    std::sort(levels.begin(), levels.end());
  }
  std::vector<double> locations(k);
  for (std::size_t j = 0; j < k; ++j) locations[j] = sample.quantile(levels[j]);
  const double scale = sample.sd() / static_cast<double>(k);
  return MixingDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)), std::move(locations),
                            std::vector<double>(k, scale));
}

}  // namespace lsmix

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

#ifndef LSMIX_FIT_REPORT_HPP_
#define LSMIX_FIT_REPORT_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "lsmix/family.hpp"
#include "lsmix/mixture.hpp"

namespace lsmix {

struct StartDiagnostics {
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string failure;  // empty unless the start threw
};

// Outcome of a multi-start fit.
//
// `objective` is the criterion the method optimizes: W_N(G) (>= 0) for
// "mwde", the penalized log-likelihood for "pmle".
struct FitReport {
  std::string method;
  Family family;
  MixingDistribution g_hat = MixingDistribution::single(0.0, 1.0);
  double objective = 0.0;
  std::size_t starts_tried = 0;
  bool converged = false;
  std::size_t iterations = 0;
  // Criterion value per iteration of the winning start.
  std::vector<double> trace;
  std::vector<StartDiagnostics> starts;
  // Some fitted weight fell below 1e-10.
  bool weight_collapse = false;

  std::string to_json() const;
};

}  // namespace lsmix

#endif  // LSMIX_FIT_REPORT_HPP_

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

#include "lsmix/fit_report.hpp"

#include "json.hpp"

namespace lsmix {

std::string FitReport::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["method"] = method;
  j["family"] = std::string(family.name());
  j["weights"] = std::vector<double>(g_hat.weights().begin(), g_hat.weights().end());
  j["locations"] = std::vector<double>(g_hat.locations().begin(), g_hat.locations().end());
  j["scales"] = std::vector<double>(g_hat.scales().begin(), g_hat.scales().end());
  j["objective"] = objective;
  j["starts_tried"] = starts_tried;
  j["converged"] = converged;
  j["iterations"] = iterations;
  j["weight_collapse"] = weight_collapse;
  j["trace"] = trace;
  ordered_json starts_json = ordered_json::array();
  for (const auto& s : starts) {
    ordered_json e;
    e["objective"] = s.objective;
    e["iterations"] = s.iterations;
    e["converged"] = s.converged;
    if (!s.failure.empty()) e["failure"] = s.failure;
    starts_json.push_back(e);
  }
  j["starts"] = starts_json;
  return j.dump(2);
}

}  // namespace lsmix

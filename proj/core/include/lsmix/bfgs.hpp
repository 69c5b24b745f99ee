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

#ifndef LSMIX_BFGS_HPP_
#define LSMIX_BFGS_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lsmix {

// Evaluates the objective at x and writes its gradient into grad (same
// length as x). A non-finite return value marks x as infeasible; the line
// search then backtracks.
using ObjectiveFn = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct BfgsOptions {
  std::size_t max_iter = 500;
  double grad_tol = 1e-6;  // on the infinity norm of the gradient
  double c1 = 1e-4;        // sufficient decrease
  double c2 = 0.9;         // curvature
  std::size_t max_line_search = 60;
};

struct BfgsResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> gradient;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  // Objective at the start point followed by the value after every accepted
  // step; nonincreasing.
  std::vector<double> trace;
  std::string stop_reason;
};

// Quasi-Newton BFGS on the inverse Hessian with a strong-Wolfe line search
// (bracketing + zoom with safeguarded cubic interpolation). The initial
// inverse Hessian is rescaled by s'y / y'y after the first step.
BfgsResult minimize_bfgs(const ObjectiveFn& fn, std::vector<double> x0,
                         const BfgsOptions& options = {});

}  // namespace lsmix

#endif  // LSMIX_BFGS_HPP_

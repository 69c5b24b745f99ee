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

#ifndef LSMIX_ERRORS_HPP_
#define LSMIX_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace lsmix {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The sample cannot support the requested fit (e.g. N <= K, constant data).
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

// The input is valid but the operation does not handle it.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed: quadrature, root bracketing, component
// starvation in EM.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration, data file, or serialized object.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lsmix

#endif  // LSMIX_ERRORS_HPP_

// Copyright 2026 The prefpool Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PREFPOOL_CORE_ERRORS_H_
#define PREFPOOL_CORE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace prefpool {

// Raised when a caller breaks an operation's precondition (dimension
// mismatch, out-of-range index, malformed structure).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// No feasible solution exists for the requested instance and weights.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured size cap (enumeration, exact solver, pool budget) would be
// exceeded.
class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The pool has fewer than two candidates with distinct feature vectors.
class DegeneratePoolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace prefpool

#endif  // PREFPOOL_CORE_ERRORS_H_

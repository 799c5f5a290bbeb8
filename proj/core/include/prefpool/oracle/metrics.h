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

#ifndef PREFPOOL_ORACLE_METRICS_H_
#define PREFPOOL_ORACLE_METRICS_H_

#include <optional>
#include <vector>

#include "prefpool/oracle/decision_maker.h"

namespace prefpool {

// Whether the problem's natural objective is a cost (minimized) or a
// utility (maximized). Utilities are always higher-is-better internally.
enum class ObjectiveSense { kMinimize, kMaximize };

// True-utility shortfall of the synthesized solution relative to the true
// optimum. For minimization problems it is measured on the cost scale
// c = -u: (c(y_hat) - c(y_star)) / c(y_star). Nonnegative. Throws
// ContractError when the denominator vanishes with a nonzero shortfall or
// when u_hat exceeds u_star_opt beyond rounding.
double RelativeRegret(ObjectiveSense sense, double u_star_opt, double u_hat);

// Indifferent between the synthesized solution and the optimum: the true
// gap is strictly below the DM's indifference margin.
bool DmSatisfied(const SimulatedDM& dm, double u_star_opt, double u_hat);

// First 1-based iteration whose mean regret is below `threshold`.
std::optional<int> QueriesToThreshold(const std::vector<double>& regret_curve,
                                      double threshold = 0.10);

struct MeanAndStderr {
  double mean = 0.0;
  // Sample standard deviation / sqrt(count); 0 for fewer than 2 values.
  double std_error = 0.0;
};

MeanAndStderr Summarize(const std::vector<double>& values);

}  // namespace prefpool

#endif  // PREFPOOL_ORACLE_METRICS_H_

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

#ifndef PREFPOOL_CORE_TYPES_H_
#define PREFPOOL_CORE_TYPES_H_

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace prefpool {

// Sub-objective evaluation of one candidate in one context. Always stored in
// higher-is-better orientation: minimization problems negate at the problem
// boundary so every consumer maximizes <w, phi>.
using FeatureVector = Eigen::VectorXd;

// One weight estimate, same dimension as the problem's FeatureVector.
using WeightVector = Eigen::VectorXd;

// Row-per-candidate feature matrix for one context.
using FeatureMatrix = Eigen::MatrixXd;

using ContextId = int;
using CandidateId = int;

enum class Label : int { kRight = -1, kIndifferent = 0, kLeft = 1 };

std::optional<Label> LabelFromInt(int value);
std::optional<Label> LabelFromString(const std::string& value);
const char* LabelName(Label label);

struct PreferenceObservation {
  ContextId context_id = 0;
  CandidateId left = 0;
  CandidateId right = 0;
  Label label = Label::kIndifferent;
  std::optional<double> response_seconds;
};

// Throws ContractError unless left != right.
void ValidateObservation(const PreferenceObservation& observation);

}  // namespace prefpool

#endif  // PREFPOOL_CORE_TYPES_H_

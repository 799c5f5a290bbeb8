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

#include "prefpool/core/types.h"

#include "prefpool/core/errors.h"

namespace prefpool {

std::optional<Label> LabelFromInt(int value) {
  switch (value) {
    case -1:
      return Label::kRight;
    case 0:
      return Label::kIndifferent;
    case 1:
      return Label::kLeft;
    default:
      return std::nullopt;
  }
}

std::optional<Label> LabelFromString(const std::string& value) {
  if (value == "left") return Label::kLeft;
  if (value == "right") return Label::kRight;
  if (value == "indifferent") return Label::kIndifferent;
  return std::nullopt;
}

const char* LabelName(Label label) {
  switch (label) {
    case Label::kLeft:
      return "left";
    case Label::kRight:
      return "right";
    case Label::kIndifferent:
      return "indifferent";
  }
  return "?";
}

void ValidateObservation(const PreferenceObservation& observation) {
  if (observation.left == observation.right) {
    throw ContractError("preference observation compares a candidate with "
                        "itself");
  }
}

}  // namespace prefpool

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

#ifndef PREFPOOL_LEARNING_DATASET_H_
#define PREFPOOL_LEARNING_DATASET_H_

#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "prefpool/core/types.h"

namespace prefpool {

// One checkpoint line: the observation plus its cached delta (absent for
// indifferent answers).
struct DatasetEntry {
  PreferenceObservation observation;
  std::optional<FeatureVector> delta;
};

void WriteDatasetCheckpoint(std::ostream& out,
                            const std::vector<DatasetEntry>& entries);
// Throws ConfigError on malformed lines or illegal labels.
std::vector<DatasetEntry> ReadDatasetCheckpoint(std::istream& in);

}  // namespace prefpool

#endif  // PREFPOOL_LEARNING_DATASET_H_

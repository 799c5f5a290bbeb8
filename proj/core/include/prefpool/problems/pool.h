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

#ifndef PREFPOOL_PROBLEMS_POOL_H_
#define PREFPOOL_PROBLEMS_POOL_H_

#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "prefpool/core/types.h"

namespace prefpool {

// Row of `features` maximizing <w, row>; ties go to the lowest id.
// Throws ContractError on an empty pool.
CandidateId PoolArgmax(const FeatureMatrix& features, const WeightVector& w);

// Same, restricted to rows with eligible[id] != 0. Throws InfeasibleError
// when nothing is eligible.
CandidateId PoolArgmax(const FeatureMatrix& features, const WeightVector& w,
                       const std::vector<char>& eligible);

// Stacks features_of(i) for i in [0, count) into a matrix.
FeatureMatrix BuildFeatureMatrix(
    int count, int dim, const std::function<FeatureVector(int)>& features_of);

// One JSON-lines pool entry. `structure` is the tour order or the option
// choices depending on `kind` ("tour" or "choice").
struct PoolRecord {
  CandidateId id = 0;
  std::vector<int> structure;
  FeatureVector features;
};

void WritePoolFile(std::ostream& out, const std::string& kind,
                   const std::vector<PoolRecord>& records);
// Throws ConfigError on malformed lines or a kind mismatch.
std::vector<PoolRecord> ReadPoolFile(std::istream& in, const std::string& kind);

}  // namespace prefpool

#endif  // PREFPOOL_PROBLEMS_POOL_H_

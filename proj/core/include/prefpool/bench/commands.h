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

#ifndef PREFPOOL_BENCH_COMMANDS_H_
#define PREFPOOL_BENCH_COMMANDS_H_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefpool/bench/experiment.h"
#include "prefpool/problems/pool.h"

namespace prefpool {

struct PoolArtifact {
  std::vector<PoolRecord> records;
  // "tour" or "choice".
  std::string kind;
  double generation_seconds = 0.0;
  bool budget_exhausted = false;
};

// Generates the relaxed or feasible pool of `config`. PC-TSP pools carry
// features of the first training instance; feasible PC-TSP pools are
// rejection-sampled against its prize quota.
PoolArtifact GeneratePool(const ExperimentConfig& config);

// Writes pool.jsonl and pool_manifest.json; returns the manifest.
nlohmann::json WritePoolArtifact(const ExperimentConfig& config,
                                 const PoolArtifact& pool,
                                 const std::string& dir);

struct UpdateFactorPoint {
  // u(y+) - u(y-) under the current weights.
  double x = 0.0;
  double mle = 0.0;
  double pp = 0.0;
  // Updates only on strict mispredictions (x < 0).
  double sp = 0.0;
  // Updates on x <= 0.
  double sp_inclusive = 0.0;
};

// Samples on the grid i / resolution for |x| <= limit.
std::vector<UpdateFactorPoint> UpdateFactorCurve(double limit = 6.0,
                                                 int resolution = 100);
std::string UpdateFactorCurveCsv(const std::vector<UpdateFactorPoint>& curve);

}  // namespace prefpool

#endif  // PREFPOOL_BENCH_COMMANDS_H_

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

#ifndef PREFPOOL_ORACLE_DECISION_MAKER_H_
#define PREFPOOL_ORACLE_DECISION_MAKER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefpool/core/random.h"
#include "prefpool/core/types.h"

namespace prefpool {

// Simulated decision maker: a hidden linear utility answered through a
// Bradley-Terry model with a hard indifference margin.
struct SimulatedDM {
  int id = 0;
  WeightVector w_true;
  // Rationality scale applied to the true-utility gap.
  double beta = 1.0;
  // Gaps strictly below this margin are answered with indifference.
  double eps_ind = 0.0;
  uint64_t seed = 0;
};

// Throws ContractError unless beta > 0, eps_ind >= 0 and w_true is finite.
void ValidateDM(const SimulatedDM& dm);

// Weights ~ N(25, (25/3)^2), then all but ceil(0.2 n) uniformly chosen
// coordinates zeroed.
WeightVector SampleConfigWeights(int dim, RandomSource& rng);
// Symmetric Dirichlet(concentration) over `dim` coordinates.
WeightVector SampleTspWeights(int dim, RandomSource& rng,
                              double concentration = 100.0);

SimulatedDM SampleConfigDM(int id, int dim, RandomSource& rng);
SimulatedDM SampleTspDM(int id, RandomSource& rng, int dim = 5);

// +1 (first preferred), -1 (second preferred) or 0 (indifferent).
Label Respond(const SimulatedDM& dm, const FeatureVector& phi_first,
              const FeatureVector& phi_second, RandomSource& rng);

// Probability that Respond returns kLeft, for a gap of d.
double ProbabilityFirst(const SimulatedDM& dm, double gap);

// Roster file: JSON list of {id, w_true, beta, eps_ind, seed}. A null
// eps_ind means "derive from the pool per instance".
nlohmann::json RosterToJson(const std::vector<SimulatedDM>& roster,
                            bool auto_margin);
std::vector<SimulatedDM> RosterFromJson(const nlohmann::json& doc);

}  // namespace prefpool

#endif  // PREFPOOL_ORACLE_DECISION_MAKER_H_

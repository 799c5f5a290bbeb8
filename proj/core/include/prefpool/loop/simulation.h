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

#ifndef PREFPOOL_LOOP_SIMULATION_H_
#define PREFPOOL_LOOP_SIMULATION_H_

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "prefpool/core/random.h"
#include "prefpool/loop/session.h"
#include "prefpool/oracle/decision_maker.h"

namespace prefpool {

struct ResponseModelConfig {
  // Bradley-Terry rationality on the true-utility gap.
  double beta = 1.0;
  // Indifference margin as a fraction of the DM's true-utility range over
  // the pool of each context. Ignored when fixed_margin is set.
  double margin_fraction = 0.01;
  std::optional<double> fixed_margin;
};

// The DM as seen in one context: same weights, context-specific margin.
struct ContextualDM {
  SimulatedDM dm;
  // Utility of the true optimum (or best-in-pool proxy).
  std::optional<double> u_star_opt;
};

// Simulated decision maker answering from a private random stream.
class SimulatedAnswerSource : public AnswerSource {
 public:
  SimulatedAnswerSource(SimulatedDM dm, ResponseModelConfig response);

  std::optional<Label> Answer(const Session& session,
                              const PendingQuery& query) override;

  // Margin-adjusted DM for `context`, computed once.
  const SimulatedDM& ForContext(const Task& task, ContextId context);

 private:
  SimulatedDM dm_;
  ResponseModelConfig response_;
  RandomSource rng_;
  std::map<ContextId, SimulatedDM> per_context_;
};

struct EvalPoint {
  int iteration = 0;
  // Per test context.
  std::vector<double> regrets;
  std::vector<char> satisfied;
  double regret_mean = 0.0;
  double regret_stderr = 0.0;
  double satisfied_frac = 0.0;
  // Cumulative indifferent answers so far.
  int indifference_count = 0;
  // Regret measured against the best pool member instead of the optimum.
  bool proxy = false;
};

struct DmRunResult {
  int dm_id = 0;
  std::vector<EvalPoint> evals;
  std::vector<IterationTiming> timings;
  int exchanges = 0;
  int indifferent = 0;
  int dataset_size = 0;
  WeightVector final_mean;
};

// Runs the full elicitation loop for one simulated DM and evaluates the
// ensemble-mean synthesis on every test context at each evaluation tick.
DmRunResult RunSimulatedDm(std::shared_ptr<const Task> task,
                           const SimulatedDM& dm, const LoopConfig& config,
                           const ResponseModelConfig& response,
                           uint64_t session_seed);

}  // namespace prefpool

#endif  // PREFPOOL_LOOP_SIMULATION_H_

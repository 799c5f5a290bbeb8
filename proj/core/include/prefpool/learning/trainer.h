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

#ifndef PREFPOOL_LEARNING_TRAINER_H_
#define PREFPOOL_LEARNING_TRAINER_H_

#include <cstdint>
#include <vector>

#include "prefpool/core/random.h"
#include "prefpool/core/types.h"
#include "prefpool/core/utility.h"
#include "prefpool/learning/update_rules.h"

namespace prefpool {

struct BatchConfig {
  int epochs = 4;
  int batch_size = 4;
  // Restart each retrain from the current weights instead of the member's
  // t=0 initialization.
  bool warm_start = false;
};

struct LearnerConfig {
  UpdateRule rule = UpdateRule::kMleBatch;
  double learning_rate = 1.0;
  BatchConfig batch;
  // Root of the per-(epoch, member) shuffle seeds.
  uint64_t shuffle_seed = 0;
};

// Throws ContractError on a non-positive learning rate, epoch count or batch
// size.
void ValidateLearnerConfig(const LearnerConfig& config);

// delta = phi(winner) - phi(loser); only strict preferences produce one.
struct TrainingExample {
  FeatureVector delta;
};

// Mini-batch gradient descent on the mean Bradley-Terry loss, starting from
// w_init. Each epoch reshuffles with a seed derived from (shuffle_seed,
// epoch, member); the last batch of an epoch may be short.
WeightVector BatchRetrain(const std::vector<TrainingExample>& dataset,
                          const WeightVector& w_init,
                          const LearnerConfig& config, int member = 0);

// m members drawn i.i.d. from N(1, I_dim).
Ensemble InitializeEnsemble(int size, int dim, RandomSource& rng);

// Applies `config.rule` to every member. Online rules take one step on
// `latest`; the batch rule retrains each member on the whole dataset.
Ensemble EnsembleUpdate(const Ensemble& ensemble,
                        const std::vector<TrainingExample>& dataset,
                        const TrainingExample& latest,
                        const LearnerConfig& config);

}  // namespace prefpool

#endif  // PREFPOOL_LEARNING_TRAINER_H_

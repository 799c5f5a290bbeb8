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

#include "prefpool/learning/trainer.h"

#include <algorithm>
#include <numeric>

#include "prefpool/core/errors.h"

namespace prefpool {

void ValidateLearnerConfig(const LearnerConfig& config) {
  if (!(config.learning_rate > 0.0)) {
    throw ContractError("learning rate must be > 0");
  }
  if (config.batch.epochs < 1 || config.batch.batch_size < 1) {
    throw ContractError("epochs and batch size must be >= 1");
  }
}

WeightVector BatchRetrain(const std::vector<TrainingExample>& dataset,
                          const WeightVector& w_init,
                          const LearnerConfig& config, int member) {
  ValidateLearnerConfig(config);
  WeightVector w = w_init;
  if (dataset.empty()) return w;
  std::vector<size_t> order(dataset.size());
  const size_t batch = static_cast<size_t>(config.batch.batch_size);
  FeatureVector grad(w.size());
  for (int epoch = 0; epoch < config.batch.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    RandomSource rng(config.shuffle_seed,
                     MixSeed(static_cast<uint64_t>(epoch),
                             static_cast<uint64_t>(member)));
    rng.Shuffle(order);
    for (size_t start = 0; start < order.size(); start += batch) {
      const size_t end = std::min(order.size(), start + batch);
      grad.setZero();
      for (size_t i = start; i < end; ++i) {
        grad += NllGrad(w, dataset[order[i]].delta);
      }
      w -= (config.learning_rate / static_cast<double>(end - start)) * grad;
    }
  }
  return w;
}

Ensemble InitializeEnsemble(int size, int dim, RandomSource& rng) {
  if (size < 1 || dim < 1) {
    throw ContractError("ensemble needs m >= 1 and dim >= 1");
  }
  Eigen::MatrixXd members(size, dim);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < dim; ++j) members(i, j) = rng.Normal(1.0, 1.0);
  }
  return Ensemble(std::move(members));
}

Ensemble EnsembleUpdate(const Ensemble& ensemble,
                        const std::vector<TrainingExample>& dataset,
                        const TrainingExample& latest,
                        const LearnerConfig& config) {
  ValidateLearnerConfig(config);
  Ensemble next = ensemble;
  for (int i = 0; i < ensemble.size(); ++i) {
    if (config.rule == UpdateRule::kMleBatch) {
      const WeightVector start = config.batch.warm_start
                                     ? ensemble.member(i)
                                     : ensemble.initial_member(i);
      next.set_member(i, BatchRetrain(dataset, start, config, i));
    } else {
      next.set_member(i, OnlineStep(config.rule, ensemble.member(i),
                                    latest.delta, config.learning_rate));
    }
  }
  return next;
}

}  // namespace prefpool

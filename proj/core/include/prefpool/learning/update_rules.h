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

#ifndef PREFPOOL_LEARNING_UPDATE_RULES_H_
#define PREFPOOL_LEARNING_UPDATE_RULES_H_

#include <optional>
#include <string>

#include "prefpool/core/types.h"

namespace prefpool {

// All rules share the step w <- w + lr * alpha * delta and differ only in the
// update factor alpha, where delta = phi(winner) - phi(loser):
//   structured perceptron  alpha = 1 if <w, delta> < 0 else 0
//   preference perceptron  alpha = 1
//   maximum likelihood     alpha = sigmoid(-<w, delta>)
enum class UpdateRule { kSpOnline, kPpOnline, kMleOnline, kMleBatch };

std::optional<UpdateRule> ParseUpdateRule(const std::string& name);
std::string UpdateRuleName(UpdateRule rule);

// Branch-stable logistic function.
double Sigmoid(double x);

// Update factor from the margin m = <w, delta>; always in [0, 1].
double UpdateFactorFromMargin(UpdateRule rule, double margin);
double UpdateFactor(UpdateRule rule, const WeightVector& w,
                    const FeatureVector& delta);

WeightVector OnlineStep(UpdateRule rule, const WeightVector& w,
                        const FeatureVector& delta, double learning_rate);

// Bradley-Terry negative log-likelihood of "winner beats loser":
// -log sigmoid(<w, delta>), evaluated as softplus(-<w, delta>).
double Nll(const WeightVector& w, const FeatureVector& delta);

// Gradient of Nll with respect to w: -sigmoid(-<w, delta>) * delta.
FeatureVector NllGrad(const WeightVector& w, const FeatureVector& delta);

}  // namespace prefpool

#endif  // PREFPOOL_LEARNING_UPDATE_RULES_H_

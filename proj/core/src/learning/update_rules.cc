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

#include "prefpool/learning/update_rules.h"

#include <cmath>

#include "prefpool/core/errors.h"
#include "prefpool/core/utility.h"

namespace prefpool {

std::optional<UpdateRule> ParseUpdateRule(const std::string& name) {
  if (name == "sp") return UpdateRule::kSpOnline;
  if (name == "pp") return UpdateRule::kPpOnline;
  if (name == "mle") return UpdateRule::kMleOnline;
  if (name == "mle-batch") return UpdateRule::kMleBatch;
  return std::nullopt;
}

std::string UpdateRuleName(UpdateRule rule) {
  switch (rule) {
    case UpdateRule::kSpOnline:
      return "sp";
    case UpdateRule::kPpOnline:
      return "pp";
    case UpdateRule::kMleOnline:
      return "mle";
    case UpdateRule::kMleBatch:
      return "mle-batch";
  }
  return "?";
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double UpdateFactorFromMargin(UpdateRule rule, double margin) {
  switch (rule) {
    case UpdateRule::kSpOnline:
      return margin < 0.0 ? 1.0 : 0.0;
    case UpdateRule::kPpOnline:
      return 1.0;
    case UpdateRule::kMleOnline:
    case UpdateRule::kMleBatch:
      return Sigmoid(-margin);
  }
  return 0.0;
}

double UpdateFactor(UpdateRule rule, const WeightVector& w,
                    const FeatureVector& delta) {
  return UpdateFactorFromMargin(rule, Utility(w, delta));
}

WeightVector OnlineStep(UpdateRule rule, const WeightVector& w,
                        const FeatureVector& delta, double learning_rate) {
  const double alpha = UpdateFactor(rule, w, delta);
  if (alpha == 0.0) return w;
  return w + (learning_rate * alpha) * delta;
}

double Nll(const WeightVector& w, const FeatureVector& delta) {
  const double x = -Utility(w, delta);
  // softplus(x) = log(1 + e^x)
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

FeatureVector NllGrad(const WeightVector& w, const FeatureVector& delta) {
  return -Sigmoid(-Utility(w, delta)) * delta;
}

}  // namespace prefpool

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

#include "prefpool/oracle/decision_maker.h"

#include <cmath>
#include <numeric>

#include "prefpool/core/errors.h"
#include "prefpool/core/utility.h"
#include "prefpool/learning/update_rules.h"

namespace prefpool {

void ValidateDM(const SimulatedDM& dm) {
  if (!(dm.beta > 0.0)) throw ContractError("DM beta must be > 0");
  if (!(dm.eps_ind >= 0.0)) throw ContractError("DM eps_ind must be >= 0");
  CheckFinite(dm.w_true, "DM weights");
}

WeightVector SampleConfigWeights(int dim, RandomSource& rng) {
  if (dim < 1) throw ContractError("weight dimension must be >= 1");
  const int keep = static_cast<int>(std::ceil(0.2 * dim));
  while (true) {
    WeightVector w(dim);
    for (int i = 0; i < dim; ++i) w[i] = rng.Normal(25.0, 25.0 / 3.0);
    std::vector<int> idx(dim);
    std::iota(idx.begin(), idx.end(), 0);
    rng.Shuffle(idx);
    for (int i = keep; i < dim; ++i) w[idx[i]] = 0.0;
    if (w.cwiseAbs().maxCoeff() > 0.0) return w;
  }
}

WeightVector SampleTspWeights(int dim, RandomSource& rng,
                              double concentration) {
  if (dim < 1) throw ContractError("weight dimension must be >= 1");
  WeightVector w(dim);
  for (int i = 0; i < dim; ++i) w[i] = rng.Gamma(concentration);
  return w / w.sum();
}

SimulatedDM SampleConfigDM(int id, int dim, RandomSource& rng) {
  SimulatedDM dm;
  dm.id = id;
  dm.w_true = SampleConfigWeights(dim, rng);
  dm.seed = rng.engine()();
  return dm;
}

SimulatedDM SampleTspDM(int id, RandomSource& rng, int dim) {
  SimulatedDM dm;
  dm.id = id;
  dm.w_true = SampleTspWeights(dim, rng);
  dm.seed = rng.engine()();
  return dm;
}

double ProbabilityFirst(const SimulatedDM& dm, double gap) {
  if (std::abs(gap) < dm.eps_ind) return 0.0;
  return Sigmoid(dm.beta * gap);
}

Label Respond(const SimulatedDM& dm, const FeatureVector& phi_first,
              const FeatureVector& phi_second, RandomSource& rng) {
  const double gap =
      Utility(dm.w_true, phi_first) - Utility(dm.w_true, phi_second);
  if (std::abs(gap) < dm.eps_ind) return Label::kIndifferent;
  return rng.Uniform() < Sigmoid(dm.beta * gap) ? Label::kLeft : Label::kRight;
}

nlohmann::json RosterToJson(const std::vector<SimulatedDM>& roster,
                            bool auto_margin) {
  nlohmann::json doc = nlohmann::json::array();
  for (const SimulatedDM& dm : roster) {
    nlohmann::json entry;
    entry["id"] = dm.id;
    entry["w_true"] = std::vector<double>(dm.w_true.data(),
                                          dm.w_true.data() + dm.w_true.size());
    entry["beta"] = dm.beta;
    entry["eps_ind"] = auto_margin ? nlohmann::json(nullptr)
                                   : nlohmann::json(dm.eps_ind);
    entry["seed"] = dm.seed;
    doc.push_back(entry);
  }
  return doc;
}

std::vector<SimulatedDM> RosterFromJson(const nlohmann::json& doc) {
  std::vector<SimulatedDM> roster;
  try {
    for (const auto& entry : doc) {
      SimulatedDM dm;
      dm.id = entry.at("id").get<int>();
      const auto w = entry.at("w_true").get<std::vector<double>>();
      dm.w_true = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
      dm.beta = entry.at("beta").get<double>();
      dm.eps_ind =
          entry.at("eps_ind").is_null() ? 0.0 : entry.at("eps_ind").get<double>();
      dm.seed = entry.at("seed").get<uint64_t>();
      ValidateDM(dm);
      roster.push_back(std::move(dm));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed roster: ") + e.what());
  } catch (const ContractError& e) {
    throw ConfigError(std::string("invalid roster: ") + e.what());
  }
  return roster;
}

}  // namespace prefpool

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

#include "prefpool/loop/task.h"

#include <chrono>
#include <limits>

#include "prefpool/core/errors.h"
#include "prefpool/core/utility.h"
#include "prefpool/problems/pool.h"

namespace prefpool {
namespace {

constexpr uint64_t kInstanceStream = 1;
constexpr uint64_t kPoolStream = 2;
constexpr uint64_t kClusterStream = 3;

const char* const kTspObjectiveNames[kTspFeatureDim] = {
    "distance", "duration", "fuel", "familiarity", "penalty"};

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

std::optional<ProblemKind> ParseProblemKind(const std::string& name) {
  if (name == "pctsp") return ProblemKind::kPcTsp;
  if (name == "config") return ProblemKind::kConfig;
  return std::nullopt;
}

std::string ProblemKindName(ProblemKind kind) {
  return kind == ProblemKind::kPcTsp ? "pctsp" : "config";
}

std::optional<PoolKind> ParsePoolKind(const std::string& name) {
  if (name == "relaxed") return PoolKind::kRelaxed;
  if (name == "feasible") return PoolKind::kFeasible;
  return std::nullopt;
}

std::string PoolKindName(PoolKind kind) {
  return kind == PoolKind::kRelaxed ? "relaxed" : "feasible";
}

std::shared_ptr<const FeatureMatrix> Task::PoolFeatures(
    ContextId context) const {
  std::lock_guard lock(features_mutex_);
  auto it = features_.find(context);
  if (it != features_.end()) return it->second;
  auto features =
      std::make_shared<const FeatureMatrix>(ComputePoolFeatures(context));
  features_.emplace(context, features);
  return features;
}

std::shared_ptr<const ClusteredPool> Task::Clustered(ContextId context,
                                                     int k) const {
  if (k < 1) k = 1;
  ClusterCache* cache;
  {
    std::lock_guard lock(features_mutex_);
    auto& slot = clusters_[k];
    if (!slot) slot = std::make_unique<ClusterCache>();
    cache = slot.get();
  }
  return cache->GetOrBuild(context, [&] {
    auto features = PoolFeatures(context);
    if (k == 1) return UnclusteredPool(features);
    RandomSource rng(seed_, MixSeed(kClusterStream,
                                    MixSeed(static_cast<uint64_t>(context),
                                            static_cast<uint64_t>(k))));
    return KMeansPlusPlus(features, k, rng);
  });
}

TspTask::TspTask(const TspTaskConfig& config)
    : Task(config.seed), config_(config) {
  if (config_.nodes < 2) throw ContractError("PC-TSP needs at least 2 nodes");
  if (config_.train_instances < 1 || config_.test_instances < 1) {
    throw ContractError("PC-TSP needs at least one train and test instance");
  }
  if (config_.pool_size < 2) throw ContractError("pool size must be >= 2");
  const int total = config_.train_instances + config_.test_instances;
  if (config_.instances) {
    if (static_cast<int>(config_.instances->size()) != total) {
      throw ContractError("instance list does not match train+test counts");
    }
    for (const TspInstance& inst : *config_.instances) {
      ValidateInstance(inst);
      if (inst.node_count != config_.nodes) {
        throw ContractError("instance node count differs from the task's");
      }
    }
    instances_ = *config_.instances;
    config_.instances.reset();
  } else {
    RandomSource root(seed_, kInstanceStream);
    for (int c = 0; c < total; ++c) {
      RandomSource rng = root.Derive(static_cast<uint64_t>(c));
      instances_.push_back(
          TspGenerateInstance(config_.nodes, rng, config_.generator));
    }
  }
  for (int c = 0; c < config_.train_instances; ++c) train_.push_back(c);
  for (int c = config_.train_instances; c < total; ++c) test_.push_back(c);

  const auto start = std::chrono::steady_clock::now();
  if (config_.pool_tours) {
    tours_ = *config_.pool_tours;
    config_.pool_tours.reset();
    for (const Tour& t : tours_) ValidateTour(config_.nodes, t);
    if (tours_.size() < 2) throw ContractError("pool needs >= 2 candidates");
  } else {
    RandomSource rng(seed_, kPoolStream);
    auto sampled = TspSampleRelaxed(config_.nodes, rng, config_.pool_size);
    tours_ = std::move(sampled.items);
    pool_exhausted_ = sampled.budget_exhausted;
  }
  for (int c = 0; c < total; ++c) PoolFeatures(c);
  pool_seconds_ = SecondsSince(start);
}

FeatureMatrix TspTask::ComputePoolFeatures(ContextId context) const {
  const TspInstance& inst = instances_.at(context);
  return BuildFeatureMatrix(pool_size(), kTspFeatureDim, [&](int i) {
    return TspFeatures(inst, tours_[i]);
  });
}

Synthesis TspTask::Synthesize(ContextId context, const WeightVector& w) const {
  const TspInstance& inst = instances_.at(context);
  Synthesis out;
  out.context = context;
  if (exact_synthesis()) {
    Tour tour = TspSolveExact(inst, w, config_.solver);
    out.features = TspFeatures(inst, tour);
    out.structure = std::move(tour.visit_order);
    out.solver = "exact";
    return out;
  }
  std::vector<char> feasible(tours_.size());
  for (size_t i = 0; i < tours_.size(); ++i) {
    feasible[i] = TspIsFeasible(inst, tours_[i]) ? 1 : 0;
  }
  const CandidateId best = PoolArgmax(*PoolFeatures(context), w, feasible);
  out.structure = tours_[best].visit_order;
  out.features = PoolFeatures(context)->row(best).transpose();
  out.solver = "pool";
  return out;
}

std::vector<BreakdownEntry> TspTask::Breakdown(
    ContextId context, const std::vector<int>& structure) const {
  const auto raw = TspRawObjectives(instances_.at(context), Tour{structure});
  std::vector<BreakdownEntry> out;
  for (int l = 0; l < kTspFeatureDim; ++l) {
    out.push_back({kTspObjectiveNames[l], raw[l]});
  }
  return out;
}

nlohmann::json TspTask::Render(ContextId context,
                               const std::vector<int>& structure) const {
  const TspInstance& inst = instances_.at(context);
  const Tour tour{structure};
  ValidateTour(inst, tour);
  nlohmann::json path = nlohmann::json::array();
  std::vector<char> visited(inst.node_count, 0);
  for (int node : structure) {
    visited[node] = 1;
    path.push_back({{"node", node},
                    {"x", inst.coords[node].x},
                    {"y", inst.coords[node].y}});
  }
  nlohmann::json skipped = nlohmann::json::array();
  for (int i = 0; i < inst.node_count; ++i) {
    if (visited[i]) continue;
    skipped.push_back(
        {{"node", i}, {"x", inst.coords[i].x}, {"y", inst.coords[i].y}});
  }
  return {{"kind", "tour"},
          {"depot", 0},
          {"path", path},
          {"skipped", skipped},
          {"prize", TspCollectedPrize(inst, tour)},
          {"prize_quota", inst.prize_quota},
          {"feasible", TspIsFeasible(inst, tour)}};
}

std::vector<std::string> TspTask::FeatureNames() const {
  return {std::begin(kTspObjectiveNames), std::end(kTspObjectiveNames)};
}

ConfigTask::ConfigTask(const ConfigTaskConfig& config)
    : Task(config.seed), config_(config) {
  if (config_.pool_size < 2) throw ContractError("pool size must be >= 2");
  const ConfigCatalog& cat = config_.catalog;
  const bool fits = cat.product_size() <= config_.enumeration_cap;
  const auto start = std::chrono::steady_clock::now();
  const bool pool_items_absent = !config_.pool_items;
  if (config_.pool_items) {
    pool_ = std::move(*config_.pool_items);
    config_.pool_items.reset();
    for (const ConfigAssignment& y : pool_) cat.Validate(y);
    if (pool_.size() < 2) throw ContractError("pool needs >= 2 candidates");
  } else if (config_.pool == PoolKind::kFeasible) {
    // Throws CapExceededError for oversized catalogs.
    pool_ = ConfigEnumerateFeasible(cat, config_.enumeration_cap);
  } else {
    RandomSource rng(seed_, kPoolStream);
    auto sampled = ConfigSampleRelaxed(cat, rng, config_.pool_size);
    pool_ = std::move(sampled.items);
    pool_exhausted_ = sampled.budget_exhausted;
  }
  PoolFeatures(0);
  pool_seconds_ = SecondsSince(start);
  if (config_.pool == PoolKind::kFeasible && pool_items_absent) {
    feasible_ = pool_;
  } else if (fits) {
    feasible_ = ConfigEnumerateFeasible(cat, config_.enumeration_cap);
  }
}

FeatureMatrix ConfigTask::ComputePoolFeatures(ContextId context) const {
  if (context != 0) throw ContractError("configuration task has one context");
  return BuildFeatureMatrix(pool_size(), feature_dim(), [&](int i) {
    return ConfigFeatures(catalog(), pool_[i]);
  });
}

Synthesis ConfigTask::Synthesize(ContextId context,
                                 const WeightVector& w) const {
  if (context != 0) throw ContractError("configuration task has one context");
  Synthesis out;
  out.context = 0;
  if (feasible_) {
    if (feasible_->empty()) {
      throw InfeasibleError("catalog has no feasible configuration");
    }
    const ConfigAssignment* best = nullptr;
    double best_u = -std::numeric_limits<double>::infinity();
    for (const ConfigAssignment& y : *feasible_) {
      const double u = ConfigUtility(catalog(), w, y);
      if (best == nullptr || u > best_u) {
        best = &y;
        best_u = u;
      }
    }
    out.structure = best->choice;
    out.features = ConfigFeatures(catalog(), *best);
    out.solver = "exact";
    return out;
  }
  std::vector<char> feasible(pool_.size());
  for (size_t i = 0; i < pool_.size(); ++i) {
    feasible[i] = catalog().IsFeasible(pool_[i]) ? 1 : 0;
  }
  const CandidateId best = PoolArgmax(*PoolFeatures(0), w, feasible);
  out.structure = pool_[best].choice;
  out.features = PoolFeatures(0)->row(best).transpose();
  out.solver = "pool";
  return out;
}

std::vector<BreakdownEntry> ConfigTask::Breakdown(
    ContextId, const std::vector<int>& structure) const {
  const ConfigAssignment y{structure};
  catalog().Validate(y);
  std::vector<BreakdownEntry> out;
  for (int c = 0; c < catalog().component_count(); ++c) {
    const ConfigComponent& comp = catalog().components()[c];
    for (int o = 0; o < static_cast<int>(comp.options.size()); ++o) {
      out.push_back({comp.name + ":" + comp.options[o].name,
                     y.choice[c] == o ? 1.0 : 0.0});
    }
  }
  out.push_back({"price", catalog().TotalPrice(y)});
  return out;
}

nlohmann::json ConfigTask::Render(ContextId,
                                  const std::vector<int>& structure) const {
  const ConfigAssignment y{structure};
  catalog().Validate(y);
  nlohmann::json options = nlohmann::json::array();
  for (int c = 0; c < catalog().component_count(); ++c) {
    const ConfigComponent& comp = catalog().components()[c];
    const ConfigOption& opt = comp.options[y.choice[c]];
    options.push_back(
        {{"component", comp.name}, {"option", opt.name}, {"price", opt.price}});
  }
  return {{"kind", "config"},
          {"options", options},
          {"price", catalog().TotalPrice(y)},
          {"feasible", catalog().IsFeasible(y)}};
}

std::vector<std::string> ConfigTask::FeatureNames() const {
  std::vector<std::string> names;
  for (const ConfigComponent& comp : catalog().components()) {
    for (const ConfigOption& opt : comp.options) {
      names.push_back(comp.name + ":" + opt.name);
    }
  }
  names.push_back("price");
  return names;
}

}  // namespace prefpool

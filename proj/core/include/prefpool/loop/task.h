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

#ifndef PREFPOOL_LOOP_TASK_H_
#define PREFPOOL_LOOP_TASK_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefpool/core/types.h"
#include "prefpool/oracle/metrics.h"
#include "prefpool/problems/config.h"
#include "prefpool/problems/tsp.h"
#include "prefpool/problems/tsp_solver.h"
#include "prefpool/selection/kmeans.h"

namespace prefpool {

enum class ProblemKind { kPcTsp, kConfig };
enum class PoolKind { kRelaxed, kFeasible };

std::optional<ProblemKind> ParseProblemKind(const std::string& name);
std::string ProblemKindName(ProblemKind kind);
std::optional<PoolKind> ParsePoolKind(const std::string& name);
std::string PoolKindName(PoolKind kind);

// A synthesized solution and how it was obtained.
struct Synthesis {
  ContextId context = 0;
  // Tour visit order or option choices.
  std::vector<int> structure;
  FeatureVector features;
  // "exact" (solver or full enumeration) or "pool" (best feasible pool
  // member).
  std::string solver;
};

struct BreakdownEntry {
  std::string name;
  double value = 0.0;
};

// One problem family: its contexts (instances), the precomputed candidate
// pool shared by every context, and synthesis. Immutable after
// construction apart from internal caches, so one task may back many
// concurrent sessions.
class Task {
 public:
  virtual ~Task() = default;

  virtual ProblemKind kind() const = 0;
  virtual ObjectiveSense sense() const = 0;
  virtual int feature_dim() const = 0;
  virtual const std::vector<ContextId>& train_contexts() const = 0;
  virtual const std::vector<ContextId>& test_contexts() const = 0;
  virtual int pool_size() const = 0;
  virtual std::vector<int> PoolStructure(CandidateId id) const = 0;
  // Whether Synthesize returns true optima (as opposed to pool proxies).
  virtual bool exact_synthesis() const = 0;

  // argmax of <w, phi> over the feasible set of `context`.
  virtual Synthesis Synthesize(ContextId context,
                               const WeightVector& w) const = 0;
  // Sub-objective values in human-readable units (costs not negated).
  virtual std::vector<BreakdownEntry> Breakdown(
      ContextId context, const std::vector<int>& structure) const = 0;
  virtual nlohmann::json Render(ContextId context,
                                const std::vector<int>& structure) const = 0;
  // One label per feature coordinate.
  virtual std::vector<std::string> FeatureNames() const = 0;

  // Feature matrix of the whole pool in `context`; computed once.
  std::shared_ptr<const FeatureMatrix> PoolFeatures(ContextId context) const;
  // Pool of `context` clustered into at most k groups (k <= 1: one group).
  // Cached per (context, k); clustering seeds derive from the task seed.
  std::shared_ptr<const ClusteredPool> Clustered(ContextId context,
                                                 int k) const;

  uint64_t seed() const { return seed_; }
  double pool_generation_seconds() const { return pool_seconds_; }
  bool pool_budget_exhausted() const { return pool_exhausted_; }

 protected:
  explicit Task(uint64_t seed) : seed_(seed) {}
  virtual FeatureMatrix ComputePoolFeatures(ContextId context) const = 0;

  uint64_t seed_;
  double pool_seconds_ = 0.0;
  bool pool_exhausted_ = false;

 private:
  mutable std::mutex features_mutex_;
  mutable std::map<ContextId, std::shared_ptr<const FeatureMatrix>> features_;
  mutable std::map<int, std::unique_ptr<ClusterCache>> clusters_;
};

struct TspTaskConfig {
  int nodes = 10;
  int train_instances = 50;
  int test_instances = 10;
  int pool_size = 10'000;
  TspGeneratorConfig generator;
  ExactSolverConfig solver;
  uint64_t seed = 0;
  // Use these tours instead of sampling a pool.
  std::optional<std::vector<Tour>> pool_tours;
  // Use these instances (train then test) instead of generating them.
  std::optional<std::vector<TspInstance>> instances;
};

class TspTask : public Task {
 public:
  // Generates instances and the relaxed tour pool. Throws ContractError on
  // invalid sizes.
  explicit TspTask(const TspTaskConfig& config);

  ProblemKind kind() const override { return ProblemKind::kPcTsp; }
  ObjectiveSense sense() const override { return ObjectiveSense::kMinimize; }
  int feature_dim() const override { return kTspFeatureDim; }
  const std::vector<ContextId>& train_contexts() const override {
    return train_;
  }
  const std::vector<ContextId>& test_contexts() const override {
    return test_;
  }
  int pool_size() const override { return static_cast<int>(tours_.size()); }
  std::vector<int> PoolStructure(CandidateId id) const override {
    return tours_.at(id).visit_order;
  }
  bool exact_synthesis() const override {
    return config_.nodes <= config_.solver.max_nodes;
  }
  Synthesis Synthesize(ContextId context,
                       const WeightVector& w) const override;
  std::vector<BreakdownEntry> Breakdown(
      ContextId context, const std::vector<int>& structure) const override;
  nlohmann::json Render(ContextId context,
                        const std::vector<int>& structure) const override;
  std::vector<std::string> FeatureNames() const override;

  const TspInstance& instance(ContextId context) const {
    return instances_.at(context);
  }
  const std::vector<Tour>& tours() const { return tours_; }
  const TspTaskConfig& config() const { return config_; }

 protected:
  FeatureMatrix ComputePoolFeatures(ContextId context) const override;

 private:
  TspTaskConfig config_;
  std::vector<TspInstance> instances_;
  std::vector<Tour> tours_;
  std::vector<ContextId> train_;
  std::vector<ContextId> test_;
};

struct ConfigTaskConfig {
  ConfigCatalog catalog;
  PoolKind pool = PoolKind::kRelaxed;
  int pool_size = 10'000;
  uint64_t enumeration_cap = kDefaultEnumerationCap;
  uint64_t seed = 0;
  // Use these assignments instead of building a pool; `pool` is ignored.
  std::optional<std::vector<ConfigAssignment>> pool_items;
};

// Single-instance configuration task; context 0 is both train and test.
class ConfigTask : public Task {
 public:
  explicit ConfigTask(const ConfigTaskConfig& config);

  ProblemKind kind() const override { return ProblemKind::kConfig; }
  ObjectiveSense sense() const override { return ObjectiveSense::kMaximize; }
  int feature_dim() const override { return catalog().feature_dim(); }
  const std::vector<ContextId>& train_contexts() const override {
    return contexts_;
  }
  const std::vector<ContextId>& test_contexts() const override {
    return contexts_;
  }
  int pool_size() const override { return static_cast<int>(pool_.size()); }
  std::vector<int> PoolStructure(CandidateId id) const override {
    return pool_.at(id).choice;
  }
  bool exact_synthesis() const override { return feasible_.has_value(); }
  Synthesis Synthesize(ContextId context,
                       const WeightVector& w) const override;
  std::vector<BreakdownEntry> Breakdown(
      ContextId context, const std::vector<int>& structure) const override;
  nlohmann::json Render(ContextId context,
                        const std::vector<int>& structure) const override;
  std::vector<std::string> FeatureNames() const override;

  const ConfigCatalog& catalog() const { return config_.catalog; }
  const std::vector<ConfigAssignment>& pool() const { return pool_; }

 protected:
  FeatureMatrix ComputePoolFeatures(ContextId context) const override;

 private:
  ConfigTaskConfig config_;
  std::vector<ConfigAssignment> pool_;
  // All feasible assignments, when the catalog fits under the cap.
  std::optional<std::vector<ConfigAssignment>> feasible_;
  std::vector<ContextId> contexts_{0};
};

}  // namespace prefpool

#endif  // PREFPOOL_LOOP_TASK_H_

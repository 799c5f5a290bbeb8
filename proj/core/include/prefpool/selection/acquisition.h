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

#ifndef PREFPOOL_SELECTION_ACQUISITION_H_
#define PREFPOOL_SELECTION_ACQUISITION_H_

#include <optional>
#include <string>
#include <vector>

#include "prefpool/core/random.h"
#include "prefpool/core/types.h"
#include "prefpool/core/utility.h"
#include "prefpool/selection/kmeans.h"

namespace prefpool {

enum class AcquisitionMode { kUcb, kMeanOnly, kVarianceOnly, kChoicePercPool };

std::optional<AcquisitionMode> ParseAcquisitionMode(const std::string& name);
std::string AcquisitionModeName(AcquisitionMode mode);

struct AcquisitionConfig {
  AcquisitionMode mode = AcquisitionMode::kUcb;
  // 0 disables clustering.
  int clusters = 5;
  // Cluster redraws before falling back to the global top-2.
  int cluster_retry_budget = 16;
};

// Exploration weight 1/t for iteration t (1-based), clamped to [0, 1].
double GammaSchedule(int t);

// (1 - gamma) * mean + gamma * std over the ensemble's utilities of phi.
// Throws ContractError unless gamma lies in [0, 1].
double UcbScore(const Ensemble& ensemble, const FeatureVector& phi,
                double gamma);

struct QueryPair {
  CandidateId first = 0;
  CandidateId second = 0;
  bool operator==(const QueryPair&) const = default;
};

// UCB scores reused across re-queries while the ensemble and iteration
// stay fixed. Owners call Clear() whenever either changes.
class ScoreCache {
 public:
  void Clear() {
    global_.reset();
    clusters_.clear();
  }

 private:
  friend struct ScoreCacheAccess;
  std::optional<Eigen::VectorXd> global_;
  std::vector<std::optional<Eigen::VectorXd>> clusters_;
};

// Picks the pair of candidates to show the decision maker at iteration t.
// The two candidates always have different feature vectors. Throws
// DegeneratePoolError when the pool has no such pair. Candidates in
// `exclude` are avoided unless that leaves no valid pair.
QueryPair SelectQuery(const ClusteredPool& pool, const Ensemble& ensemble,
                      const AcquisitionConfig& config, int t,
                      RandomSource& rng,
                      const std::vector<CandidateId>& exclude = {},
                      ScoreCache* cache = nullptr);

}  // namespace prefpool

#endif  // PREFPOOL_SELECTION_ACQUISITION_H_

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

#ifndef PREFPOOL_SELECTION_KMEANS_H_
#define PREFPOOL_SELECTION_KMEANS_H_

#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <vector>

#include <Eigen/Core>

#include "prefpool/core/random.h"
#include "prefpool/core/types.h"

namespace prefpool {

// A pool for one context, partitioned on its sub-objective values.
struct ClusteredPool {
  std::shared_ptr<const FeatureMatrix> features;
  // Cluster of each candidate, in [0, k).
  std::vector<int> assignment;
  // Candidate ids per cluster, ascending; never empty.
  std::vector<std::vector<CandidateId>> clusters;
  // Rows of `features` gathered per cluster, aligned with `clusters`.
  std::vector<FeatureMatrix> cluster_features;
  // One row per cluster.
  Eigen::MatrixXd centroids;

  int k() const { return static_cast<int>(clusters.size()); }
  int size() const { return static_cast<int>(features->rows()); }
};

inline constexpr int kDefaultKMeansIterations = 100;

// k-means with k-means++ seeding. Stops after max_iters Lloyd rounds or once
// assignments are stable. Asking for more clusters than distinct points
// yields one cluster per distinct point; empty clusters are dropped.
ClusteredPool KMeansPlusPlus(std::shared_ptr<const FeatureMatrix> features,
                             int k, RandomSource& rng,
                             int max_iters = kDefaultKMeansIterations);

// Single cluster holding the whole pool (clustering disabled).
ClusteredPool UnclusteredPool(std::shared_ptr<const FeatureMatrix> features);

// Per-context cache of clustered pools. Concurrent readers, exclusive
// writers; a pool is built once per context.
class ClusterCache {
 public:
  using Builder = std::function<ClusteredPool()>;

  std::shared_ptr<const ClusteredPool> GetOrBuild(ContextId context,
                                                  const Builder& build);
  size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<ContextId, std::shared_ptr<const ClusteredPool>> pools_;
};

}  // namespace prefpool

#endif  // PREFPOOL_SELECTION_KMEANS_H_

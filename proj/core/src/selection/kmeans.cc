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

#include "prefpool/selection/kmeans.h"

#include <limits>
#include <mutex>
#include <utility>

#include "prefpool/core/errors.h"

namespace prefpool {
namespace {

int Nearest(const Eigen::MatrixXd& centroids, const Eigen::RowVectorXd& x) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    const double d = (centroids.row(c) - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

void Finalize(ClusteredPool& pool, int k) {
  // Drop empty clusters and renumber the rest in order.
  std::vector<int> remap(k, -1);
  std::vector<int> counts(k, 0);
  for (int a : pool.assignment) ++counts[a];
  int kept = 0;
  for (int c = 0; c < k; ++c) {
    if (counts[c] > 0) remap[c] = kept++;
  }
  Eigen::MatrixXd centroids(kept, pool.centroids.cols());
  for (int c = 0; c < k; ++c) {
    if (remap[c] >= 0) centroids.row(remap[c]) = pool.centroids.row(c);
  }
  pool.centroids = std::move(centroids);
  pool.clusters.assign(kept, {});
  for (size_t i = 0; i < pool.assignment.size(); ++i) {
    pool.assignment[i] = remap[pool.assignment[i]];
    pool.clusters[pool.assignment[i]].push_back(static_cast<CandidateId>(i));
  }
  pool.cluster_features.clear();
  for (const auto& ids : pool.clusters) {
    pool.cluster_features.push_back((*pool.features)(ids, Eigen::all));
  }
}

}  // namespace

ClusteredPool UnclusteredPool(std::shared_ptr<const FeatureMatrix> features) {
  if (!features || features->rows() == 0) {
    throw ContractError("cannot cluster an empty pool");
  }
  ClusteredPool pool;
  pool.features = std::move(features);
  pool.assignment.assign(pool.features->rows(), 0);
  pool.centroids = pool.features->colwise().mean();
  Finalize(pool, 1);
  return pool;
}

ClusteredPool KMeansPlusPlus(std::shared_ptr<const FeatureMatrix> features,
                             int k, RandomSource& rng, int max_iters) {
  if (k < 1) throw ContractError("k-means needs k >= 1");
  if (!features || features->rows() == 0) {
    throw ContractError("cannot cluster an empty pool");
  }
  const FeatureMatrix& x = *features;
  const Eigen::Index n = x.rows();

  // k-means++ seeding: first center uniform, then proportional to the
  // squared distance to the closest chosen center.
  std::vector<Eigen::Index> seeds{static_cast<Eigen::Index>(rng.UniformIndex(n))};
  Eigen::VectorXd d2 = (x.rowwise() - x.row(seeds[0])).rowwise().squaredNorm();
  while (static_cast<int>(seeds.size()) < k) {
    const double total = d2.sum();
    if (!(total > 0.0)) break;  // every point coincides with a center
    double target = rng.Uniform() * total;
    Eigen::Index pick = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d2[i] <= 0.0) continue;
      pick = i;
      target -= d2[i];
      if (target < 0.0) break;
    }
    seeds.push_back(pick);
    d2 = d2.cwiseMin((x.rowwise() - x.row(pick)).rowwise().squaredNorm());
  }

  ClusteredPool pool;
  pool.features = features;
  const int kk = static_cast<int>(seeds.size());
  pool.centroids = x(seeds, Eigen::all);
  pool.assignment.assign(n, -1);

  bool stable = false;
  for (int iter = 0; iter < max_iters && !stable; ++iter) {
    stable = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = Nearest(pool.centroids, x.row(i));
      if (c != pool.assignment[i]) {
        pool.assignment[i] = c;
        stable = false;
      }
    }
    if (stable) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(kk, x.cols());
    std::vector<int> counts(kk, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(pool.assignment[i]) += x.row(i);
      ++counts[pool.assignment[i]];
    }
    for (int c = 0; c < kk; ++c) {
      if (counts[c] > 0) pool.centroids.row(c) = sums.row(c) / counts[c];
    }
  }
  if (!stable) {
    // Iteration cap hit: re-assign so every point sits with its nearest
    // centroid.
    for (Eigen::Index i = 0; i < n; ++i) {
      pool.assignment[i] = Nearest(pool.centroids, x.row(i));
    }
  }
  Finalize(pool, kk);
  return pool;
}

std::shared_ptr<const ClusteredPool> ClusterCache::GetOrBuild(
    ContextId context, const Builder& build) {
  {
    std::shared_lock lock(mutex_);
    auto it = pools_.find(context);
    if (it != pools_.end()) return it->second;
  }
  std::unique_lock lock(mutex_);
  auto it = pools_.find(context);
  if (it != pools_.end()) return it->second;
  auto pool = std::make_shared<const ClusteredPool>(build());
  pools_.emplace(context, pool);
  return pool;
}

size_t ClusterCache::size() const {
  std::shared_lock lock(mutex_);
  return pools_.size();
}

}  // namespace prefpool

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

#include "prefpool/problems/tsp.h"

#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "prefpool/core/errors.h"

namespace prefpool {
namespace {

uint64_t HashTour(const Tour& tour) {
  uint64_t h = 1469598103934665603ULL;
  for (int v : tour.visit_order) {
    h ^= static_cast<uint64_t>(v) + 1;
    h *= 1099511628211ULL;
  }
  return h;
}

struct TourHash {
  size_t operator()(const Tour& t) const { return HashTour(t); }
};

}  // namespace

double TspInstance::TotalPrize() const {
  return std::accumulate(prizes.begin(), prizes.end(), 0.0);
}

void ValidateInstance(const TspInstance& inst) {
  const int v = inst.node_count;
  if (v < 2) throw ContractError("instance needs at least 2 nodes");
  if (static_cast<int>(inst.coords.size()) != v ||
      static_cast<int>(inst.prizes.size()) != v ||
      static_cast<int>(inst.penalties.size()) != v) {
    throw ContractError("instance arrays do not match node_count");
  }
  for (int l = 0; l < kTspChannels; ++l) {
    const Eigen::MatrixXd& m = inst.edge_values[l];
    if (m.rows() != v || m.cols() != v) {
      throw ContractError("edge channel has the wrong shape");
    }
    if (!m.allFinite() || m.minCoeff() < 0.0 ||
        m.maxCoeff() > kTspChannelMax + 1e-9) {
      throw ContractError("edge channel entries must lie in [0, 10]");
    }
    if (m.diagonal().cwiseAbs().maxCoeff() != 0.0) {
      throw ContractError("edge channel diagonal must be zero");
    }
  }
  for (int i = 0; i < v; ++i) {
    if (!(inst.prizes[i] >= 0.0) || !(inst.penalties[i] >= 0.0)) {
      throw ContractError("prizes and penalties must be nonnegative");
    }
  }
  if (inst.prizes[0] != 0.0 || inst.penalties[0] != 0.0) {
    throw ContractError("depot prize and penalty must be zero");
  }
  if (!(inst.prize_quota >= 0.0) || inst.prize_quota > inst.TotalPrize()) {
    throw ContractError("prize quota must lie in [0, total prize]");
  }
}

void ValidateTour(int node_count, const Tour& tour) {
  const auto& order = tour.visit_order;
  if (order.empty() || order.front() != 0) {
    throw ContractError("tour must start at the depot");
  }
  std::vector<char> seen(node_count, 0);
  for (int node : order) {
    if (node < 0 || node >= node_count) {
      throw ContractError("tour node index out of range");
    }
    if (seen[node]) throw ContractError("tour repeats a node");
    seen[node] = 1;
  }
}

void ValidateTour(const TspInstance& instance, const Tour& tour) {
  ValidateTour(instance.node_count, tour);
}

void NormalizeChannels(TspInstance& inst) {
  for (Eigen::MatrixXd& m : inst.edge_values) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double most = m.col(j).maxCoeff();
      if (most > 0.0 && most != kTspChannelMax) {
        m.col(j) *= kTspChannelMax / most;
        // Pin the maximum so re-normalizing is an exact no-op.
        Eigen::Index arg;
        m.col(j).maxCoeff(&arg);
        m(arg, j) = kTspChannelMax;
      }
    }
  }
}

TspInstance TspGenerateInstance(int node_count, RandomSource& rng,
                                const TspGeneratorConfig& config) {
  if (node_count < 2) throw ContractError("instance needs at least 2 nodes");
  const int v = node_count;
  TspInstance inst;
  inst.node_count = v;
  inst.coords.resize(v);
  for (Point2& p : inst.coords) {
    p.x = rng.Uniform();
    p.y = rng.Uniform();
  }
  for (Eigen::MatrixXd& m : inst.edge_values) m = Eigen::MatrixXd::Zero(v, v);
  for (int i = 0; i < v; ++i) {
    for (int j = 0; j < v; ++j) {
      if (i == j) continue;
      const double dist = std::hypot(inst.coords[i].x - inst.coords[j].x,
                                     inst.coords[i].y - inst.coords[j].y);
      inst.edge_values[0](i, j) = dist;
      inst.edge_values[1](i, j) = dist * rng.LogNormal(0.0, config.duration_sigma);
      inst.edge_values[2](i, j) = dist * rng.LogNormal(0.0, config.fuel_sigma);
      inst.edge_values[3](i, j) = rng.Uniform();
    }
  }
  NormalizeChannels(inst);
  inst.prizes.resize(v);
  inst.penalties.resize(v);
  for (int i = 0; i < v; ++i) {
    inst.prizes[i] = rng.Uniform();
    inst.penalties[i] = rng.Uniform();
  }
  inst.prizes[0] = 0.0;
  inst.penalties[0] = 0.0;
  inst.prize_quota = config.quota_fraction * inst.TotalPrize();
  return inst;
}

std::array<double, kTspFeatureDim> TspRawObjectives(const TspInstance& inst,
                                                    const Tour& tour) {
  ValidateTour(inst, tour);
  std::array<double, kTspFeatureDim> raw{};
  const auto& order = tour.visit_order;
  const size_t len = order.size();
  for (size_t e = 0; e < len; ++e) {
    const int from = order[e];
    const int to = order[(e + 1) % len];
    for (int l = 0; l < kTspChannels; ++l) {
      raw[l] += inst.edge_values[l](from, to);
    }
  }
  std::vector<char> visited(inst.node_count, 0);
  for (int node : order) visited[node] = 1;
  for (int i = 0; i < inst.node_count; ++i) {
    if (!visited[i]) raw[kTspChannels] += inst.penalties[i];
  }
  return raw;
}

FeatureVector TspFeatures(const TspInstance& inst, const Tour& tour) {
  const auto raw = TspRawObjectives(inst, tour);
  FeatureVector phi(kTspFeatureDim);
  for (int l = 0; l < kTspFeatureDim; ++l) phi[l] = -raw[l];
  return phi;
}

double TspCollectedPrize(const TspInstance& inst, const Tour& tour) {
  double total = 0.0;
  for (int node : tour.visit_order) total += inst.prizes[node];
  return total;
}

bool TspIsFeasible(const TspInstance& inst, const Tour& tour) {
  return TspCollectedPrize(inst, tour) >= inst.prize_quota;
}

SampledSet<Tour> TspSampleRelaxed(int node_count, RandomSource& rng, int count,
                                  int64_t max_attempts) {
  if (count < 1) throw ContractError("sample count must be >= 1");
  if (node_count < 2) throw ContractError("instance needs at least 2 nodes");
  if (max_attempts <= 0) max_attempts = 50LL * count + 1000;
  SampledSet<Tour> result;
  std::unordered_set<Tour, TourHash> seen;
  std::vector<int> perm(node_count);
  int64_t attempts = 0;
  while (static_cast<int>(result.items.size()) < count) {
    if (attempts++ >= max_attempts) {
      result.budget_exhausted = true;
      break;
    }
    std::iota(perm.begin(), perm.end(), 0);
    rng.Shuffle(perm);
    Tour tour;
    tour.visit_order.push_back(0);
    for (int node : perm) {
      if (node == 0) break;
      tour.visit_order.push_back(node);
    }
    if (seen.insert(tour).second) result.items.push_back(std::move(tour));
  }
  return result;
}

SampledSet<Tour> TspSampleFeasible(const TspInstance& instance,
                                   RandomSource& rng, int count,
                                   int64_t max_attempts) {
  if (count < 1) throw ContractError("sample count must be >= 1");
  if (max_attempts <= 0) max_attempts = 200LL * count + 1000;
  SampledSet<Tour> result;
  std::unordered_set<Tour, TourHash> seen;
  int64_t attempts = 0;
  while (static_cast<int>(result.items.size()) < count) {
    if (attempts >= max_attempts) {
      result.budget_exhausted = true;
      break;
    }
    auto batch = TspSampleRelaxed(instance.node_count, rng, 1, 1);
    ++attempts;
    Tour& tour = batch.items.front();
    if (!TspIsFeasible(instance, tour)) continue;
    if (seen.insert(tour).second) result.items.push_back(std::move(tour));
  }
  return result;
}

}  // namespace prefpool

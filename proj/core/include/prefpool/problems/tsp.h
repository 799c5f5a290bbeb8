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

#ifndef PREFPOOL_PROBLEMS_TSP_H_
#define PREFPOOL_PROBLEMS_TSP_H_

#include <array>
#include <vector>

#include <Eigen/Core>

#include "prefpool/core/random.h"
#include "prefpool/core/types.h"
#include "prefpool/problems/config.h"

namespace prefpool {

// Edge channels, in feature order.
inline constexpr int kTspChannels = 4;
inline constexpr int kTspFeatureDim = kTspChannels + 1;
inline constexpr double kTspChannelMax = 10.0;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Prize-collecting TSP instance. Node 0 is the depot.
struct TspInstance {
  int node_count = 0;
  std::vector<Point2> coords;
  // edge_values[l](i, j): channel l of directed edge i -> j.
  std::array<Eigen::MatrixXd, kTspChannels> edge_values;
  std::vector<double> prizes;
  // Cost of skipping node i.
  std::vector<double> penalties;
  // Minimum total prize a feasible tour collects.
  double prize_quota = 0.0;

  double TotalPrize() const;
};

// Throws ContractError when an invariant does not hold.
void ValidateInstance(const TspInstance& instance);

// Starts at the depot; the closing edge back to the depot is implicit.
struct Tour {
  std::vector<int> visit_order;
  bool operator==(const Tour&) const = default;
};

void ValidateTour(const TspInstance& instance, const Tour& tour);
void ValidateTour(int node_count, const Tour& tour);

struct TspGeneratorConfig {
  double quota_fraction = 0.5;
  // Per-edge lognormal spread applied to distance for duration and fuel.
  double duration_sigma = 0.3;
  double fuel_sigma = 0.5;
};

TspInstance TspGenerateInstance(int node_count, RandomSource& rng,
                                const TspGeneratorConfig& config = {});

// Scales every column of every channel so its largest entry is
// kTspChannelMax. All-zero columns are left as they are.
void NormalizeChannels(TspInstance& instance);

// Entries 0..3: negated channel sums over tour edges (closing edge
// included). Entry 4: negated sum of penalties of unvisited nodes.
FeatureVector TspFeatures(const TspInstance& instance, const Tour& tour);

// Same values without the sign flip, for display.
std::array<double, kTspFeatureDim> TspRawObjectives(const TspInstance& instance,
                                                    const Tour& tour);

double TspCollectedPrize(const TspInstance& instance, const Tour& tour);

bool TspIsFeasible(const TspInstance& instance, const Tour& tour);

// Random permutation of all nodes truncated where the depot appears, depot
// moved to the front. Duplicates are resampled within the attempt budget.
SampledSet<Tour> TspSampleRelaxed(int node_count, RandomSource& rng, int count,
                                  int64_t max_attempts = 0);
inline SampledSet<Tour> TspSampleRelaxed(const TspInstance& instance,
                                         RandomSource& rng, int count,
                                         int64_t max_attempts = 0) {
  return TspSampleRelaxed(instance.node_count, rng, count, max_attempts);
}

// Relaxed samples filtered by the prize quota of `instance`.
SampledSet<Tour> TspSampleFeasible(const TspInstance& instance,
                                   RandomSource& rng, int count,
                                   int64_t max_attempts = 0);

}  // namespace prefpool

#endif  // PREFPOOL_PROBLEMS_TSP_H_

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

#include <gtest/gtest.h>

#include <set>

#include "prefpool/core/errors.h"
#include "prefpool/core/utility.h"
#include "prefpool/problems/pool.h"
#include "prefpool/problems/serialization.h"
#include "prefpool/problems/tsp.h"
#include "prefpool/problems/tsp_solver.h"
#include "test_support.h"

namespace prefpool {
namespace {

using testing::BruteForceTsp;
using testing::DirectPrize;
using testing::DirectTourCost;

Tour RandomTour(int n, RandomSource& rng) {
  std::vector<int> nodes;
  for (int i = 1; i < n; ++i) nodes.push_back(i);
  rng.Shuffle(nodes);
  const int keep = static_cast<int>(rng.UniformIndex(n));
  Tour t{{0}};
  t.visit_order.insert(t.visit_order.end(), nodes.begin(),
                       nodes.begin() + keep);
  return t;
}

WeightVector RandomSimplexWeights(RandomSource& rng) {
  WeightVector w = testing::RandomVector(kTspFeatureDim, rng, 0.01, 1.0);
  return w / w.sum();
}

TEST(TspGenerate, ChannelColumnsPeakAtTen) {
  RandomSource rng(1, 0);
  for (int n : {2, 5, 10, 20}) {
    const TspInstance inst = TspGenerateInstance(n, rng);
    EXPECT_NO_THROW(ValidateInstance(inst));
    for (int l = 0; l < kTspChannels; ++l) {
      EXPECT_NEAR(inst.edge_values[l].maxCoeff(), kTspChannelMax, 1e-9);
      EXPECT_GE(inst.edge_values[l].minCoeff(), 0.0);
      for (int j = 0; j < n; ++j) {
        EXPECT_NEAR(inst.edge_values[l].col(j).maxCoeff(), kTspChannelMax,
                    1e-9);
        EXPECT_EQ(inst.edge_values[l](j, j), 0.0);
      }
    }
    EXPECT_EQ(inst.prizes[0], 0.0);
    EXPECT_EQ(inst.penalties[0], 0.0);
    EXPECT_NEAR(inst.prize_quota, 0.5 * inst.TotalPrize(), 1e-12);
  }
}

TEST(TspGenerate, SameSeedSameInstance) {
  RandomSource a(77, 3);
  RandomSource b(77, 3);
  const TspInstance x = TspGenerateInstance(12, a);
  const TspInstance y = TspGenerateInstance(12, b);
  EXPECT_EQ(TspInstanceToJson(x).dump(), TspInstanceToJson(y).dump());
  for (int l = 0; l < kTspChannels; ++l) {
    EXPECT_TRUE((x.edge_values[l].array() == y.edge_values[l].array()).all());
  }
}

// Within one column, distance entries are Euclidean lengths times one
// column scale.
TEST(TspGenerate, DistanceChannelIsScaledEuclidean) {
  RandomSource rng(2, 0);
  const TspInstance inst = TspGenerateInstance(9, rng);
  for (int i = 1; i < 9; ++i) {
    for (int j = 1; j < 9; ++j) {
      if (i == j) continue;
      const double dx = inst.coords[i].x - inst.coords[j].x;
      const double dy = inst.coords[i].y - inst.coords[j].y;
      const double d = std::sqrt(dx * dx + dy * dy);
      EXPECT_GT(inst.edge_values[0](i, j), 0.0);
      EXPECT_NEAR(inst.edge_values[0](i, j) / d, inst.edge_values[0](0, j) /
                      std::hypot(inst.coords[0].x - inst.coords[j].x,
                                 inst.coords[0].y - inst.coords[j].y),
                  1e-9);
    }
  }
}

TEST(TspNormalize, IsIdempotent) {
  RandomSource rng(3, 0);
  TspInstance inst = TspGenerateInstance(8, rng);
  const TspInstance before = inst;
  NormalizeChannels(inst);
  for (int l = 0; l < kTspChannels; ++l) {
    EXPECT_TRUE(
        (inst.edge_values[l] - before.edge_values[l]).cwiseAbs().maxCoeff() <
        1e-12);
  }
}

TEST(TspFeatures, VisitAllHasNoPenalty) {
  RandomSource rng(4, 0);
  const TspInstance inst = TspGenerateInstance(7, rng);
  Tour all{{0, 1, 2, 3, 4, 5, 6}};
  EXPECT_EQ(TspFeatures(inst, all)[4], 0.0);
  EXPECT_TRUE(TspIsFeasible(inst, all));
}

TEST(TspFeatures, DepotOnlyTour) {
  RandomSource rng(5, 0);
  const TspInstance inst = TspGenerateInstance(7, rng);
  const FeatureVector f = TspFeatures(inst, Tour{{0}});
  double penalties = 0.0;
  for (double p : inst.penalties) penalties += p;
  for (int l = 0; l < kTspChannels; ++l) EXPECT_EQ(f[l], 0.0);
  EXPECT_NEAR(f[4], -penalties, 1e-12);
  EXPECT_FALSE(TspIsFeasible(inst, Tour{{0}}));
}

TEST(TspFeatures, TwoNodeInstanceHasOneNontrivialTour) {
  RandomSource rng(6, 0);
  const TspInstance inst = TspGenerateInstance(2, rng);
  std::set<std::vector<int>> tours;
  testing::ForEachTour(2, [&](const std::vector<int>& o) { tours.insert(o); });
  EXPECT_EQ(tours, (std::set<std::vector<int>>{{0}, {0, 1}}));
  const FeatureVector f = TspFeatures(inst, Tour{{0, 1}});
  EXPECT_NEAR(f[0], -(inst.edge_values[0](0, 1) + inst.edge_values[0](1, 0)),
              1e-12);
}

TEST(TspFeatures, MatchesEdgeByEdgeSummation) {
  RandomSource rng(7, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const TspInstance inst = TspGenerateInstance(6, rng);
    const Tour tour = RandomTour(6, rng);
    const FeatureVector f = TspFeatures(inst, tour);
    const auto& o = tour.visit_order;
    for (int l = 0; l < kTspChannels; ++l) {
      double sum = 0.0;
      if (o.size() > 1) {
        for (size_t s = 0; s + 1 < o.size(); ++s) {
          sum += inst.edge_values[l](o[s], o[s + 1]);
        }
        sum += inst.edge_values[l](o.back(), o.front());
      }
      EXPECT_NEAR(f[l], -sum, 1e-12);
    }
    std::vector<int> visited(6, 0);
    for (int v : o) visited[v] = 1;
    double skipped = 0.0;
    for (int i = 0; i < 6; ++i) {
      if (!visited[i]) skipped += inst.penalties[i];
    }
    EXPECT_NEAR(f[4], -skipped, 1e-12);
    const auto raw = TspRawObjectives(inst, tour);
    for (int l = 0; l < kTspFeatureDim; ++l) EXPECT_EQ(raw[l], -f[l] + 0.0);
  }
}

TEST(TspFeatures, UtilityIsNegatedScalarizedCost) {
  RandomSource rng(8, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const TspInstance inst = TspGenerateInstance(7, rng);
    const Tour tour = RandomTour(7, rng);
    const WeightVector w = RandomSimplexWeights(rng);
    const double direct = DirectTourCost(inst, w, tour.visit_order);
    EXPECT_NEAR(Utility(w, TspFeatures(inst, tour)), -direct,
                1e-9 * std::max(1.0, direct));
  }
}

TEST(TspFeatures, RejectsInvalidTours) {
  RandomSource rng(9, 0);
  const TspInstance inst = TspGenerateInstance(5, rng);
  EXPECT_THROW(TspFeatures(inst, Tour{{1, 0}}), ContractError);
  EXPECT_THROW(TspFeatures(inst, Tour{{0, 1, 1}}), ContractError);
  EXPECT_THROW(TspFeatures(inst, Tour{{0, 5}}), ContractError);
  EXPECT_THROW(TspFeatures(inst, Tour{{}}), ContractError);
}

TEST(TspFeasibility, MatchesPrizeRecomputation) {
  RandomSource rng(10, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const TspInstance inst = TspGenerateInstance(8, rng);
    const Tour tour = RandomTour(8, rng);
    EXPECT_EQ(TspIsFeasible(inst, tour),
              DirectPrize(inst, tour.visit_order) >= inst.prize_quota);
    EXPECT_NEAR(TspCollectedPrize(inst, tour),
                DirectPrize(inst, tour.visit_order), 1e-12);
  }
}

TEST(TspSampleRelaxed, TwoNodesGivesBothTours) {
  RandomSource rng(11, 0);
  const auto s = TspSampleRelaxed(2, rng, 5);
  std::set<std::vector<int>> seen;
  for (const Tour& t : s.items) seen.insert(t.visit_order);
  EXPECT_EQ(seen, (std::set<std::vector<int>>{{0}, {0, 1}}));
  EXPECT_TRUE(s.budget_exhausted);
}

TEST(TspSampleRelaxed, ToursAreDistinctAndWellFormed) {
  RandomSource rng(12, 0);
  const auto s = TspSampleRelaxed(10, rng, 10000);
  EXPECT_FALSE(s.budget_exhausted);
  ASSERT_EQ(s.items.size(), 10000u);
  std::set<std::vector<int>> seen;
  for (const Tour& t : s.items) {
    ASSERT_EQ(t.visit_order.front(), 0);
    EXPECT_NO_THROW(ValidateTour(10, t));
    seen.insert(t.visit_order);
  }
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(TspSampleRelaxed, LengthDistributionMatchesPermutationTruncation) {
  const int v = 8;
  const int draws = 100000;
  RandomSource rng(13, 0);
  RandomSource direct_rng(13, 1);
  std::vector<double> sampled(v, 0.0);
  std::vector<double> direct(v, 0.0);
  std::vector<int> perm(v);
  for (int i = 0; i < draws; ++i) {
    const auto s = TspSampleRelaxed(v, rng, 1);
    sampled[s.items[0].visit_order.size() - 1] += 1;
    for (int k = 0; k < v; ++k) perm[k] = k;
    direct_rng.Shuffle(perm);
    int pos = 0;
    while (perm[pos] != 0) ++pos;
    direct[pos] += 1;
  }
  const std::vector<double> uniform(v, static_cast<double>(draws) / v);
  EXPECT_LT(testing::ChiSquare(sampled, uniform),
            testing::ChiSquareCritical(v - 1));
  EXPECT_LT(testing::ChiSquare(direct, uniform),
            testing::ChiSquareCritical(v - 1));
  // Two-sample homogeneity between sampler and direct truncation.
  double stat = 0.0;
  for (int k = 0; k < v; ++k) {
    const double pooled = (sampled[k] + direct[k]) / 2.0;
    stat += (sampled[k] - pooled) * (sampled[k] - pooled) / pooled +
            (direct[k] - pooled) * (direct[k] - pooled) / pooled;
  }
  EXPECT_LT(stat, testing::ChiSquareCritical(v - 1));
}

TEST(TspSampleFeasible, AllMeetTheQuota) {
  RandomSource rng(14, 0);
  const TspInstance inst = TspGenerateInstance(10, rng);
  const auto s = TspSampleFeasible(inst, rng, 2000);
  EXPECT_EQ(s.items.size(), 2000u);
  for (const Tour& t : s.items) EXPECT_TRUE(TspIsFeasible(inst, t));
}

TEST(TspSolveExact, TriangleWithHugePenaltiesVisitsAll) {
  TspInstance inst;
  inst.node_count = 3;
  inst.coords = {{0, 0}, {1, 0}, {0.5, 0.8}};
  for (int l = 0; l < kTspChannels; ++l) {
    inst.edge_values[l] = Eigen::MatrixXd::Constant(3, 3, 10.0);
    inst.edge_values[l].diagonal().setZero();
  }
  inst.prizes = {0, 0.5, 0.5};
  inst.penalties = {0, 1e6, 1e6};
  inst.prize_quota = 0.0;
  WeightVector w(5);
  w << 0.2, 0.2, 0.2, 0.2, 0.2;
  const Tour t = TspSolveExact(inst, w);
  EXPECT_EQ(t.visit_order.size(), 3u);
  EXPECT_NEAR(Utility(w, TspFeatures(inst, t)), -0.8 * 30.0, 1e-9);
}

TEST(TspSolveExact, FreeSkippingGivesDepotOnly) {
  RandomSource rng(15, 0);
  TspInstance inst = TspGenerateInstance(8, rng);
  std::fill(inst.penalties.begin(), inst.penalties.end(), 0.0);
  inst.prize_quota = 0.0;
  const Tour t = TspSolveExact(inst, RandomSimplexWeights(rng));
  EXPECT_EQ(t.visit_order, std::vector<int>{0});
}

TEST(TspSolveExact, MatchesExhaustiveEnumeration) {
  RandomSource rng(16, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng.UniformIndex(4));
    TspGeneratorConfig gen;
    gen.quota_fraction = rng.Uniform(0.0, 0.9);
    const TspInstance inst = TspGenerateInstance(n, rng, gen);
    const WeightVector w = RandomSimplexWeights(rng);
    const auto oracle = BruteForceTsp(inst, w);
    ASSERT_TRUE(oracle.found);
    const Tour t = TspSolveExact(inst, w);
    EXPECT_TRUE(TspIsFeasible(inst, t));
    EXPECT_EQ(DirectTourCost(inst, w, t.visit_order), oracle.cost)
        << "n=" << n << " trial " << trial;
  }
}

TEST(TspSolveExact, CapAndInfeasibility) {
  RandomSource rng(17, 0);
  const TspInstance big = TspGenerateInstance(12, rng);
  EXPECT_THROW(TspSolveExact(big, RandomSimplexWeights(rng), {10}),
               CapExceededError);
  TspInstance inst = TspGenerateInstance(5, rng);
  inst.prize_quota = inst.TotalPrize() + 1.0;
  EXPECT_THROW(TspSolveExact(inst, RandomSimplexWeights(rng)), std::exception);
}

TEST(TspSolveExact, PoolArgmaxNeverBeatsTheOptimum) {
  RandomSource rng(18, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const TspInstance inst = TspGenerateInstance(8, rng);
    const WeightVector w = RandomSimplexWeights(rng);
    const auto pool = TspSampleFeasible(inst, rng, 300).items;
    FeatureMatrix f(pool.size(), kTspFeatureDim);
    for (size_t i = 0; i < pool.size(); ++i) {
      f.row(i) = TspFeatures(inst, pool[i]).transpose();
    }
    const double u_pool = f.row(PoolArgmax(f, w)).dot(w);
    const double u_opt = Utility(w, TspFeatures(inst, TspSolveExact(inst, w)));
    EXPECT_LE(u_pool, u_opt + 1e-12);
  }
}

TEST(TspInstanceJson, RoundTrip) {
  RandomSource rng(19, 0);
  const TspInstance inst = TspGenerateInstance(9, rng);
  const TspInstance back = TspInstanceFromJson(TspInstanceToJson(inst));
  EXPECT_EQ(TspInstanceToJson(back).dump(), TspInstanceToJson(inst).dump());
  nlohmann::json doc = TspInstanceToJson(inst);
  doc.erase("prize_quota");
  EXPECT_THROW(TspInstanceFromJson(doc), ConfigError);
}

}  // namespace
}  // namespace prefpool

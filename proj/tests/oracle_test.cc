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

#include <cmath>

#include "prefpool/core/errors.h"
#include "prefpool/core/utility.h"
#include "prefpool/oracle/decision_maker.h"
#include "prefpool/oracle/metrics.h"
#include "prefpool/problems/pool.h"
#include "prefpool/problems/tsp.h"
#include "prefpool/problems/tsp_solver.h"
#include "test_support.h"

namespace prefpool {
namespace {

using testing::RandomVector;

SimulatedDM MakeDM(WeightVector w, double beta, double eps) {
  SimulatedDM dm;
  dm.w_true = std::move(w);
  dm.beta = beta;
  dm.eps_ind = eps;
  return dm;
}

double FrequencyFirst(const SimulatedDM& dm, const FeatureVector& a,
                      const FeatureVector& b, RandomSource& rng, int n) {
  int first = 0;
  for (int i = 0; i < n; ++i) first += Respond(dm, a, b, rng) == Label::kLeft;
  return static_cast<double>(first) / n;
}

TEST(SampleTspWeights, OnTheSimplex) {
  RandomSource rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const WeightVector w = SampleTspWeights(5, rng);
    EXPECT_NEAR(w.sum(), 1.0, 1e-12);
    EXPECT_GT(w.minCoeff(), 0.0);
  }
}

TEST(SampleTspWeights, ConcentratedNearUniform) {
  RandomSource rng(2, 0);
  int inside = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const WeightVector w = SampleTspWeights(5, rng);
    inside += (w.array() - 0.2).abs().maxCoeff() <= 0.15;
  }
  EXPECT_GE(inside, 0.99 * n);
}

TEST(SampleTspWeights, MomentsMatchDirichlet) {
  // Dirichlet(100,...,100) over 5 coordinates: mean 0.2, variance
  // 0.2 * 0.8 / 501.
  RandomSource rng(3, 0);
  const int n = 20000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(5);
  Eigen::VectorXd sum2 = Eigen::VectorXd::Zero(5);
  for (int i = 0; i < n; ++i) {
    const WeightVector w = SampleTspWeights(5, rng);
    sum += w;
    sum2 += w.cwiseProduct(w);
  }
  const double var_expected = 0.2 * 0.8 / 501.0;
  for (int j = 0; j < 5; ++j) {
    const double mean = sum[j] / n;
    const double var = sum2[j] / n - mean * mean;
    EXPECT_NEAR(mean, 0.2, 5 * std::sqrt(var_expected / n));
    EXPECT_NEAR(var / var_expected, 1.0, 0.05);
  }
}

TEST(SampleConfigWeights, SparsityIsTwentyPercentRoundedUp) {
  RandomSource rng(4, 0);
  for (int dim : {1, 3, 5, 10, 19, 33}) {
    for (int trial = 0; trial < 50; ++trial) {
      const WeightVector w = SampleConfigWeights(dim, rng);
      int nonzero = 0;
      for (int i = 0; i < dim; ++i) nonzero += w[i] != 0.0;
      EXPECT_EQ(nonzero, static_cast<int>(std::ceil(0.2 * dim))) << dim;
    }
  }
}

TEST(SampleConfigWeights, NonzeroEntriesFollowTheNormal) {
  RandomSource rng(5, 0);
  double sum = 0.0, sum2 = 0.0;
  int n = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const WeightVector w = SampleConfigWeights(10, rng);
    for (int i = 0; i < 10; ++i) {
      if (w[i] == 0.0) continue;
      sum += w[i];
      sum2 += w[i] * w[i];
      ++n;
    }
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 25.0, 0.25);
  EXPECT_NEAR(std::sqrt(sum2 / n - mean * mean), 25.0 / 3.0, 0.25);
}

TEST(SampleConfigWeights, ZeroedPositionsAreUniform) {
  RandomSource rng(6, 0);
  const int dim = 10;
  const int n = 20000;
  std::vector<double> counts(dim, 0.0);
  for (int trial = 0; trial < n; ++trial) {
    const WeightVector w = SampleConfigWeights(dim, rng);
    for (int i = 0; i < dim; ++i) counts[i] += w[i] != 0.0;
  }
  EXPECT_LT(testing::ChiSquare(counts, std::vector<double>(dim, 2.0 * n / dim)),
            testing::ChiSquareCritical(dim - 1));
}

TEST(Respond, IdenticalCandidates) {
  RandomSource rng(7, 0);
  const FeatureVector phi = Eigen::Vector2d(1, 2);
  const SimulatedDM margin = MakeDM(Eigen::Vector2d(1, 1), 1.0, 0.01);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(Respond(margin, phi, phi, rng), Label::kIndifferent);
  }
  const SimulatedDM no_margin = MakeDM(Eigen::Vector2d(1, 1), 1.0, 0.0);
  EXPECT_NEAR(FrequencyFirst(no_margin, phi, phi, rng, 10000), 0.5, 0.02);
}

TEST(Respond, NoiselessLimit) {
  RandomSource rng(8, 0);
  const SimulatedDM dm = MakeDM(Eigen::Vector2d(1, 0), 1e6, 0.01);
  const FeatureVector a = Eigen::Vector2d(0.02, 0);
  const FeatureVector b = Eigen::Vector2d(0, 0);
  EXPECT_EQ(FrequencyFirst(dm, a, b, rng, 10000), 1.0);
  EXPECT_EQ(FrequencyFirst(dm, b, a, rng, 10000), 0.0);
}

TEST(Respond, MonteCarloMatchesSigmoid) {
  RandomSource rng(9, 0);
  const SimulatedDM dm = MakeDM(Eigen::Vector2d(1, 0), 1.0, 0.0);
  const FeatureVector a = Eigen::Vector2d(std::log(3.0), 0);
  const FeatureVector b = Eigen::Vector2d(0, 0);
  EXPECT_NEAR(FrequencyFirst(dm, a, b, rng, 10000), 0.75, 0.02);
  EXPECT_NEAR(ProbabilityFirst(dm, std::log(3.0)), 0.75, 1e-15);
}

TEST(Respond, ConvergesAtMonteCarloRate) {
  RandomSource rng(10, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const double beta = rng.Uniform(0.2, 3.0);
    const SimulatedDM dm = MakeDM(Eigen::Vector2d(1, 0), beta, 0.0);
    const FeatureVector a = Eigen::Vector2d(rng.Uniform(-2, 2), 0);
    const FeatureVector b = Eigen::Vector2d(0, 0);
    const double p = 1.0 / (1.0 + std::exp(-beta * a[0]));
    const int n = 20000;
    EXPECT_NEAR(FrequencyFirst(dm, a, b, rng, n), p,
                4.5 * std::sqrt(p * (1 - p) / n) + 1e-12);
  }
}

TEST(Respond, IsAntisymmetricInDistribution) {
  RandomSource rng(11, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const SimulatedDM dm = MakeDM(RandomVector(3, rng, 0, 1), 1.0, 0.05);
    const FeatureVector a = RandomVector(3, rng, -1, 1);
    const FeatureVector b = RandomVector(3, rng, -1, 1);
    const int n = 20000;
    int first_ab = 0, second_ba = 0;
    for (int i = 0; i < n; ++i) {
      first_ab += Respond(dm, a, b, rng) == Label::kLeft;
      second_ba += Respond(dm, b, a, rng) == Label::kRight;
    }
    // Difference of two binomial proportions: sd <= sqrt(2 * 0.25 / n).
    EXPECT_NEAR(static_cast<double>(first_ab - second_ba) / n, 0.0,
                4.5 * std::sqrt(0.5 / n));
    const double gap = dm.w_true.dot(a - b);
    EXPECT_NEAR(ProbabilityFirst(dm, gap), 1.0 - ProbabilityFirst(dm, -gap) -
                                               (std::abs(gap) < 0.05 ? 1 : 0),
                1e-15);
  }
}

TEST(RelativeRegret, Examples) {
  EXPECT_EQ(RelativeRegret(ObjectiveSense::kMinimize, -10.0, -10.0), 0.0);
  EXPECT_NEAR(RelativeRegret(ObjectiveSense::kMinimize, -10.0, -11.0), 0.1,
              1e-15);
  EXPECT_NEAR(RelativeRegret(ObjectiveSense::kMaximize, 20.0, 15.0), 0.25,
              1e-15);
  EXPECT_EQ(RelativeRegret(ObjectiveSense::kMaximize, 0.0, 0.0), 0.0);
  EXPECT_THROW(RelativeRegret(ObjectiveSense::kMaximize, 0.0, -1.0),
               ContractError);
  EXPECT_THROW(RelativeRegret(ObjectiveSense::kMaximize, 1.0, 2.0),
               ContractError);
}

TEST(RelativeRegret, NonNegativeAndZeroOnlyAtOptimum) {
  RandomSource rng(12, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const double opt = rng.Uniform(1, 100);
    const double hat = opt - rng.Uniform(0, 50);
    const double r = RelativeRegret(ObjectiveSense::kMaximize, opt, hat);
    EXPECT_GE(r, 0.0);
    EXPECT_EQ(r == 0.0, hat == opt);
    const double rc = RelativeRegret(ObjectiveSense::kMinimize, -opt, -opt - 1);
    EXPECT_NEAR(rc, 1.0 / opt, 1e-12);
  }
}

TEST(RelativeRegret, PoolArgmaxAgainstExactOptimum) {
  RandomSource rng(13, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const TspInstance inst = TspGenerateInstance(7, rng);
    const WeightVector w = SampleTspWeights(kTspFeatureDim, rng);
    const auto tours = TspSampleFeasible(inst, rng, 200).items;
    const FeatureMatrix f = BuildFeatureMatrix(
        static_cast<int>(tours.size()), kTspFeatureDim,
        [&](int i) { return TspFeatures(inst, tours[i]); });
    const double u_opt = Utility(w, TspFeatures(inst, TspSolveExact(inst, w)));
    const double u_pool = Utility(w, f.row(PoolArgmax(f, w)).transpose());
    EXPECT_GE(RelativeRegret(ObjectiveSense::kMinimize, u_opt, u_pool), 0.0);
    EXPECT_EQ(RelativeRegret(ObjectiveSense::kMinimize, u_opt, u_opt), 0.0);
  }
}

TEST(DmSatisfied, Boundaries) {
  const SimulatedDM dm = MakeDM(Eigen::Vector2d(1, 1), 1.0, 0.5);
  EXPECT_TRUE(DmSatisfied(dm, 3.0, 3.0));
  EXPECT_FALSE(DmSatisfied(dm, 3.0, 2.0));
  EXPECT_FALSE(DmSatisfied(dm, 3.0, 2.5));
  EXPECT_TRUE(DmSatisfied(dm, 3.0, 2.75));
}

TEST(DmSatisfied, ImpliesIndifferentResponse) {
  RandomSource rng(14, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const SimulatedDM dm =
        MakeDM(RandomVector(3, rng, 0, 1), rng.Uniform(0.1, 5), 0.3);
    const FeatureVector opt = RandomVector(3, rng, -1, 1);
    const FeatureVector hat = RandomVector(3, rng, -1, 1);
    const double u_opt = Utility(dm.w_true, opt);
    const double u_hat = Utility(dm.w_true, hat);
    if (u_hat > u_opt || !DmSatisfied(dm, u_opt, u_hat)) continue;
    for (int i = 0; i < 20; ++i) {
      EXPECT_EQ(Respond(dm, hat, opt, rng), Label::kIndifferent);
    }
  }
}

TEST(QueriesToThreshold, Examples) {
  EXPECT_EQ(QueriesToThreshold({0.5, 0.2, 0.09, 0.3}), 3);
  EXPECT_EQ(QueriesToThreshold({0.5, 0.2, 0.10}), std::nullopt);
  EXPECT_EQ(QueriesToThreshold({}), std::nullopt);
}

TEST(QueriesToThreshold, MatchesLinearScan) {
  RandomSource rng(15, 0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> curve(100);
    double level = 1.0;
    for (double& c : curve) {
      level *= rng.Uniform(0.9, 1.0);
      c = level + rng.Uniform(-0.05, 0.05);
    }
    std::optional<int> expected;
    for (size_t i = 0; i < curve.size() && !expected; ++i) {
      if (curve[i] < 0.1) expected = static_cast<int>(i + 1);
    }
    EXPECT_EQ(QueriesToThreshold(curve), expected);
  }
}

TEST(Summarize, MeanAndStandardError) {
  const MeanAndStderr s = Summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(Summarize({7.0}).std_error, 0.0);
  EXPECT_EQ(Summarize({}).mean, 0.0);
}

TEST(Roster, JsonRoundTrip) {
  RandomSource rng(16, 0);
  std::vector<SimulatedDM> roster;
  for (int i = 0; i < 4; ++i) roster.push_back(SampleTspDM(i, rng));
  roster[2].eps_ind = 0.125;
  const auto back = RosterFromJson(RosterToJson(roster, false));
  ASSERT_EQ(back.size(), roster.size());
  for (size_t i = 0; i < roster.size(); ++i) {
    EXPECT_EQ(back[i].id, roster[i].id);
    EXPECT_EQ(back[i].w_true, roster[i].w_true);
    EXPECT_EQ(back[i].beta, roster[i].beta);
    EXPECT_EQ(back[i].eps_ind, roster[i].eps_ind);
    EXPECT_EQ(back[i].seed, roster[i].seed);
  }
  EXPECT_TRUE(RosterToJson(roster, true)[0]["eps_ind"].is_null());
  auto bad = RosterToJson(roster, false);
  bad[0]["beta"] = -1.0;
  EXPECT_THROW(RosterFromJson(bad), ConfigError);
  bad[0].erase("beta");
  EXPECT_THROW(RosterFromJson(bad), ConfigError);
}

}  // namespace
}  // namespace prefpool

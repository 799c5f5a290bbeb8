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
#include "prefpool/core/random.h"
#include "prefpool/core/types.h"
#include "prefpool/core/utility.h"
#include "test_support.h"

namespace prefpool {
namespace {

using testing::RandomVector;

TEST(Utility, DotProductExamples) {
  Eigen::VectorXd w(2), phi(2);
  w << 1, 2;
  phi << 3, 4;
  EXPECT_DOUBLE_EQ(Utility(w, phi), 11.0);
  EXPECT_EQ(Utility(Eigen::VectorXd::Zero(2), phi), 0.0);
}

TEST(Utility, MatchesElementwiseLoop) {
  RandomSource rng(1, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd w = RandomVector(5, rng, -10, 10);
    const Eigen::VectorXd phi = RandomVector(5, rng, -10, 10);
    double expected = 0.0;
    for (int i = 0; i < 5; ++i) expected += w[i] * phi[i];
    EXPECT_NEAR(Utility(w, phi), expected, 1e-12 * (1 + std::abs(expected)));
  }
}

TEST(Utility, RejectsDimensionMismatch) {
  EXPECT_THROW(Utility(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(3)),
               ContractError);
  EXPECT_THROW(Delta(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(3)),
               ContractError);
}

TEST(Utility, IsLinearInFeatures) {
  RandomSource rng(2, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd w = RandomVector(7, rng, -5, 5);
    const Eigen::VectorXd p1 = RandomVector(7, rng, -5, 5);
    const Eigen::VectorXd p2 = RandomVector(7, rng, -5, 5);
    const double a = rng.Uniform(-3, 3);
    const double b = rng.Uniform(-3, 3);
    const double lhs = Utility(w, a * p1 + b * p2);
    const double rhs = a * Utility(w, p1) + b * Utility(w, p2);
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(Delta, Examples) {
  Eigen::VectorXd a(2), b(2);
  a << 1, 0;
  b << 0, 1;
  EXPECT_EQ(Delta(a, a), Eigen::VectorXd::Zero(2));
  Eigen::VectorXd expected(2);
  expected << 1, -1;
  EXPECT_EQ(Delta(a, b), expected);
}

TEST(Delta, IsAntisymmetric) {
  RandomSource rng(3, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd a = RandomVector(6, rng);
    const Eigen::VectorXd b = RandomVector(6, rng);
    EXPECT_EQ(Delta(a, b), -Delta(b, a));
  }
}

TEST(EnsembleStats, TwoPointDistribution) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 0, 3, 0;
  const Ensemble ensemble(m);
  const EnsembleStats s = ComputeEnsembleStats(ensemble, Eigen::Vector2d(1, 1));
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.std, 1.0);
}

TEST(EnsembleStats, EqualMembersHaveZeroSpread) {
  const Ensemble ensemble(Eigen::MatrixXd::Constant(10, 4, 0.3));
  const EnsembleStats s =
      ComputeEnsembleStats(ensemble, Eigen::Vector4d(1, -2, 3, 4));
  EXPECT_EQ(s.std, 0.0);
}

TEST(EnsembleStats, MatchesTwoPassOracle) {
  RandomSource rng(4, 0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd members(25, 5);
    for (int i = 0; i < 25; ++i) members.row(i) = RandomVector(5, rng, -2, 3);
    const Eigen::VectorXd phi = RandomVector(5, rng, -10, 0);
    std::vector<double> u(25);
    for (int i = 0; i < 25; ++i) {
      u[i] = 0.0;
      for (int j = 0; j < 5; ++j) u[i] += members(i, j) * phi[j];
    }
    double mean = 0.0;
    for (double x : u) mean += x;
    mean /= 25;
    double var = 0.0;
    for (double x : u) var += (x - mean) * (x - mean);
    const double std = std::sqrt(var / 25);
    const EnsembleStats s = ComputeEnsembleStats(Ensemble(members), phi);
    EXPECT_NEAR(s.mean, mean, 1e-12 * std::max(1.0, std::abs(mean)));
    EXPECT_NEAR(s.std, std, 1e-12 * std::max(1.0, std));
  }
}

TEST(EnsembleStats, StdScalesWithMembers) {
  RandomSource rng(5, 0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd members(9, 4);
    for (int i = 0; i < 9; ++i) members.row(i) = RandomVector(4, rng);
    const Eigen::VectorXd phi = RandomVector(4, rng);
    const double s = rng.Uniform(-4, 4);
    const double base = ComputeEnsembleStats(Ensemble(members), phi).std;
    const double scaled =
        ComputeEnsembleStats(Ensemble(members * s), phi).std;
    EXPECT_NEAR(scaled, std::abs(s) * base, 1e-12 * (1 + std::abs(s) * base));
  }
}

TEST(EnsembleStats, BatchMatchesSingle) {
  RandomSource rng(6, 0);
  Eigen::MatrixXd members(25, 5);
  for (int i = 0; i < 25; ++i) members.row(i) = RandomVector(5, rng);
  Eigen::MatrixXd features(40, 5);
  for (int i = 0; i < 40; ++i) features.row(i) = RandomVector(5, rng);
  const Ensemble ensemble(members);
  Eigen::VectorXd mean, std;
  ComputeEnsembleStatsBatch(ensemble, features, mean, std);
  for (int i = 0; i < 40; ++i) {
    const EnsembleStats s =
        ComputeEnsembleStats(ensemble, features.row(i).transpose());
    EXPECT_NEAR(mean[i], s.mean, 1e-12);
    EXPECT_NEAR(std[i], s.std, 1e-12);
  }
}

TEST(Ensemble, MeanAndStdDevPerCoordinate) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 4, 3, 4;
  const Ensemble e(m);
  EXPECT_EQ(e.Mean(), Eigen::Vector2d(2, 4));
  EXPECT_EQ(e.StdDev(), Eigen::Vector2d(1, 0));
}

TEST(RandomSource, SameKeySameSequence) {
  RandomSource a(42, 7);
  RandomSource b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.Uniform(), b.Uniform());
    ASSERT_EQ(a.Normal(0, 1), b.Normal(0, 1));
    ASSERT_EQ(a.Gamma(2.5), b.Gamma(2.5));
    ASSERT_EQ(a.UniformIndex(17), b.UniformIndex(17));
  }
}

TEST(RandomSource, StreamsAndDerivedStreamsDiffer) {
  RandomSource a(42, 7);
  RandomSource b(42, 8);
  RandomSource c = a.Derive(1);
  RandomSource d = a.Derive(2);
  int same_ab = 0;
  int same_cd = 0;
  for (int i = 0; i < 100; ++i) {
    same_ab += a.Uniform() == b.Uniform();
    same_cd += c.Uniform() == d.Uniform();
  }
  EXPECT_LT(same_ab, 3);
  EXPECT_LT(same_cd, 3);
}

TEST(RandomSource, UniformIndexCoversRange) {
  RandomSource rng(9, 0);
  std::vector<double> counts(6, 0.0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) counts[rng.UniformIndex(6)] += 1;
  EXPECT_LT(testing::ChiSquare(counts, std::vector<double>(6, n / 6.0)),
            testing::ChiSquareCritical(5));
}

TEST(Labels, RoundTripNames) {
  for (Label l : {Label::kLeft, Label::kRight, Label::kIndifferent}) {
    EXPECT_EQ(LabelFromString(LabelName(l)), l);
    EXPECT_EQ(LabelFromInt(static_cast<int>(l)), l);
  }
  EXPECT_FALSE(LabelFromString("maybe"));
  EXPECT_FALSE(LabelFromInt(2));
}

TEST(PreferenceObservation, RejectsIdenticalCandidates) {
  PreferenceObservation o;
  o.left = 3;
  o.right = 3;
  EXPECT_THROW(ValidateObservation(o), ContractError);
  o.right = 4;
  EXPECT_NO_THROW(ValidateObservation(o));
}

TEST(CheckFinite, RejectsNonFinite) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(3);
  EXPECT_NO_THROW(CheckFinite(v, "v"));
  v[1] = std::nan("");
  EXPECT_THROW(CheckFinite(v, "v"), ContractError);
  v[1] = INFINITY;
  EXPECT_THROW(CheckFinite(v, "v"), ContractError);
}

}  // namespace
}  // namespace prefpool

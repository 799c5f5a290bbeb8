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
#include <sstream>

#include "prefpool/core/errors.h"
#include "prefpool/core/utility.h"
#include "prefpool/learning/dataset.h"
#include "prefpool/learning/trainer.h"
#include "prefpool/learning/update_rules.h"
#include "test_support.h"

namespace prefpool {
namespace {

using testing::RandomVector;

// Builds a delta whose margin against w equals `margin`.
FeatureVector DeltaWithMargin(const WeightVector& w, double margin) {
  return w * (margin / w.squaredNorm());
}

TEST(UpdateFactor, ClosedFormExamples) {
  EXPECT_DOUBLE_EQ(UpdateFactorFromMargin(UpdateRule::kMleOnline, 0.0), 0.5);
  EXPECT_NEAR(UpdateFactorFromMargin(UpdateRule::kMleOnline, std::log(3.0)),
              0.25, 1e-15);
  EXPECT_EQ(UpdateFactorFromMargin(UpdateRule::kSpOnline, 0.1), 0.0);
  EXPECT_EQ(UpdateFactorFromMargin(UpdateRule::kSpOnline, 0.0), 0.0);
  EXPECT_EQ(UpdateFactorFromMargin(UpdateRule::kSpOnline, -0.1), 1.0);
  EXPECT_EQ(UpdateFactorFromMargin(UpdateRule::kPpOnline, 123.0), 1.0);
}

TEST(UpdateFactor, UsesInnerProduct) {
  const WeightVector w = Eigen::Vector2d(1, 1);
  const FeatureVector d = DeltaWithMargin(w, std::log(3.0));
  EXPECT_NEAR(UpdateFactor(UpdateRule::kMleOnline, w, d), 0.25, 1e-15);
  EXPECT_THROW(UpdateFactor(UpdateRule::kMleOnline, w, Eigen::Vector3d(1, 1, 1)),
               ContractError);
}

TEST(UpdateFactor, MleIsStrictlyDecreasingInUnitInterval) {
  double prev = 1.0;
  for (double x = -30.0; x <= 30.0; x += 0.25) {
    const double a = UpdateFactorFromMargin(UpdateRule::kMleOnline, x);
    EXPECT_GT(a, 0.0);
    EXPECT_LT(a, 1.0);
    EXPECT_LT(a, prev);
    prev = a;
  }
}

TEST(UpdateFactor, MleApproachesSpAwayFromBoundary) {
  for (double x : {-40.0, -20.0, -8.0, 8.0, 9.5, 20.0, 40.0}) {
    EXPECT_LT(std::abs(UpdateFactorFromMargin(UpdateRule::kMleOnline, x) -
                       UpdateFactorFromMargin(UpdateRule::kSpOnline, x)),
              1e-3)
        << x;
  }
}

TEST(UpdateFactor, SigmoidIsStableAtExtremes) {
  EXPECT_EQ(Sigmoid(-1000.0), 0.0);
  EXPECT_EQ(Sigmoid(1000.0), 1.0);
  EXPECT_TRUE(std::isfinite(Sigmoid(-745.0)));
}

TEST(RuleNames, RoundTrip) {
  for (UpdateRule r : {UpdateRule::kSpOnline, UpdateRule::kPpOnline,
                       UpdateRule::kMleOnline, UpdateRule::kMleBatch}) {
    EXPECT_EQ(ParseUpdateRule(UpdateRuleName(r)), r);
  }
  EXPECT_FALSE(ParseUpdateRule("adam"));
}

TEST(OnlineStep, PerceptronExample) {
  const WeightVector w = Eigen::Vector2d::Zero();
  EXPECT_EQ(OnlineStep(UpdateRule::kPpOnline, w, Eigen::Vector2d(1, -1), 1.0),
            Eigen::Vector2d(1, -1));
}

TEST(OnlineStep, SpLeavesCorrectPredictionUnchanged) {
  const WeightVector w = Eigen::Vector2d(1, 2);
  const FeatureVector d = Eigen::Vector2d(0.5, 0.5);
  EXPECT_EQ(OnlineStep(UpdateRule::kSpOnline, w, d, 3.0), w);
  EXPECT_EQ(OnlineStep(UpdateRule::kSpOnline, w, -d, 3.0), w - 3.0 * d);
}

TEST(OnlineStep, PpIsPlainGradientStep) {
  RandomSource rng(1, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const WeightVector w = RandomVector(5, rng);
    const FeatureVector d = RandomVector(5, rng);
    const double eta = rng.Uniform(0.01, 2.0);
    EXPECT_EQ(OnlineStep(UpdateRule::kPpOnline, w, d, eta), w + eta * d);
  }
}

TEST(OnlineStep, MleStepDecreasesNll) {
  RandomSource rng(2, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const WeightVector w = RandomVector(5, rng, -3, 3);
    const FeatureVector d = RandomVector(5, rng, -3, 3);
    const WeightVector next = OnlineStep(UpdateRule::kMleOnline, w, d, 1e-3);
    EXPECT_LT(Nll(next, d), Nll(w, d));
  }
}

TEST(Nll, ClosedFormExamples) {
  const WeightVector w = Eigen::Vector2d(1, 1);
  EXPECT_NEAR(Nll(w, Eigen::Vector2d(1, -1)), std::log(2.0), 1e-15);
  EXPECT_LT(Nll(w, DeltaWithMargin(w, 50.0)), 1e-20);
  EXPECT_NEAR(Nll(w, DeltaWithMargin(w, -800.0)), 800.0, 1e-9);
}

TEST(Nll, MatchesNaiveFormInSafeRange) {
  RandomSource rng(3, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const WeightVector w = RandomVector(5, rng, -2, 2);
    const FeatureVector d = RandomVector(5, rng, -2, 2);
    const double m = w.dot(d);
    EXPECT_NEAR(Nll(w, d), -std::log(1.0 / (1.0 + std::exp(-m))), 1e-12);
  }
}

TEST(Nll, GradientMatchesCentralDifferences) {
  RandomSource rng(4, 0);
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const WeightVector w = RandomVector(5, rng, -2, 2);
    const FeatureVector d = RandomVector(5, rng, -2, 2);
    const FeatureVector g = NllGrad(w, d);
    for (int i = 0; i < 5; ++i) {
      WeightVector hi = w, lo = w;
      hi[i] += h;
      lo[i] -= h;
      const double fd = (Nll(hi, d) - Nll(lo, d)) / (2 * h);
      EXPECT_NEAR(g[i], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(BatchRetrain, EmptyDatasetReturnsInit) {
  const WeightVector w = Eigen::Vector3d(1, 2, 3);
  EXPECT_EQ(BatchRetrain({}, w, LearnerConfig{}), w);
}

TEST(BatchRetrain, SingleExampleReducesToOnlineStep) {
  RandomSource rng(5, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const WeightVector w = RandomVector(4, rng);
    const FeatureVector d = RandomVector(4, rng);
    LearnerConfig cfg;
    cfg.learning_rate = rng.Uniform(0.1, 2.0);
    cfg.batch.epochs = 1;
    cfg.batch.batch_size = 1;
    const WeightVector expected =
        OnlineStep(UpdateRule::kMleOnline, w, d, cfg.learning_rate);
    const WeightVector got = BatchRetrain({{d}}, w, cfg);
    EXPECT_NEAR((got - expected).norm(), 0.0, 1e-12);
  }
}

TEST(BatchRetrain, FullBatchIsMeanGradientStep) {
  RandomSource rng(6, 0);
  std::vector<TrainingExample> data;
  for (int i = 0; i < 6; ++i) data.push_back({RandomVector(3, rng)});
  const WeightVector w = RandomVector(3, rng);
  LearnerConfig cfg;
  cfg.learning_rate = 0.7;
  cfg.batch.epochs = 1;
  cfg.batch.batch_size = 6;
  FeatureVector g = FeatureVector::Zero(3);
  for (const auto& e : data) g += NllGrad(w, e.delta);
  const WeightVector expected = w - 0.7 * g / 6.0;
  EXPECT_NEAR((BatchRetrain(data, w, cfg) - expected).norm(), 0.0, 1e-12);
}

TEST(BatchRetrain, RecoversRankingFromConsistentExamples) {
  constexpr int kDim = 5;
  constexpr int kRuns = 10;
  constexpr int kHeldOut = 1000;
  int correct = 0;
  for (int run = 0; run < kRuns; ++run) {
    RandomSource rng(7, run);
    const WeightVector w_star = RandomVector(kDim, rng, 0.2, 2.0);
    // Winner-minus-loser deltas a noiseless DM orders strictly: near-ties
    // (cosine with w_star below 0.1) are redrawn.
    const auto consistent = [&](RandomSource& r) {
      FeatureVector d;
      do {
        d = RandomVector(kDim, r, -1, 1);
      } while (std::abs(d.dot(w_star)) < 0.1 * d.norm() * w_star.norm());
      return d.dot(w_star) >= 0 ? d : FeatureVector(-d);
    };
    std::vector<TrainingExample> data;
    for (int i = 0; i < 20; ++i) data.push_back({consistent(rng)});
    LearnerConfig cfg;
    cfg.shuffle_seed = run;
    const WeightVector w =
        BatchRetrain(data, RandomVector(kDim, rng, 0, 2), cfg);
    for (int i = 0; i < kHeldOut; ++i) correct += consistent(rng).dot(w) > 0;
  }
  EXPECT_GE(correct, 0.95 * kRuns * kHeldOut);
}

TEST(BatchRetrain, DeterministicAndSeedSensitive) {
  RandomSource rng(8, 0);
  std::vector<TrainingExample> data;
  for (int i = 0; i < 13; ++i) data.push_back({RandomVector(4, rng)});
  const WeightVector w = RandomVector(4, rng);
  LearnerConfig cfg;
  cfg.shuffle_seed = 99;
  EXPECT_EQ(BatchRetrain(data, w, cfg, 3), BatchRetrain(data, w, cfg, 3));
  EXPECT_NE(BatchRetrain(data, w, cfg, 3), BatchRetrain(data, w, cfg, 4));
}

TEST(BatchRetrain, RejectsBadConfig) {
  LearnerConfig cfg;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(BatchRetrain({}, Eigen::Vector2d(1, 1), cfg), ContractError);
  cfg.learning_rate = 1.0;
  cfg.batch.batch_size = 0;
  EXPECT_THROW(ValidateLearnerConfig(cfg), ContractError);
}

TEST(Ensemble, InitializerMomentsNearOne) {
  RandomSource rng(9, 0);
  const Ensemble e = InitializeEnsemble(25, 5, rng);
  ASSERT_EQ(e.size(), 25);
  for (int j = 0; j < 5; ++j) {
    double mean = 0.0;
    for (int i = 0; i < 25; ++i) mean += e.member(i)[j];
    mean /= 25;
    double var = 0.0;
    for (int i = 0; i < 25; ++i) var += std::pow(e.member(i)[j] - mean, 2);
    var /= 24;
    EXPECT_NEAR(mean, 1.0, 0.6) << j;
    EXPECT_NEAR(var, 1.0, 0.6) << j;
  }
  EXPECT_THROW(InitializeEnsemble(0, 5, rng), ContractError);
}

TEST(Ensemble, SingleMemberMatchesSingleModel) {
  RandomSource rng(10, 0);
  const Ensemble e = InitializeEnsemble(1, 4, rng);
  const FeatureVector d = RandomVector(4, rng);
  for (UpdateRule r :
       {UpdateRule::kSpOnline, UpdateRule::kPpOnline, UpdateRule::kMleOnline}) {
    LearnerConfig cfg;
    cfg.rule = r;
    cfg.learning_rate = 0.5;
    const Ensemble next = EnsembleUpdate(e, {{d}}, {d}, cfg);
    EXPECT_EQ(next.member(0), OnlineStep(r, e.member(0), d, 0.5));
  }
}

TEST(Ensemble, IdenticalMembersStayIdenticalOnline) {
  RandomSource rng(11, 0);
  Ensemble e(Eigen::MatrixXd::Constant(6, 3, 0.4));
  LearnerConfig cfg;
  cfg.rule = UpdateRule::kMleOnline;
  cfg.learning_rate = 0.5;
  for (int step = 0; step < 30; ++step) {
    const FeatureVector d = RandomVector(3, rng);
    e = EnsembleUpdate(e, {}, {d}, cfg);
  }
  for (int i = 1; i < 6; ++i) EXPECT_EQ(e.member(i), e.member(0));
}

TEST(Ensemble, BatchRetrainsFromInitialMembers) {
  RandomSource rng(12, 0);
  const Ensemble e0 = InitializeEnsemble(4, 3, rng);
  std::vector<TrainingExample> data;
  for (int i = 0; i < 5; ++i) data.push_back({RandomVector(3, rng)});
  LearnerConfig cfg;
  const Ensemble e1 = EnsembleUpdate(e0, data, data.back(), cfg);
  const Ensemble e2 = EnsembleUpdate(e1, data, data.back(), cfg);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(e1.initial_member(i), e0.member(i));
    EXPECT_EQ(e2.member(i), e1.member(i));
    EXPECT_EQ(e1.member(i), BatchRetrain(data, e0.member(i), cfg, i));
  }
  cfg.batch.warm_start = true;
  const Ensemble warm = EnsembleUpdate(e1, data, data.back(), cfg);
  EXPECT_EQ(warm.member(0), BatchRetrain(data, e1.member(0), cfg, 0));
}

TEST(Dataset, CheckpointRoundTrip) {
  std::vector<DatasetEntry> entries(3);
  entries[0].observation = {0, 1, 2, Label::kLeft, 1.25};
  entries[0].delta = Eigen::Vector3d(0.1, -0.2, 1.0 / 3.0);
  entries[1].observation = {4, 7, 3, Label::kIndifferent, std::nullopt};
  entries[2].observation = {1, 0, 9, Label::kRight, std::nullopt};
  entries[2].delta = Eigen::Vector3d(1e-300, 5e300, -0.0);
  std::stringstream buffer;
  WriteDatasetCheckpoint(buffer, entries);
  const auto back = ReadDatasetCheckpoint(buffer);
  ASSERT_EQ(back.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].observation.context_id, entries[i].observation.context_id);
    EXPECT_EQ(back[i].observation.left, entries[i].observation.left);
    EXPECT_EQ(back[i].observation.right, entries[i].observation.right);
    EXPECT_EQ(back[i].observation.label, entries[i].observation.label);
    EXPECT_EQ(back[i].observation.response_seconds,
              entries[i].observation.response_seconds);
    EXPECT_EQ(back[i].delta.has_value(), entries[i].delta.has_value());
    if (back[i].delta) {
      EXPECT_EQ(*back[i].delta, *entries[i].delta);
    }
  }
}

TEST(Dataset, RejectsMalformedLines) {
  std::stringstream bad_label(R"({"context_id":0,"left":1,"right":2,"label":5})");
  EXPECT_THROW(ReadDatasetCheckpoint(bad_label), ConfigError);
  std::stringstream same(R"({"context_id":0,"left":1,"right":1,"label":1})");
  EXPECT_THROW(ReadDatasetCheckpoint(same), ConfigError);
  std::stringstream junk("not json\n");
  EXPECT_THROW(ReadDatasetCheckpoint(junk), ConfigError);
}

}  // namespace
}  // namespace prefpool

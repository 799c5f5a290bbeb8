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

#include "prefpool/selection/acquisition.h"

#include <algorithm>
#include <limits>

#include "prefpool/core/errors.h"

namespace prefpool {

struct ScoreCacheAccess {
  static std::optional<Eigen::VectorXd>& Global(ScoreCache& c) {
    return c.global_;
  }
  static std::optional<Eigen::VectorXd>& Cluster(ScoreCache& c, int k,
                                                 int index) {
    if (static_cast<int>(c.clusters_.size()) != k) c.clusters_.assign(k, {});
    return c.clusters_[index];
  }
};

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double ModeGamma(AcquisitionMode mode, int t) {
  switch (mode) {
    case AcquisitionMode::kMeanOnly:
      return 0.0;
    case AcquisitionMode::kVarianceOnly:
      return 1.0;
    default:
      return GammaSchedule(t);
  }
}

Eigen::VectorXd UcbScores(const Ensemble& ensemble,
                          const FeatureMatrix& features, double gamma) {
  Eigen::VectorXd mean, std;
  ComputeEnsembleStatsBatch(ensemble, features, mean, std);
  return (1.0 - gamma) * mean + gamma * std;
}

// Index of the best score; ties to the lowest index. `skip` rows are
// ignored. Returns -1 when every row is skipped.
template <typename Skip>
Eigen::Index ArgmaxWhere(const Eigen::VectorXd& scores, Skip skip) {
  Eigen::Index best = -1;
  double best_score = kNegInf;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (skip(i)) continue;
    if (best < 0 || scores[i] > best_score) {
      best = i;
      best_score = scores[i];
    }
  }
  return best;
}

bool SameFeatures(const FeatureMatrix& f, Eigen::Index a, Eigen::Index b) {
  return f.row(a) == f.row(b);
}

// Rows flagged in `mask` are skipped; an empty mask skips nothing.
using Mask = std::vector<char>;

bool Masked(const Mask& mask, Eigen::Index i) {
  return !mask.empty() && mask[i];
}

QueryPair GlobalTopTwo(const FeatureMatrix& features,
                       const Eigen::VectorXd& scores, const Mask& mask) {
  const Eigen::Index first =
      ArgmaxWhere(scores, [&](Eigen::Index i) { return Masked(mask, i); });
  if (first < 0) {
    throw DegeneratePoolError("every candidate is excluded");
  }
  const Eigen::Index second = ArgmaxWhere(scores, [&](Eigen::Index i) {
    return Masked(mask, i) || SameFeatures(features, i, first);
  });
  if (first < 0 || second < 0) {
    throw DegeneratePoolError(
        "pool has no two candidates with distinct feature vectors");
  }
  return {static_cast<CandidateId>(first), static_cast<CandidateId>(second)};
}

QueryPair ChoicePerceptronQuery(const ClusteredPool& pool,
                                const Ensemble& ensemble, int t,
                                const Mask& mask) {
  const FeatureMatrix& f = *pool.features;
  const WeightVector w = ensemble.Mean();
  const Eigen::VectorXd u = f * w;
  const Eigen::Index first =
      ArgmaxWhere(u, [&](Eigen::Index i) { return Masked(mask, i); });
  if (first < 0) {
    throw DegeneratePoolError("every candidate is excluded");
  }
  const double gamma = GammaSchedule(t);
  const Eigen::VectorXd l1 =
      (f.rowwise() - f.row(first)).cwiseAbs().rowwise().sum();
  const Eigen::VectorXd score = (1.0 - gamma) * u + gamma * l1;
  const Eigen::Index second = ArgmaxWhere(score, [&](Eigen::Index i) {
    return Masked(mask, i) || SameFeatures(f, i, first);
  });
  if (second < 0) {
    throw DegeneratePoolError(
        "pool has no two candidates with distinct feature vectors");
  }
  return {static_cast<CandidateId>(first), static_cast<CandidateId>(second)};
}

}  // namespace

std::optional<AcquisitionMode> ParseAcquisitionMode(const std::string& name) {
  if (name == "ucb") return AcquisitionMode::kUcb;
  if (name == "mean") return AcquisitionMode::kMeanOnly;
  if (name == "variance") return AcquisitionMode::kVarianceOnly;
  if (name == "choiceperc-pool") return AcquisitionMode::kChoicePercPool;
  return std::nullopt;
}

std::string AcquisitionModeName(AcquisitionMode mode) {
  switch (mode) {
    case AcquisitionMode::kUcb:
      return "ucb";
    case AcquisitionMode::kMeanOnly:
      return "mean";
    case AcquisitionMode::kVarianceOnly:
      return "variance";
    case AcquisitionMode::kChoicePercPool:
      return "choiceperc-pool";
  }
  return "?";
}

double GammaSchedule(int t) {
  return std::clamp(1.0 / std::max(t, 1), 0.0, 1.0);
}

double UcbScore(const Ensemble& ensemble, const FeatureVector& phi,
                double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ContractError("UCB gamma must lie in [0, 1]");
  }
  const EnsembleStats stats = ComputeEnsembleStats(ensemble, phi);
  return (1.0 - gamma) * stats.mean + gamma * stats.std;
}

namespace {

const Eigen::VectorXd& CachedScores(std::optional<Eigen::VectorXd>& slot,
                                    const Ensemble& ensemble,
                                    const FeatureMatrix& features,
                                    double gamma) {
  if (!slot) slot = UcbScores(ensemble, features, gamma);
  return *slot;
}

QueryPair SelectMasked(const ClusteredPool& pool, const Ensemble& ensemble,
                       const AcquisitionConfig& config, int t,
                       RandomSource& rng, const Mask& mask,
                       ScoreCache& cache) {
  if (config.mode == AcquisitionMode::kChoicePercPool) {
    return ChoicePerceptronQuery(pool, ensemble, t, mask);
  }
  const double gamma = ModeGamma(config.mode, t);
  const FeatureMatrix& f = *pool.features;
  if (pool.k() >= 2) {
    for (int attempt = 0; attempt < config.cluster_retry_budget; ++attempt) {
      // Two distinct clusters, uniformly without replacement.
      const int a = static_cast<int>(rng.UniformIndex(pool.k()));
      int b = static_cast<int>(rng.UniformIndex(pool.k() - 1));
      if (b >= a) ++b;
      CandidateId picked[2] = {-1, -1};
      const int chosen[2] = {a, b};
      for (int s = 0; s < 2; ++s) {
        const std::vector<CandidateId>& members = pool.clusters[chosen[s]];
        const Eigen::VectorXd& scores = CachedScores(
            ScoreCacheAccess::Cluster(cache, pool.k(), chosen[s]), ensemble,
            pool.cluster_features[chosen[s]], gamma);
        const Eigen::Index local = ArgmaxWhere(scores, [&](Eigen::Index i) {
          return Masked(mask, members[i]);
        });
        if (local >= 0) picked[s] = members[local];
      }
      if (picked[0] >= 0 && picked[1] >= 0 &&
          !SameFeatures(f, picked[0], picked[1])) {
        return {picked[0], picked[1]};
      }
    }
  }
  return GlobalTopTwo(
      f, CachedScores(ScoreCacheAccess::Global(cache), ensemble, f, gamma),
      mask);
}

}  // namespace

QueryPair SelectQuery(const ClusteredPool& pool, const Ensemble& ensemble,
                      const AcquisitionConfig& config, int t,
                      RandomSource& rng,
                      const std::vector<CandidateId>& exclude,
                      ScoreCache* cache) {
  ScoreCache local;
  ScoreCache& scores = cache ? *cache : local;
  if (pool.size() < 2) {
    throw DegeneratePoolError("pool has fewer than two candidates");
  }
  if (!exclude.empty()) {
    Mask mask(pool.size(), 0);
    for (CandidateId id : exclude) {
      if (id < 0 || id >= pool.size()) {
        throw ContractError("excluded candidate id out of range");
      }
      mask[id] = 1;
    }
    try {
      return SelectMasked(pool, ensemble, config, t, rng, mask, scores);
    } catch (const DegeneratePoolError&) {
      // Too few candidates left; ignore the exclusions.
    }
  }
  return SelectMasked(pool, ensemble, config, t, rng, Mask{}, scores);
}

}  // namespace prefpool

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

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "prefpool/core/random.h"
#include "prefpool/core/utility.h"
#include "prefpool/learning/trainer.h"
#include "prefpool/problems/tsp.h"
#include "prefpool/problems/tsp_solver.h"
#include "prefpool/selection/acquisition.h"
#include "prefpool/selection/kmeans.h"

namespace prefpool {
namespace {

std::shared_ptr<const FeatureMatrix> TourFeatures(int count, uint64_t seed) {
  RandomSource rng(seed, 0);
  const TspInstance inst = TspGenerateInstance(10, rng);
  const std::vector<Tour> tours = TspSampleRelaxed(inst, rng, count).items;
  auto f = std::make_shared<FeatureMatrix>(tours.size(), kTspFeatureDim);
  for (size_t i = 0; i < tours.size(); ++i) {
    f->row(i) = TspFeatures(inst, tours[i]).transpose();
  }
  return f;
}

WeightVector SimplexWeights(RandomSource& rng) {
  WeightVector w(kTspFeatureDim);
  for (int i = 0; i < kTspFeatureDim; ++i) w[i] = rng.Uniform(0.01, 1.0);
  return w / w.sum();
}

// Args: pool size, clusters.
void BM_SelectQuery(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  RandomSource rng(1, 0);
  const auto features = TourFeatures(size, 1);
  const ClusteredPool pool =
      k > 0 ? KMeansPlusPlus(features, k, rng) : UnclusteredPool(features);
  const Ensemble ensemble = InitializeEnsemble(25, kTspFeatureDim, rng);
  AcquisitionConfig config;
  config.clusters = k;
  int t = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SelectQuery(pool, ensemble, config, t++, rng));
  }
}
BENCHMARK(BM_SelectQuery)
    ->Args({1'000, 5})
    ->Args({10'000, 5})
    ->Args({1'000, 0})
    ->Args({10'000, 0})
    ->Unit(benchmark::kMicrosecond);

void BM_KMeansPlusPlus(benchmark::State& state) {
  const auto features = TourFeatures(static_cast<int>(state.range(0)), 2);
  RandomSource rng(2, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(KMeansPlusPlus(features, 5, rng));
  }
}
BENCHMARK(BM_KMeansPlusPlus)->Arg(1'000)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_TspSolveExact(benchmark::State& state) {
  RandomSource rng(3, 0);
  const TspInstance inst = TspGenerateInstance(static_cast<int>(state.range(0)), rng);
  const WeightVector w = SimplexWeights(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(TspSolveExact(inst, w));
  }
}
BENCHMARK(BM_TspSolveExact)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);

void BM_BatchRetrain(benchmark::State& state) {
  RandomSource rng(4, 0);
  std::vector<TrainingExample> dataset;
  for (int i = 0; i < state.range(0); ++i) {
    FeatureVector d(kTspFeatureDim);
    for (int j = 0; j < kTspFeatureDim; ++j) d[j] = rng.Uniform(-10.0, 10.0);
    dataset.push_back({d});
  }
  const WeightVector w0 = SimplexWeights(rng);
  const LearnerConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(BatchRetrain(dataset, w0, config));
  }
}
BENCHMARK(BM_BatchRetrain)->Arg(10)->Arg(100)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace prefpool

BENCHMARK_MAIN();

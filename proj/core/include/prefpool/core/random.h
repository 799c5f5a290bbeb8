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

#ifndef PREFPOOL_CORE_RANDOM_H_
#define PREFPOOL_CORE_RANDOM_H_

#include <cstdint>
#include <random>
#include <vector>

namespace prefpool {

// Deterministic random stream keyed by (seed, stream). Identical keys give
// identical draw sequences; Derive() produces independent sub-streams so
// parallel work can be made independent of worker count.
class RandomSource {
 public:
  RandomSource(uint64_t seed, uint64_t stream);

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

  // Sub-stream whose key mixes this stream's key with `child`.
  RandomSource Derive(uint64_t child) const;

  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi);
  // Uniform in [0, n). Requires n > 0.
  uint64_t UniformIndex(uint64_t n);
  double Normal(double mean, double stddev);
  double LogNormal(double mu, double sigma);
  double Gamma(double shape);

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[UniformIndex(i)]);
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  uint64_t seed_;
  uint64_t stream_;
  std::mt19937_64 engine_;
};

// Stateless 64-bit mixer, used to combine seeds and stream ids.
uint64_t MixSeed(uint64_t a, uint64_t b);

}  // namespace prefpool

#endif  // PREFPOOL_CORE_RANDOM_H_

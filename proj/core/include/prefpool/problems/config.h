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

#ifndef PREFPOOL_PROBLEMS_CONFIG_H_
#define PREFPOOL_PROBLEMS_CONFIG_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "prefpool/core/random.h"
#include "prefpool/core/types.h"

namespace prefpool {

struct ConfigOption {
  std::string name;
  double price = 0.0;
};

struct ConfigComponent {
  std::string name;
  std::vector<ConfigOption> options;
};

struct OptionRef {
  int component = 0;
  int option = 0;
  bool operator==(const OptionRef&) const = default;
};

// Two options that may not be selected together.
struct ForbiddenPair {
  OptionRef first;
  OptionRef second;
};

// One option index per component.
struct ConfigAssignment {
  std::vector<int> choice;
  bool operator==(const ConfigAssignment&) const = default;
};

// Product catalog for the configuration task. Features are one Boolean per
// option (one-hot per component) plus the negated normalized total price.
class ConfigCatalog {
 public:
  ConfigCatalog() = default;
  // Validates indices and prices; throws ContractError.
  ConfigCatalog(std::vector<ConfigComponent> components,
                std::vector<ForbiddenPair> constraints);

  const std::vector<ConfigComponent>& components() const {
    return components_;
  }
  const std::vector<ForbiddenPair>& constraints() const {
    return constraints_;
  }
  int component_count() const { return static_cast<int>(components_.size()); }
  int option_count() const { return option_count_; }
  // option_count() Boolean entries + price.
  int feature_dim() const { return option_count_ + 1; }
  // Position of component c's first option in the feature vector.
  int offset(int component) const { return offsets_[component]; }
  // Maximum total price over all assignments, feasible or not.
  double price_max() const { return price_max_; }
  // Number of assignments in the unconstrained product.
  uint64_t product_size() const;

  void Validate(const ConfigAssignment& y) const;
  bool IsFeasible(const ConfigAssignment& y) const;
  double TotalPrice(const ConfigAssignment& y) const;
  // Mixed-radix rank of y in lexicographic order.
  uint64_t Rank(const ConfigAssignment& y) const;

 private:
  std::vector<ConfigComponent> components_;
  std::vector<ForbiddenPair> constraints_;
  std::vector<int> offsets_;
  int option_count_ = 0;
  double price_max_ = 0.0;
};

FeatureVector ConfigFeatures(const ConfigCatalog& catalog,
                             const ConfigAssignment& y);

// <w, ConfigFeatures(y)> without materializing the one-hot vector.
double ConfigUtility(const ConfigCatalog& catalog, const WeightVector& w,
                     const ConfigAssignment& y);

inline constexpr uint64_t kDefaultEnumerationCap = 10'000'000;

// All assignments that violate no forbidden pair, in lexicographic order
// (component 0 most significant). Throws CapExceededError when the product
// of option counts exceeds `cap`.
std::vector<ConfigAssignment> ConfigEnumerateFeasible(
    const ConfigCatalog& catalog, uint64_t cap = kDefaultEnumerationCap);

template <typename T>
struct SampledSet {
  std::vector<T> items;
  // Set when the retry budget ran out before `count` distinct items were
  // found.
  bool budget_exhausted = false;
};

// Distinct assignments, each option drawn uniformly per component;
// constraints are ignored. Gives up after `max_attempts` draws (0 picks a
// default proportional to count).
SampledSet<ConfigAssignment> ConfigSampleRelaxed(const ConfigCatalog& catalog,
                                                 RandomSource& rng, int count,
                                                 int64_t max_attempts = 0);

// Synthetic catalog: option prices log-uniform in [price_lo, price_hi],
// `forbidden_pairs` distinct random cross-component pairs.
struct CatalogShape {
  std::vector<std::pair<std::string, int>> components;
  int forbidden_pairs = 15;
  double price_lo = 20.0;
  double price_hi = 800.0;
};

// 7 components, 77 options in total.
CatalogShape DefaultCatalogShape();

ConfigCatalog GenerateCatalog(const CatalogShape& shape, RandomSource& rng);

}  // namespace prefpool

#endif  // PREFPOOL_PROBLEMS_CONFIG_H_

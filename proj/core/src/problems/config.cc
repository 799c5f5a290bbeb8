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

#include "prefpool/problems/config.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "prefpool/core/errors.h"
#include "prefpool/core/utility.h"

namespace prefpool {

ConfigCatalog::ConfigCatalog(std::vector<ConfigComponent> components,
                             std::vector<ForbiddenPair> constraints)
    : components_(std::move(components)), constraints_(std::move(constraints)) {
  if (components_.empty()) throw ContractError("catalog has no components");
  offsets_.reserve(components_.size());
  for (const ConfigComponent& c : components_) {
    if (c.options.empty()) {
      throw ContractError("component '" + c.name + "' has no options");
    }
    offsets_.push_back(option_count_);
    option_count_ += static_cast<int>(c.options.size());
    double most = 0.0;
    for (const ConfigOption& o : c.options) {
      if (!(o.price >= 0.0) || !std::isfinite(o.price)) {
        throw ContractError("option '" + o.name + "' has an invalid price");
      }
      most = std::max(most, o.price);
    }
    price_max_ += most;
  }
  if (!(price_max_ > 0.0)) throw ContractError("catalog price_max must be > 0");
  auto valid = [&](const OptionRef& r) {
    return r.component >= 0 && r.component < component_count() &&
           r.option >= 0 &&
           r.option < static_cast<int>(components_[r.component].options.size());
  };
  for (const ForbiddenPair& p : constraints_) {
    if (!valid(p.first) || !valid(p.second)) {
      throw ContractError("forbidden pair references an invalid option");
    }
    if (p.first.component == p.second.component) {
      throw ContractError("forbidden pair within a single component");
    }
  }
}

uint64_t ConfigCatalog::product_size() const {
  uint64_t size = 1;
  for (const ConfigComponent& c : components_) {
    const uint64_t k = c.options.size();
    if (size > UINT64_MAX / k) return UINT64_MAX;
    size *= k;
  }
  return size;
}

void ConfigCatalog::Validate(const ConfigAssignment& y) const {
  if (y.choice.size() != components_.size()) {
    throw ContractError("assignment has " + std::to_string(y.choice.size()) +
                        " choices for " + std::to_string(components_.size()) +
                        " components");
  }
  for (size_t c = 0; c < components_.size(); ++c) {
    if (y.choice[c] < 0 ||
        y.choice[c] >= static_cast<int>(components_[c].options.size())) {
      throw ContractError("assignment option out of range for component '" +
                          components_[c].name + "'");
    }
  }
}

bool ConfigCatalog::IsFeasible(const ConfigAssignment& y) const {
  for (const ForbiddenPair& p : constraints_) {
    if (y.choice[p.first.component] == p.first.option &&
        y.choice[p.second.component] == p.second.option) {
      return false;
    }
  }
  return true;
}

double ConfigCatalog::TotalPrice(const ConfigAssignment& y) const {
  double total = 0.0;
  for (size_t c = 0; c < components_.size(); ++c) {
    total += components_[c].options[y.choice[c]].price;
  }
  return total;
}

uint64_t ConfigCatalog::Rank(const ConfigAssignment& y) const {
  uint64_t rank = 0;
  for (size_t c = 0; c < components_.size(); ++c) {
    rank = rank * components_[c].options.size() + y.choice[c];
  }
  return rank;
}

FeatureVector ConfigFeatures(const ConfigCatalog& catalog,
                             const ConfigAssignment& y) {
  catalog.Validate(y);
  FeatureVector phi = FeatureVector::Zero(catalog.feature_dim());
  for (int c = 0; c < catalog.component_count(); ++c) {
    phi[catalog.offset(c) + y.choice[c]] = 1.0;
  }
  phi[catalog.option_count()] = -catalog.TotalPrice(y) / catalog.price_max();
  return phi;
}

double ConfigUtility(const ConfigCatalog& catalog, const WeightVector& w,
                     const ConfigAssignment& y) {
  if (w.size() != catalog.feature_dim()) {
    throw ContractError("utility: dimension mismatch");
  }
  double u = 0.0;
  for (int c = 0; c < catalog.component_count(); ++c) {
    u += w[catalog.offset(c) + y.choice[c]];
  }
  return u + w[catalog.option_count()] *
                 (-catalog.TotalPrice(y) / catalog.price_max());
}

std::vector<ConfigAssignment> ConfigEnumerateFeasible(
    const ConfigCatalog& catalog, uint64_t cap) {
  if (catalog.product_size() > cap) {
    throw CapExceededError("catalog has " +
                           std::to_string(catalog.product_size()) +
                           " assignments, above the enumeration cap of " +
                           std::to_string(cap));
  }
  std::vector<ConfigAssignment> out;
  ConfigAssignment y{std::vector<int>(catalog.component_count(), 0)};
  const int last = catalog.component_count() - 1;
  while (true) {
    if (catalog.IsFeasible(y)) out.push_back(y);
    // Odometer increment, last component fastest.
    int c = last;
    while (c >= 0) {
      if (++y.choice[c] <
          static_cast<int>(catalog.components()[c].options.size())) {
        break;
      }
      y.choice[c] = 0;
      --c;
    }
    if (c < 0) break;
  }
  return out;
}

SampledSet<ConfigAssignment> ConfigSampleRelaxed(const ConfigCatalog& catalog,
                                                 RandomSource& rng, int count,
                                                 int64_t max_attempts) {
  if (count < 1) throw ContractError("sample count must be >= 1");
  if (max_attempts <= 0) max_attempts = 50LL * count + 1000;
  SampledSet<ConfigAssignment> result;
  std::unordered_set<uint64_t> seen;
  ConfigAssignment y{std::vector<int>(catalog.component_count(), 0)};
  int64_t attempts = 0;
  while (static_cast<int>(result.items.size()) < count) {
    if (attempts++ >= max_attempts) {
      result.budget_exhausted = true;
      break;
    }
    for (int c = 0; c < catalog.component_count(); ++c) {
      y.choice[c] = static_cast<int>(
          rng.UniformIndex(catalog.components()[c].options.size()));
    }
    if (seen.insert(catalog.Rank(y)).second) result.items.push_back(y);
  }
  return result;
}

CatalogShape DefaultCatalogShape() {
  CatalogShape shape;
  shape.components = {{"type", 2},    {"manufacturer", 3}, {"cpu", 4},
                      {"memory", 4},  {"storage", 5},      {"display", 3},
                      {"model", 56}};
  return shape;
}

ConfigCatalog GenerateCatalog(const CatalogShape& shape, RandomSource& rng) {
  std::vector<ConfigComponent> components;
  const double log_lo = std::log(shape.price_lo);
  const double log_hi = std::log(shape.price_hi);
  for (const auto& [name, count] : shape.components) {
    ConfigComponent component{name, {}};
    for (int i = 0; i < count; ++i) {
      const double price = std::exp(rng.Uniform(log_lo, log_hi));
      // Whole currency units keep catalog files readable.
      component.options.push_back(
          {name + "-" + std::to_string(i + 1), std::round(price)});
    }
    components.push_back(std::move(component));
  }
  // Forbidden pairs: a uniformly random option, then a uniformly random
  // option of another component.
  std::vector<OptionRef> all;
  for (int c = 0; c < static_cast<int>(components.size()); ++c) {
    for (int o = 0; o < static_cast<int>(components[c].options.size()); ++o) {
      all.push_back({c, o});
    }
  }
  std::vector<ForbiddenPair> constraints;
  if (components.size() >= 2) {
    int guard = 0;
    while (static_cast<int>(constraints.size()) < shape.forbidden_pairs &&
           guard++ < 100 * shape.forbidden_pairs) {
      const OptionRef a = all[rng.UniformIndex(all.size())];
      const uint64_t others =
          all.size() - components[a.component].options.size();
      uint64_t pick = rng.UniformIndex(others);
      OptionRef b;
      for (const OptionRef& r : all) {
        if (r.component == a.component) continue;
        if (pick-- == 0) {
          b = r;
          break;
        }
      }
      ForbiddenPair pair = a.component < b.component ? ForbiddenPair{a, b}
                                                     : ForbiddenPair{b, a};
      const bool duplicate = std::any_of(
          constraints.begin(), constraints.end(), [&](const ForbiddenPair& p) {
            return p.first == pair.first && p.second == pair.second;
          });
      if (!duplicate) constraints.push_back(pair);
    }
  }
  return ConfigCatalog(std::move(components), std::move(constraints));
}

}  // namespace prefpool

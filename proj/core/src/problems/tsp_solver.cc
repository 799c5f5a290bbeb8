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

#include "prefpool/problems/tsp_solver.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "prefpool/core/errors.h"
#include "prefpool/core/utility.h"

namespace prefpool {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// True when tour `a` should win a tie against `b`.
bool PreferOnTie(const Tour& a, const Tour& b) {
  std::vector<int> sa = a.visit_order;
  std::vector<int> sb = b.visit_order;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return sa < sb;
  return a.visit_order < b.visit_order;
}

}  // namespace

Tour TspSolveExact(const TspInstance& inst, const WeightVector& w,
                   const ExactSolverConfig& config) {
  const int v = inst.node_count;
  if (v > config.max_nodes) {
    throw CapExceededError("exact solver is capped at " +
                           std::to_string(config.max_nodes) + " nodes, got " +
                           std::to_string(v));
  }
  if (w.size() != kTspFeatureDim) {
    throw ContractError("utility: dimension mismatch");
  }
  if (v < 2) throw ContractError("instance needs at least 2 nodes");

  // Scalarized cost; minimizing it maximizes the utility.
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(v, v);
  for (int l = 0; l < kTspChannels; ++l) cost += w[l] * inst.edge_values[l];
  std::vector<double> skip(v);
  for (int i = 0; i < v; ++i) skip[i] = w[kTspChannels] * inst.penalties[i];

  const int customers = v - 1;
  const uint32_t full = (1u << customers);
  // dp[mask * customers + j]: cheapest path from the depot through exactly
  // `mask`, ending at customer j (bit j set).
  std::vector<double> dp(static_cast<size_t>(full) * customers, kInf);
  std::vector<int8_t> parent(static_cast<size_t>(full) * customers, -1);
  auto at = [customers](uint32_t mask, int j) {
    return static_cast<size_t>(mask) * customers + j;
  };
  for (int j = 0; j < customers; ++j) dp[at(1u << j, j)] = cost(0, j + 1);
  for (uint32_t mask = 1; mask < full; ++mask) {
    for (int j = 0; j < customers; ++j) {
      if (!(mask & (1u << j))) continue;
      const double base = dp[at(mask, j)];
      if (base == kInf) continue;
      for (int k = 0; k < customers; ++k) {
        if (mask & (1u << k)) continue;
        const uint32_t next = mask | (1u << k);
        const double c = base + cost(j + 1, k + 1);
        if (c < dp[at(next, k)]) {
          dp[at(next, k)] = c;
          parent[at(next, k)] = static_cast<int8_t>(j);
        }
      }
    }
  }

  std::vector<double> prize_of(full, 0.0);
  std::vector<double> skipped_of(full, 0.0);
  for (uint32_t mask = 0; mask < full; ++mask) {
    double prize = 0.0, skipped = 0.0;
    for (int b = 0; b < customers; ++b) {
      if (mask & (1u << b)) {
        prize += inst.prizes[b + 1];
      } else {
        skipped += skip[b + 1];
      }
    }
    prize_of[mask] = prize;
    skipped_of[mask] = skipped;
  }

  auto reconstruct = [&](uint32_t mask, int last) {
    Tour tour;
    std::vector<int> reversed;
    while (mask) {
      reversed.push_back(last + 1);
      const int prev = parent[at(mask, last)];
      mask &= ~(1u << last);
      last = prev;
    }
    tour.visit_order.push_back(0);
    tour.visit_order.insert(tour.visit_order.end(), reversed.rbegin(),
                            reversed.rend());
    return tour;
  };

  // Best closing per subset, by DP cost.
  struct Entry {
    double total;
    uint32_t mask;
    int last;  // -1 for the depot-only tour
  };
  std::vector<Entry> entries;
  entries.reserve(full);
  for (uint32_t mask = 0; mask < full; ++mask) {
    if (prize_of[mask] < inst.prize_quota) continue;
    if (mask == 0) {
      entries.push_back({skipped_of[0], 0, -1});
      continue;
    }
    double best = kInf;
    int best_last = -1;
    for (int j = 0; j < customers; ++j) {
      if (!(mask & (1u << j))) continue;
      const double c = dp[at(mask, j)] + cost(j + 1, 0);
      if (c < best) {
        best = c;
        best_last = j;
      }
    }
    entries.push_back({best + skipped_of[mask], mask, best_last});
  }
  if (entries.empty()) {
    throw InfeasibleError("no tour collects the prize quota");
  }
  double best_total = kInf;
  for (const Entry& e : entries) best_total = std::min(best_total, e.total);

  // DP sums and the canonical feature evaluation can differ in the last
  // bits; settle near-ties on the canonical utility.
  const double slack = 1e-9 * std::max(1.0, std::abs(best_total));
  Tour best_tour;
  double best_utility = -kInf;
  bool have = false;
  for (const Entry& e : entries) {
    if (e.total > best_total + slack) continue;
    Tour tour = e.last < 0 ? Tour{{0}} : reconstruct(e.mask, e.last);
    const double u = Utility(w, TspFeatures(inst, tour));
    if (!have || u > best_utility ||
        (u == best_utility && PreferOnTie(tour, best_tour))) {
      best_tour = std::move(tour);
      best_utility = u;
      have = true;
    }
  }
  return best_tour;
}

}  // namespace prefpool

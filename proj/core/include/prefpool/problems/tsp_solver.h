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

#ifndef PREFPOOL_PROBLEMS_TSP_SOLVER_H_
#define PREFPOOL_PROBLEMS_TSP_SOLVER_H_

#include "prefpool/core/types.h"
#include "prefpool/problems/tsp.h"

namespace prefpool {

struct ExactSolverConfig {
  int max_nodes = 16;
};

// Feasible tour maximizing <w, TspFeatures(tour)>, by Held-Karp dynamic
// programming over (visited subset, last node) with the scalarized edge cost
// sum_l w_l v_l(i, j) and the skip penalty w_4 * rho_i. Equal-value tours are
// resolved towards the lexicographically smallest visit set, then visit
// order.
//
// Throws CapExceededError when node_count > config.max_nodes and
// InfeasibleError when no subset reaches the prize quota.
Tour TspSolveExact(const TspInstance& instance, const WeightVector& w,
                   const ExactSolverConfig& config = {});

}  // namespace prefpool

#endif  // PREFPOOL_PROBLEMS_TSP_SOLVER_H_

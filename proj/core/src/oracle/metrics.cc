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

#include "prefpool/oracle/metrics.h"

#include <algorithm>
#include <cmath>

#include "prefpool/core/errors.h"

namespace prefpool {

double RelativeRegret(ObjectiveSense sense, double u_star_opt, double u_hat) {
  double shortfall = u_star_opt - u_hat;
  const double scale = std::max(1.0, std::abs(u_star_opt));
  if (shortfall < 0.0) {
    if (shortfall < -1e-9 * scale) {
      throw ContractError("synthesized utility exceeds the stated optimum");
    }
    shortfall = 0.0;
  }
  const double den =
      std::abs(sense == ObjectiveSense::kMinimize ? -u_star_opt : u_star_opt);
  if (den < 1e-12) {
    if (shortfall < 1e-12) return 0.0;
    throw ContractError("relative regret undefined for a zero optimum");
  }
  return shortfall / den;
}

bool DmSatisfied(const SimulatedDM& dm, double u_star_opt, double u_hat) {
  return std::abs(u_star_opt - u_hat) < dm.eps_ind;
}

std::optional<int> QueriesToThreshold(const std::vector<double>& regret_curve,
                                      double threshold) {
  for (size_t t = 0; t < regret_curve.size(); ++t) {
    if (regret_curve[t] < threshold) return static_cast<int>(t) + 1;
  }
  return std::nullopt;
}

MeanAndStderr Summarize(const std::vector<double>& values) {
  MeanAndStderr out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / values.size();
  if (values.size() >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std_error = std::sqrt(ss / (values.size() - 1)) /
                  std::sqrt(static_cast<double>(values.size()));
  }
  return out;
}

}  // namespace prefpool

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

#ifndef PREFPOOL_CORE_UTILITY_H_
#define PREFPOOL_CORE_UTILITY_H_

#include <vector>

#include <Eigen/Core>

#include "prefpool/core/types.h"

namespace prefpool {

// Linear utility <w, phi>. Throws ContractError on dimension mismatch.
double Utility(const WeightVector& w, const FeatureVector& phi);

// phi_plus - phi_minus.
FeatureVector Delta(const FeatureVector& phi_plus,
                    const FeatureVector& phi_minus);

// Throws ContractError if any entry is NaN or infinite.
void CheckFinite(const Eigen::Ref<const Eigen::VectorXd>& values,
                 const char* what);

// Ensemble of weight vectors. Keeps the t=0 initialization alongside the
// current members because batch retraining restarts from it.
class Ensemble {
 public:
  Ensemble() = default;
  // Rows of `members` are the weight vectors; initial = members.
  explicit Ensemble(Eigen::MatrixXd members);
  Ensemble(Eigen::MatrixXd members, Eigen::MatrixXd initial);

  int size() const { return static_cast<int>(members_.rows()); }
  int dim() const { return static_cast<int>(members_.cols()); }

  WeightVector member(int i) const { return members_.row(i).transpose(); }
  WeightVector initial_member(int i) const {
    return initial_.row(i).transpose();
  }
  void set_member(int i, const WeightVector& w);

  const Eigen::MatrixXd& members() const { return members_; }
  const Eigen::MatrixXd& initial() const { return initial_; }

  // Coordinate-wise mean of the members.
  WeightVector Mean() const;
  // Coordinate-wise population standard deviation of the members.
  Eigen::VectorXd StdDev() const;

 private:
  Eigen::MatrixXd members_;
  Eigen::MatrixXd initial_;
};

struct EnsembleStats {
  double mean = 0.0;
  // Population standard deviation (divide by m).
  double std = 0.0;
};

EnsembleStats ComputeEnsembleStats(const Ensemble& ensemble,
                                   const FeatureVector& phi);

// Mean and population std of member utilities for every row of `features`.
// Two-pass per row, so results match ComputeEnsembleStats exactly up to the
// dot-product summation order.
void ComputeEnsembleStatsBatch(const Ensemble& ensemble,
                               const FeatureMatrix& features,
                               Eigen::VectorXd& mean, Eigen::VectorXd& std);

}  // namespace prefpool

#endif  // PREFPOOL_CORE_UTILITY_H_

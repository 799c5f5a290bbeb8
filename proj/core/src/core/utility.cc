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

#include "prefpool/core/utility.h"

#include <cmath>
#include <string>
#include <utility>

#include "prefpool/core/errors.h"

namespace prefpool {
namespace {

void CheckSameDim(Eigen::Index a, Eigen::Index b, const char* op) {
  if (a != b) {
    throw ContractError(std::string(op) + ": dimension mismatch (" +
                        std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

double Utility(const WeightVector& w, const FeatureVector& phi) {
  CheckSameDim(w.size(), phi.size(), "utility");
  return w.dot(phi);
}

FeatureVector Delta(const FeatureVector& phi_plus,
                    const FeatureVector& phi_minus) {
  CheckSameDim(phi_plus.size(), phi_minus.size(), "delta");
  return phi_plus - phi_minus;
}

void CheckFinite(const Eigen::Ref<const Eigen::VectorXd>& values,
                 const char* what) {
  if (!values.allFinite()) {
    throw ContractError(std::string(what) + " has non-finite entries");
  }
}

Ensemble::Ensemble(Eigen::MatrixXd members)
    : members_(members), initial_(std::move(members)) {
  if (members_.rows() < 1) throw ContractError("ensemble needs m >= 1");
}

Ensemble::Ensemble(Eigen::MatrixXd members, Eigen::MatrixXd initial)
    : members_(std::move(members)), initial_(std::move(initial)) {
  if (members_.rows() < 1) throw ContractError("ensemble needs m >= 1");
  if (members_.rows() != initial_.rows() ||
      members_.cols() != initial_.cols()) {
    throw ContractError("ensemble initial state shape mismatch");
  }
}

void Ensemble::set_member(int i, const WeightVector& w) {
  CheckSameDim(w.size(), members_.cols(), "ensemble member");
  members_.row(i) = w.transpose();
}

WeightVector Ensemble::Mean() const {
  return members_.colwise().mean().transpose();
}

Eigen::VectorXd Ensemble::StdDev() const {
  const Eigen::RowVectorXd mean = members_.colwise().mean();
  return ((members_.rowwise() - mean).array().square().colwise().sum() /
          static_cast<double>(members_.rows()))
      .sqrt()
      .transpose();
}

EnsembleStats ComputeEnsembleStats(const Ensemble& ensemble,
                                   const FeatureVector& phi) {
  CheckSameDim(ensemble.dim(), phi.size(), "ensemble_stats");
  // Shifted by the first member so identical utilities give exactly 0.
  const Eigen::VectorXd u = ensemble.members() * phi;
  const Eigen::ArrayXd d = u.array() - u[0];
  const double shift = d.mean();
  const double var = (d - shift).square().sum() / u.size();
  return {u[0] + shift, std::sqrt(var)};
}

void ComputeEnsembleStatsBatch(const Ensemble& ensemble,
                               const FeatureMatrix& features,
                               Eigen::VectorXd& mean, Eigen::VectorXd& std) {
  CheckSameDim(ensemble.dim(), features.cols(), "ensemble_stats");
  // rows: candidates, cols: members.
  const Eigen::MatrixXd u = features * ensemble.members().transpose();
  const Eigen::MatrixXd d = u.colwise() - u.col(0);
  const Eigen::VectorXd shift = d.rowwise().mean();
  mean = u.col(0) + shift;
  const double m = static_cast<double>(u.cols());
  std = ((d.colwise() - shift).array().square().rowwise().sum() / m).sqrt();
}

}  // namespace prefpool

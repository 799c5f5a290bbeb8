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

#include "prefpool/problems/pool.h"

#include <nlohmann/json.hpp>

#include "prefpool/core/errors.h"

namespace prefpool {

CandidateId PoolArgmax(const FeatureMatrix& features, const WeightVector& w) {
  return PoolArgmax(features, w, std::vector<char>(features.rows(), 1));
}

CandidateId PoolArgmax(const FeatureMatrix& features, const WeightVector& w,
                       const std::vector<char>& eligible) {
  if (features.rows() == 0) throw ContractError("pool is empty");
  if (features.cols() != w.size()) {
    throw ContractError("utility: dimension mismatch");
  }
  if (static_cast<Eigen::Index>(eligible.size()) != features.rows()) {
    throw ContractError("eligibility mask size does not match the pool");
  }
  const Eigen::VectorXd u = features * w;
  CandidateId best = -1;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!eligible[i]) continue;
    if (best < 0 || u[i] > u[best]) best = static_cast<CandidateId>(i);
  }
  if (best < 0) throw InfeasibleError("no eligible candidate in the pool");
  return best;
}

FeatureMatrix BuildFeatureMatrix(
    int count, int dim, const std::function<FeatureVector(int)>& features_of) {
  FeatureMatrix m(count, dim);
  for (int i = 0; i < count; ++i) m.row(i) = features_of(i).transpose();
  return m;
}

void WritePoolFile(std::ostream& out, const std::string& kind,
                   const std::vector<PoolRecord>& records) {
  for (const PoolRecord& r : records) {
    nlohmann::json line;
    line["id"] = r.id;
    line[kind] = r.structure;
    line["features"] =
        std::vector<double>(r.features.data(), r.features.data() + r.features.size());
    out << line.dump() << '\n';
  }
}

std::vector<PoolRecord> ReadPoolFile(std::istream& in,
                                     const std::string& kind) {
  std::vector<PoolRecord> records;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    try {
      const nlohmann::json line = nlohmann::json::parse(text);
      PoolRecord r;
      r.id = line.at("id").get<int>();
      r.structure = line.at(kind).get<std::vector<int>>();
      const auto f = line.at("features").get<std::vector<double>>();
      r.features = Eigen::Map<const Eigen::VectorXd>(f.data(), f.size());
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("pool file line " + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return records;
}

}  // namespace prefpool

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

#include "prefpool/learning/dataset.h"

#include <string>

#include <nlohmann/json.hpp>

#include "prefpool/core/errors.h"

namespace prefpool {

void WriteDatasetCheckpoint(std::ostream& out,
                            const std::vector<DatasetEntry>& entries) {
  for (const DatasetEntry& e : entries) {
    nlohmann::json line;
    line["context_id"] = e.observation.context_id;
    line["left"] = e.observation.left;
    line["right"] = e.observation.right;
    line["label"] = static_cast<int>(e.observation.label);
    if (e.observation.response_seconds) {
      line["response_time"] = *e.observation.response_seconds;
    }
    if (e.delta) {
      line["delta"] = std::vector<double>(e.delta->data(),
                                          e.delta->data() + e.delta->size());
    }
    out << line.dump() << '\n';
  }
}

std::vector<DatasetEntry> ReadDatasetCheckpoint(std::istream& in) {
  std::vector<DatasetEntry> entries;
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    try {
      const nlohmann::json line = nlohmann::json::parse(text);
      DatasetEntry e;
      e.observation.context_id = line.at("context_id").get<int>();
      e.observation.left = line.at("left").get<int>();
      e.observation.right = line.at("right").get<int>();
      const auto label = LabelFromInt(line.at("label").get<int>());
      if (!label) throw ConfigError("illegal label");
      e.observation.label = *label;
      if (line.contains("response_time")) {
        e.observation.response_seconds = line["response_time"].get<double>();
      }
      if (line.contains("delta")) {
        const auto d = line["delta"].get<std::vector<double>>();
        e.delta = Eigen::Map<const Eigen::VectorXd>(d.data(), d.size());
      }
      ValidateObservation(e.observation);
      entries.push_back(std::move(e));
    } catch (const std::exception& ex) {
      throw ConfigError("dataset line " + std::to_string(line_no) + ": " +
                        ex.what());
    }
  }
  return entries;
}

}  // namespace prefpool

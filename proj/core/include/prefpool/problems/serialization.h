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

#ifndef PREFPOOL_PROBLEMS_SERIALIZATION_H_
#define PREFPOOL_PROBLEMS_SERIALIZATION_H_

#include <string>

#include <nlohmann/json.hpp>

#include "prefpool/problems/config.h"
#include "prefpool/problems/tsp.h"

namespace prefpool {

inline constexpr int kInstanceFormatVersion = 1;

nlohmann::json TspInstanceToJson(const TspInstance& instance);
// Validates the result; throws ConfigError on malformed or wrong-version
// documents.
TspInstance TspInstanceFromJson(const nlohmann::json& doc);

nlohmann::json CatalogToJson(const ConfigCatalog& catalog);
ConfigCatalog CatalogFromJson(const nlohmann::json& doc);

nlohmann::json ReadJsonFile(const std::string& path);
void WriteJsonFile(const std::string& path, const nlohmann::json& doc);

}  // namespace prefpool

#endif  // PREFPOOL_PROBLEMS_SERIALIZATION_H_

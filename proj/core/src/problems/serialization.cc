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

#include "prefpool/problems/serialization.h"

#include <cmath>
#include <fstream>
#include <vector>

#include "prefpool/core/errors.h"

namespace prefpool {
namespace {

void CheckVersion(const nlohmann::json& doc) {
  const int version = doc.at("format_version").get<int>();
  if (version != kInstanceFormatVersion) {
    throw ConfigError("unsupported format_version " + std::to_string(version));
  }
}

}  // namespace

nlohmann::json TspInstanceToJson(const TspInstance& inst) {
  nlohmann::json doc;
  doc["format_version"] = kInstanceFormatVersion;
  doc["node_count"] = inst.node_count;
  nlohmann::json coords = nlohmann::json::array();
  for (const Point2& p : inst.coords) coords.push_back({p.x, p.y});
  doc["coords"] = coords;
  nlohmann::json channels = nlohmann::json::array();
  for (const Eigen::MatrixXd& m : inst.edge_values) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::vector<double> row(m.cols());
      for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = m(i, j);
      rows.push_back(row);
    }
    channels.push_back(rows);
  }
  doc["edge_values"] = channels;
  doc["prizes"] = inst.prizes;
  doc["penalties"] = inst.penalties;
  doc["prize_quota"] = inst.prize_quota;
  return doc;
}

TspInstance TspInstanceFromJson(const nlohmann::json& doc) {
  TspInstance inst;
  try {
    CheckVersion(doc);
    inst.node_count = doc.at("node_count").get<int>();
    for (const auto& p : doc.at("coords")) {
      inst.coords.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    const auto& channels = doc.at("edge_values");
    if (channels.size() != kTspChannels) {
      throw ConfigError("edge_values must have 4 channels");
    }
    for (int l = 0; l < kTspChannels; ++l) {
      const auto& rows = channels.at(l);
      const int v = inst.node_count;
      if (static_cast<int>(rows.size()) != v) {
        throw ConfigError("edge_values channel has the wrong row count");
      }
      inst.edge_values[l] = Eigen::MatrixXd(v, v);
      for (int i = 0; i < v; ++i) {
        const auto row = rows.at(i).get<std::vector<double>>();
        if (static_cast<int>(row.size()) != v) {
          throw ConfigError("edge_values row has the wrong length");
        }
        for (int j = 0; j < v; ++j) inst.edge_values[l](i, j) = row[j];
      }
    }
    inst.prizes = doc.at("prizes").get<std::vector<double>>();
    inst.penalties = doc.at("penalties").get<std::vector<double>>();
    inst.prize_quota = doc.at("prize_quota").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed instance: ") + e.what());
  }
  try {
    ValidateInstance(inst);
  } catch (const ContractError& e) {
    throw ConfigError(std::string("invalid instance: ") + e.what());
  }
  return inst;
}

nlohmann::json CatalogToJson(const ConfigCatalog& catalog) {
  nlohmann::json doc;
  doc["format_version"] = kInstanceFormatVersion;
  nlohmann::json components = nlohmann::json::array();
  for (const ConfigComponent& c : catalog.components()) {
    nlohmann::json options = nlohmann::json::array();
    for (const ConfigOption& o : c.options) {
      options.push_back({{"name", o.name}, {"price", o.price}});
    }
    components.push_back({{"name", c.name}, {"options", options}});
  }
  doc["components"] = components;
  nlohmann::json constraints = nlohmann::json::array();
  for (const ForbiddenPair& p : catalog.constraints()) {
    constraints.push_back({{p.first.component, p.first.option},
                           {p.second.component, p.second.option}});
  }
  doc["constraints"] = constraints;
  doc["price_max"] = catalog.price_max();
  return doc;
}

ConfigCatalog CatalogFromJson(const nlohmann::json& doc) {
  try {
    CheckVersion(doc);
    std::vector<ConfigComponent> components;
    for (const auto& c : doc.at("components")) {
      ConfigComponent component{c.at("name").get<std::string>(), {}};
      for (const auto& o : c.at("options")) {
        component.options.push_back(
            {o.at("name").get<std::string>(), o.at("price").get<double>()});
      }
      components.push_back(std::move(component));
    }
    std::vector<ForbiddenPair> constraints;
    for (const auto& p : doc.at("constraints")) {
      constraints.push_back({{p.at(0).at(0).get<int>(), p.at(0).at(1).get<int>()},
                             {p.at(1).at(0).get<int>(), p.at(1).at(1).get<int>()}});
    }
    ConfigCatalog catalog(std::move(components), std::move(constraints));
    if (doc.contains("price_max")) {
      const double stated = doc.at("price_max").get<double>();
      if (std::abs(stated - catalog.price_max()) >
          1e-9 * std::max(1.0, catalog.price_max())) {
        throw ConfigError("price_max does not match the option prices");
      }
    }
    return catalog;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed catalog: ") + e.what());
  } catch (const ContractError& e) {
    throw ConfigError(std::string("invalid catalog: ") + e.what());
  }
}

nlohmann::json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void WriteJsonFile(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace prefpool

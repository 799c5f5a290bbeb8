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

#include "prefpool/bench/commands.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "prefpool/bench/digest.h"
#include "prefpool/core/errors.h"
#include "prefpool/learning/update_rules.h"
#include "prefpool/problems/config.h"
#include "prefpool/problems/tsp.h"

namespace prefpool {
namespace {

constexpr uint64_t kPoolStream = 2;

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

PoolArtifact GeneratePool(const ExperimentConfig& config) {
  PoolArtifact out;
  RandomSource rng(config.seed, kPoolStream);
  if (config.problem == ProblemKind::kPcTsp) {
    out.kind = "tour";
    TspTaskConfig tc;
    tc.nodes = config.nodes;
    tc.train_instances = 1;
    tc.test_instances = 1;
    tc.pool_size = 2;
    tc.seed = config.seed;
    const TspTask provider(tc);
    const TspInstance& instance = provider.instance(0);
    const auto start = std::chrono::steady_clock::now();
    SampledSet<Tour> tours =
        config.pool == PoolKind::kFeasible
            ? TspSampleFeasible(instance, rng, config.pool_size)
            : TspSampleRelaxed(instance, rng, config.pool_size);
    out.generation_seconds = SecondsSince(start);
    out.budget_exhausted = tours.budget_exhausted;
    for (size_t i = 0; i < tours.items.size(); ++i) {
      out.records.push_back({static_cast<CandidateId>(i),
                             tours.items[i].visit_order,
                             TspFeatures(instance, tours.items[i])});
    }
    return out;
  }
  out.kind = "choice";
  const ConfigCatalog catalog = LoadCatalog(config);
  const auto start = std::chrono::steady_clock::now();
  std::vector<ConfigAssignment> items;
  if (config.pool == PoolKind::kFeasible) {
    items = ConfigEnumerateFeasible(catalog);
  } else {
    SampledSet<ConfigAssignment> sampled =
        ConfigSampleRelaxed(catalog, rng, config.pool_size);
    items = std::move(sampled.items);
    out.budget_exhausted = sampled.budget_exhausted;
  }
  out.generation_seconds = SecondsSince(start);
  for (size_t i = 0; i < items.size(); ++i) {
    out.records.push_back({static_cast<CandidateId>(i), items[i].choice,
                           ConfigFeatures(catalog, items[i])});
  }
  return out;
}

nlohmann::json WritePoolArtifact(const ExperimentConfig& config,
                                 const PoolArtifact& pool,
                                 const std::string& dir) {
  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);
  std::ostringstream text;
  WritePoolFile(text, pool.kind, pool.records);
  const std::string body = text.str();
  {
    std::ofstream out(root / "pool.jsonl", std::ios::binary);
    if (!out) throw ConfigError("cannot write " + (root / "pool.jsonl").string());
    out << body;
  }
  nlohmann::json manifest = {
      {"experiment", ExperimentToJson(config)},
      {"kind", pool.kind},
      {"size", pool.records.size()},
      {"requested_size", config.pool_size},
      {"budget_exhausted", pool.budget_exhausted},
      {"generation_seconds", pool.generation_seconds},
      {"pool_file_sha256", Sha256Hex(body)}};
  if (config.problem == ProblemKind::kPcTsp) manifest["feature_context"] = 0;
  std::ofstream out(root / "pool_manifest.json", std::ios::binary);
  if (!out) throw ConfigError("cannot write pool manifest");
  out << manifest.dump(2) << "\n";
  return manifest;
}

std::vector<UpdateFactorPoint> UpdateFactorCurve(double limit, int resolution) {
  if (!(limit > 0.0) || resolution < 1) {
    throw ContractError("curve limit and resolution must be positive");
  }
  const int half = static_cast<int>(std::floor(limit * resolution + 1e-9));
  std::vector<UpdateFactorPoint> curve;
  curve.reserve(2 * half + 1);
  for (int i = -half; i <= half; ++i) {
    const double x = static_cast<double>(i) / resolution;
    UpdateFactorPoint p;
    p.x = x;
    p.mle = UpdateFactorFromMargin(UpdateRule::kMleOnline, x);
    p.pp = UpdateFactorFromMargin(UpdateRule::kPpOnline, x);
    p.sp = UpdateFactorFromMargin(UpdateRule::kSpOnline, x);
    p.sp_inclusive = x <= 0.0 ? 1.0 : 0.0;
    curve.push_back(p);
  }
  return curve;
}

std::string UpdateFactorCurveCsv(const std::vector<UpdateFactorPoint>& curve) {
  std::string out = "x,alpha_mle,alpha_pp,alpha_sp,alpha_sp_inclusive\n";
  char line[160];
  for (const UpdateFactorPoint& p : curve) {
    std::snprintf(line, sizeof(line), "%.2f,%.17g,%.17g,%.17g,%.17g\n", p.x,
                  p.mle, p.pp, p.sp, p.sp_inclusive);
    out += line;
  }
  return out;
}

}  // namespace prefpool

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

#ifndef PREFPOOL_BENCH_EXPERIMENT_H_
#define PREFPOOL_BENCH_EXPERIMENT_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefpool/learning/trainer.h"
#include "prefpool/loop/simulation.h"
#include "prefpool/loop/task.h"
#include "prefpool/oracle/decision_maker.h"
#include "prefpool/problems/pool.h"
#include "prefpool/selection/acquisition.h"

namespace prefpool {

// One cell of the experimental grid: problem x acquisition x update rule.
// Unset optionals take problem-dependent defaults in ResolveExperiment.
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::kPcTsp;
  int nodes = 10;
  int train_instances = 50;
  int test_instances = 10;
  AcquisitionMode acquisition = AcquisitionMode::kUcb;
  UpdateRule update = UpdateRule::kMleBatch;
  PoolKind pool = PoolKind::kRelaxed;
  int pool_size = 10'000;
  std::optional<int> clusters;
  int steps = 100;
  int dms = 20;
  uint64_t seed = 7;
  std::optional<int> eval_every;
  std::optional<double> learning_rate;
  int ensemble_size = 25;
  BatchConfig batch;
  int indifference_retry_cap = 5;
  ResponseModelConfig response;
  int exact_max_nodes = 16;
  // Configuration catalog file; generated from catalog_seed when unset.
  std::optional<std::string> catalog_path;
  uint64_t catalog_seed = 42;
  // pool.jsonl to load instead of generating the pool.
  std::optional<std::string> pool_file;
};

// Tuned step sizes per problem and rule.
double DefaultLearningRate(ProblemKind problem, UpdateRule rule);

// Fills every unset optional and applies fallbacks for unsupported
// combinations. Returns one warning per fallback taken. Throws ConfigError
// on values that cannot be repaired.
std::vector<std::string> ResolveExperiment(ExperimentConfig& config);

nlohmann::json ExperimentToJson(const ExperimentConfig& config);
// Throws ConfigError on unknown keys or ill-typed values.
ExperimentConfig ExperimentFromJson(const nlohmann::json& doc);

LoopConfig LoopConfigFor(const ExperimentConfig& config);

// The catalog a configuration experiment runs on.
ConfigCatalog LoadCatalog(const ExperimentConfig& config);

// Throws ConfigError when the file is unreadable or malformed.
std::vector<PoolRecord> ReadPoolRecords(const std::string& path,
                                        const std::string& kind);

// Builds instances and the candidate pool. `config` must be resolved.
std::shared_ptr<Task> BuildTask(const ExperimentConfig& config);

// Simulated decision makers of a cell, in id order.
std::vector<SimulatedDM> SampleRoster(const ExperimentConfig& config,
                                      int feature_dim);
uint64_t SessionSeed(const ExperimentConfig& config, int dm_id);

// SHA-256 of the task's instances (TSP instances or the catalog).
std::string InstancesDigest(const Task& task);
// SHA-256 of the pool's candidate structures.
std::string PoolDigest(const Task& task);

// Everything needed to replay a cell. `manifest_sha256` covers every other
// field.
nlohmann::json BuildManifest(const ExperimentConfig& config, const Task& task,
                             const std::vector<SimulatedDM>& roster);

struct CellSummary {
  double final_regret_mean = 0.0;
  double final_regret_stderr = 0.0;
  // First evaluated iteration with mean regret under 10%.
  std::optional<int> queries_to_threshold;
  // Percentage of (DM, test instance) pairs that are satisfied at the end.
  double pct_dm_satisfied = 0.0;
  double mean_update_ms = 0.0;
  double mean_select_ms = 0.0;
  double indifference_rate = 0.0;
  int exchanges = 0;
  int indifferent = 0;
  // (iteration, mean regret over DMs) at every evaluation tick.
  std::vector<std::pair<int, double>> regret_curve;
};

struct CellResult {
  nlohmann::json manifest;
  std::string manifest_hash;
  // Ordered by dm_id.
  std::vector<DmRunResult> runs;
  CellSummary summary;
  double pool_generation_seconds = 0.0;
  bool proxy_regret = false;
};

// Worker count from CPE_WORKERS, else the hardware concurrency.
int WorkersFromEnvironment();

CellSummary SummarizeRuns(const std::vector<DmRunResult>& runs);

// Runs a resolved cell. When `manifest` is given, its roster is used and
// its recorded digests must match the rebuilt task (ConfigError otherwise).
CellResult RunCell(const ExperimentConfig& config, int workers,
                   const nlohmann::json* manifest = nullptr);
// Same, on an already built task.
CellResult RunCell(const ExperimentConfig& config,
                   std::shared_ptr<const Task> task, int workers,
                   const nlohmann::json* manifest = nullptr);

// Writes manifest.json, iterations.csv, timings.json and summary.json.
void WriteCellOutputs(const CellResult& result, const std::string& dir);

// Deterministic per-iteration table; the first line carries the manifest
// hash.
std::string IterationsCsv(const CellResult& result);
nlohmann::json SummaryJson(const CellResult& result);
nlohmann::json TimingsJson(const CellResult& result);

}  // namespace prefpool

#endif  // PREFPOOL_BENCH_EXPERIMENT_H_

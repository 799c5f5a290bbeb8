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

#include "prefpool/bench/experiment.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "prefpool/bench/digest.h"
#include "prefpool/core/errors.h"
#include "prefpool/oracle/metrics.h"
#include "prefpool/problems/serialization.h"

namespace prefpool {
namespace {

constexpr int kManifestFormatVersion = 1;
constexpr uint64_t kRosterStream = 99;
constexpr uint64_t kSessionStreamBase = 1000;
constexpr double kRegretThreshold = 0.10;

std::string FormatNumber(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

template <typename T>
nlohmann::json OrNull(const std::optional<T>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

template <typename T>
T Field(const nlohmann::json& value, const char* key) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("experiment field '") + key +
                      "' has the wrong type");
  }
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

}  // namespace

double DefaultLearningRate(ProblemKind problem, UpdateRule rule) {
  if (problem == ProblemKind::kConfig) return 2.0;
  switch (rule) {
    case UpdateRule::kSpOnline:
    case UpdateRule::kMleOnline:
      return 0.5;
    case UpdateRule::kPpOnline:
      return 0.1;
    case UpdateRule::kMleBatch:
      return 1.0;
  }
  return 1.0;
}

std::vector<std::string> ResolveExperiment(ExperimentConfig& config) {
  std::vector<std::string> warnings;
  const bool tsp = config.problem == ProblemKind::kPcTsp;
  if (tsp && config.nodes < 3) throw ConfigError("--nodes must be >= 3");
  if (config.train_instances < 1 || config.test_instances < 1) {
    throw ConfigError("instance counts must be >= 1");
  }
  if (config.pool_size < 2) throw ConfigError("--pool-size must be >= 2");
  if (config.steps < 1) throw ConfigError("--steps must be >= 1");
  if (config.dms < 1) throw ConfigError("--dms must be >= 1");
  if (config.ensemble_size < 1) throw ConfigError("ensemble size must be >= 1");
  if (config.exact_max_nodes < 2) {
    throw ConfigError("exact solver cap must be >= 2");
  }
  if (config.clusters && *config.clusters < 0) {
    throw ConfigError("--clusters must be >= 0");
  }
  if (config.eval_every && *config.eval_every < 1) {
    throw ConfigError("--eval-every must be >= 1");
  }
  if (config.learning_rate && !(*config.learning_rate > 0.0)) {
    throw ConfigError("--learning-rate must be > 0");
  }
  if (!(config.response.beta > 0.0)) throw ConfigError("beta must be > 0");
  if (!(config.response.margin_fraction >= 0.0)) {
    throw ConfigError("margin fraction must be >= 0");
  }
  if (config.response.fixed_margin && !(*config.response.fixed_margin >= 0.0)) {
    throw ConfigError("fixed margin must be >= 0");
  }

  if (!tsp && config.clusters.value_or(0) > 0) {
    warnings.push_back(
        "clustering is not used on the configuration task; running with "
        "--clusters 0");
    config.clusters = 0;
  }
  if (tsp && config.pool == PoolKind::kFeasible) {
    warnings.push_back(
        "feasible pools are per-instance for pctsp and not supported by "
        "run; using the relaxed pool");
    config.pool = PoolKind::kRelaxed;
  }
  if (!config.clusters) config.clusters = tsp ? 5 : 0;
  if (!config.eval_every) {
    config.eval_every = tsp && config.nodes > config.exact_max_nodes ? 10 : 1;
  }
  if (!config.learning_rate) {
    config.learning_rate = DefaultLearningRate(config.problem, config.update);
  }
  try {
    ValidateLoopConfig(LoopConfigFor(config));
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  return warnings;
}

nlohmann::json ExperimentToJson(const ExperimentConfig& c) {
  nlohmann::json doc;
  doc["problem"] = ProblemKindName(c.problem);
  doc["nodes"] = c.nodes;
  doc["train_instances"] = c.train_instances;
  doc["test_instances"] = c.test_instances;
  doc["acquisition"] = AcquisitionModeName(c.acquisition);
  doc["update"] = UpdateRuleName(c.update);
  doc["pool"] = PoolKindName(c.pool);
  doc["pool_size"] = c.pool_size;
  doc["clusters"] = OrNull(c.clusters);
  doc["steps"] = c.steps;
  doc["dms"] = c.dms;
  doc["seed"] = c.seed;
  doc["eval_every"] = OrNull(c.eval_every);
  doc["learning_rate"] = OrNull(c.learning_rate);
  doc["ensemble_size"] = c.ensemble_size;
  doc["batch"] = {{"epochs", c.batch.epochs},
                  {"batch_size", c.batch.batch_size},
                  {"warm_start", c.batch.warm_start}};
  doc["indifference_retry_cap"] = c.indifference_retry_cap;
  doc["response"] = {
      {"beta", c.response.beta},
      {"margin_fraction", c.response.margin_fraction},
      {"fixed_margin", OrNull(c.response.fixed_margin)}};
  doc["exact_max_nodes"] = c.exact_max_nodes;
  doc["catalog_path"] = OrNull(c.catalog_path);
  doc["catalog_seed"] = c.catalog_seed;
  doc["pool_file"] = OrNull(c.pool_file);
  return doc;
}

ExperimentConfig ExperimentFromJson(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("experiment must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, v] : doc.items()) {
    const char* k = key.c_str();
    if (key == "problem") {
      auto p = ParseProblemKind(Field<std::string>(v, k));
      if (!p) throw ConfigError("unknown problem '" + v.dump() + "'");
      c.problem = *p;
    } else if (key == "nodes") {
      c.nodes = Field<int>(v, k);
    } else if (key == "train_instances") {
      c.train_instances = Field<int>(v, k);
    } else if (key == "test_instances") {
      c.test_instances = Field<int>(v, k);
    } else if (key == "acquisition") {
      auto a = ParseAcquisitionMode(Field<std::string>(v, k));
      if (!a) throw ConfigError("unknown acquisition '" + v.dump() + "'");
      c.acquisition = *a;
    } else if (key == "update") {
      auto u = ParseUpdateRule(Field<std::string>(v, k));
      if (!u) throw ConfigError("unknown update rule '" + v.dump() + "'");
      c.update = *u;
    } else if (key == "pool") {
      auto p = ParsePoolKind(Field<std::string>(v, k));
      if (!p) throw ConfigError("unknown pool kind '" + v.dump() + "'");
      c.pool = *p;
    } else if (key == "pool_size") {
      c.pool_size = Field<int>(v, k);
    } else if (key == "clusters") {
      if (!v.is_null()) c.clusters = Field<int>(v, k);
    } else if (key == "steps") {
      c.steps = Field<int>(v, k);
    } else if (key == "dms") {
      c.dms = Field<int>(v, k);
    } else if (key == "seed") {
      c.seed = Field<uint64_t>(v, k);
    } else if (key == "eval_every") {
      if (!v.is_null()) c.eval_every = Field<int>(v, k);
    } else if (key == "learning_rate") {
      if (!v.is_null()) c.learning_rate = Field<double>(v, k);
    } else if (key == "ensemble_size") {
      c.ensemble_size = Field<int>(v, k);
    } else if (key == "batch") {
      if (!v.is_object()) throw ConfigError("'batch' must be an object");
      for (const auto& [bk, bv] : v.items()) {
        if (bk == "epochs") {
          c.batch.epochs = Field<int>(bv, "batch.epochs");
        } else if (bk == "batch_size") {
          c.batch.batch_size = Field<int>(bv, "batch.batch_size");
        } else if (bk == "warm_start") {
          c.batch.warm_start = Field<bool>(bv, "batch.warm_start");
        } else {
          throw ConfigError("unknown batch field '" + bk + "'");
        }
      }
    } else if (key == "indifference_retry_cap") {
      c.indifference_retry_cap = Field<int>(v, k);
    } else if (key == "response") {
      if (!v.is_object()) throw ConfigError("'response' must be an object");
      for (const auto& [rk, rv] : v.items()) {
        if (rk == "beta") {
          c.response.beta = Field<double>(rv, "response.beta");
        } else if (rk == "margin_fraction") {
          c.response.margin_fraction =
              Field<double>(rv, "response.margin_fraction");
        } else if (rk == "fixed_margin") {
          if (!rv.is_null()) {
            c.response.fixed_margin = Field<double>(rv, "response.fixed_margin");
          }
        } else {
          throw ConfigError("unknown response field '" + rk + "'");
        }
      }
    } else if (key == "exact_max_nodes") {
      c.exact_max_nodes = Field<int>(v, k);
    } else if (key == "catalog_path") {
      if (!v.is_null()) c.catalog_path = Field<std::string>(v, k);
    } else if (key == "catalog_seed") {
      c.catalog_seed = Field<uint64_t>(v, k);
    } else if (key == "pool_file") {
      if (!v.is_null()) c.pool_file = Field<std::string>(v, k);
    } else {
      throw ConfigError("unknown experiment field '" + key + "'");
    }
  }
  return c;
}

LoopConfig LoopConfigFor(const ExperimentConfig& config) {
  LoopConfig loop;
  loop.steps = config.steps;
  loop.ensemble_size = config.ensemble_size;
  loop.acquisition.mode = config.acquisition;
  loop.acquisition.clusters = config.clusters.value_or(0);
  loop.learner.rule = config.update;
  loop.learner.learning_rate = config.learning_rate.value_or(1.0);
  loop.learner.batch = config.batch;
  loop.eval_every = config.eval_every.value_or(1);
  loop.indifference_retry_cap = config.indifference_retry_cap;
  return loop;
}

ConfigCatalog LoadCatalog(const ExperimentConfig& config) {
  if (config.catalog_path) {
    return CatalogFromJson(ReadJsonFile(*config.catalog_path));
  }
  RandomSource rng(config.catalog_seed, 0);
  return GenerateCatalog(DefaultCatalogShape(), rng);
}

std::vector<PoolRecord> ReadPoolRecords(const std::string& path,
                                        const std::string& kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read pool file " + path);
  return ReadPoolFile(in, kind);
}

std::shared_ptr<Task> BuildTask(const ExperimentConfig& config) {
  try {
    if (config.problem == ProblemKind::kPcTsp) {
      TspTaskConfig tc;
      tc.nodes = config.nodes;
      tc.train_instances = config.train_instances;
      tc.test_instances = config.test_instances;
      tc.pool_size = config.pool_size;
      tc.solver.max_nodes = config.exact_max_nodes;
      tc.seed = config.seed;
      if (config.pool_file) {
        std::vector<Tour> tours;
        for (auto& r : ReadPoolRecords(*config.pool_file, "tour")) {
          tours.push_back(Tour{std::move(r.structure)});
        }
        tc.pool_tours = std::move(tours);
      }
      return std::make_shared<TspTask>(tc);
    }
    ConfigTaskConfig cc;
    cc.catalog = LoadCatalog(config);
    cc.pool = config.pool;
    cc.pool_size = config.pool_size;
    cc.seed = config.seed;
    if (config.pool_file) {
      std::vector<ConfigAssignment> items;
      for (auto& r : ReadPoolRecords(*config.pool_file, "choice")) {
        items.push_back(ConfigAssignment{std::move(r.structure)});
      }
      cc.pool_items = std::move(items);
    }
    return std::make_shared<ConfigTask>(cc);
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
}

std::vector<SimulatedDM> SampleRoster(const ExperimentConfig& config,
                                      int feature_dim) {
  RandomSource rng(config.seed, kRosterStream);
  std::vector<SimulatedDM> roster;
  for (int id = 0; id < config.dms; ++id) {
    SimulatedDM dm = config.problem == ProblemKind::kPcTsp
                         ? SampleTspDM(id, rng, feature_dim)
                         : SampleConfigDM(id, feature_dim, rng);
    dm.beta = config.response.beta;
    if (config.response.fixed_margin) dm.eps_ind = *config.response.fixed_margin;
    roster.push_back(std::move(dm));
  }
  return roster;
}

uint64_t SessionSeed(const ExperimentConfig& config, int dm_id) {
  return MixSeed(config.seed, kSessionStreamBase + static_cast<uint64_t>(dm_id));
}

std::string InstancesDigest(const Task& task) {
  if (const auto* tsp = dynamic_cast<const TspTask*>(&task)) {
    nlohmann::json all = nlohmann::json::array();
    for (ContextId c : tsp->train_contexts()) {
      all.push_back(TspInstanceToJson(tsp->instance(c)));
    }
    for (ContextId c : tsp->test_contexts()) {
      all.push_back(TspInstanceToJson(tsp->instance(c)));
    }
    return Sha256Hex(all.dump());
  }
  if (const auto* cfg = dynamic_cast<const ConfigTask*>(&task)) {
    return Sha256Hex(CatalogToJson(cfg->catalog()).dump());
  }
  throw ContractError("unknown task type");
}

std::string PoolDigest(const Task& task) {
  std::string text;
  for (CandidateId id = 0; id < task.pool_size(); ++id) {
    for (int v : task.PoolStructure(id)) {
      text += std::to_string(v);
      text += ',';
    }
    text += '\n';
  }
  return Sha256Hex(text);
}

nlohmann::json BuildManifest(const ExperimentConfig& config, const Task& task,
                             const std::vector<SimulatedDM>& roster) {
  nlohmann::json doc;
  doc["format_version"] = kManifestFormatVersion;
  doc["experiment"] = ExperimentToJson(config);
  doc["instances_sha256"] = InstancesDigest(task);
  doc["pool_sha256"] = PoolDigest(task);
  doc["roster"] = RosterToJson(roster, !config.response.fixed_margin);
  nlohmann::json seeds = nlohmann::json::array();
  for (const SimulatedDM& dm : roster) seeds.push_back(SessionSeed(config, dm.id));
  doc["session_seeds"] = seeds;
  doc["manifest_sha256"] = Sha256Hex(doc.dump());
  return doc;
}

int WorkersFromEnvironment() {
  if (const char* env = std::getenv("CPE_WORKERS"); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) {
      throw ConfigError("CPE_WORKERS must be a positive integer");
    }
    return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

CellSummary SummarizeRuns(const std::vector<DmRunResult>& runs) {
  CellSummary s;
  if (runs.empty()) return s;
  std::vector<double> finals;
  double satisfied = 0.0;
  double update_ms = 0.0;
  double select_ms = 0.0;
  size_t iterations = 0;
  for (const DmRunResult& run : runs) {
    if (run.evals.empty()) throw ContractError("run has no evaluations");
    finals.push_back(run.evals.back().regret_mean);
    satisfied += run.evals.back().satisfied_frac;
    for (const IterationTiming& t : run.timings) {
      update_ms += t.update_ms;
      select_ms += t.select_ms;
    }
    iterations += run.timings.size();
    s.exchanges += run.exchanges;
    s.indifferent += run.indifferent;
  }
  const MeanAndStderr final_stats = Summarize(finals);
  s.final_regret_mean = final_stats.mean;
  s.final_regret_stderr = final_stats.std_error;
  s.pct_dm_satisfied = 100.0 * satisfied / runs.size();
  if (iterations > 0) {
    s.mean_update_ms = update_ms / iterations;
    s.mean_select_ms = select_ms / iterations;
  }
  if (s.exchanges > 0) {
    s.indifference_rate = static_cast<double>(s.indifferent) / s.exchanges;
  }
  const size_t ticks = runs.front().evals.size();
  for (size_t i = 0; i < ticks; ++i) {
    double sum = 0.0;
    for (const DmRunResult& run : runs) sum += run.evals.at(i).regret_mean;
    const double mean = sum / runs.size();
    const int iteration = runs.front().evals[i].iteration;
    s.regret_curve.emplace_back(iteration, mean);
    if (!s.queries_to_threshold && mean < kRegretThreshold) {
      s.queries_to_threshold = iteration;
    }
  }
  return s;
}

CellResult RunCell(const ExperimentConfig& config, int workers,
                   const nlohmann::json* manifest) {
  return RunCell(config, BuildTask(config), workers, manifest);
}

CellResult RunCell(const ExperimentConfig& config,
                   std::shared_ptr<const Task> task, int workers,
                   const nlohmann::json* manifest) {
  std::vector<SimulatedDM> roster;
  if (manifest) {
    if (manifest->value("instances_sha256", "") != InstancesDigest(*task)) {
      throw ConfigError("manifest instances do not match the rebuilt task");
    }
    if (manifest->value("pool_sha256", "") != PoolDigest(*task)) {
      throw ConfigError("manifest pool does not match the rebuilt task");
    }
    roster = RosterFromJson(manifest->at("roster"));
    if (config.response.fixed_margin) {
      for (SimulatedDM& dm : roster) dm.eps_ind = *config.response.fixed_margin;
    }
  } else {
    roster = SampleRoster(config, task->feature_dim());
  }

  CellResult result;
  result.manifest = BuildManifest(config, *task, roster);
  result.manifest_hash = result.manifest.at("manifest_sha256");
  if (manifest && manifest->value("manifest_sha256", "") != result.manifest_hash) {
    throw ConfigError("manifest hash does not match its contents");
  }
  result.pool_generation_seconds = task->pool_generation_seconds();
  result.proxy_regret = !task->exact_synthesis();

  const LoopConfig loop = LoopConfigFor(config);
  result.runs.resize(roster.size());
  std::vector<std::exception_ptr> errors(roster.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < roster.size(); i = next++) {
      try {
        result.runs[i] =
            RunSimulatedDm(task, roster[i], loop, config.response,
                           SessionSeed(config, roster[i].id));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::clamp(workers, 1, static_cast<int>(roster.size()));
  std::vector<std::thread> threads;
  for (int w = 1; w < n; ++w) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::sort(result.runs.begin(), result.runs.end(),
            [](const DmRunResult& a, const DmRunResult& b) {
              return a.dm_id < b.dm_id;
            });
  result.summary = SummarizeRuns(result.runs);
  return result;
}

std::string IterationsCsv(const CellResult& result) {
  std::ostringstream out;
  out << "# manifest_sha256=" << result.manifest_hash << "\n";
  out << "dm_id,iteration,regret_mean,regret_stderr,satisfied_frac,"
         "indifference_count\n";
  for (const DmRunResult& run : result.runs) {
    for (const EvalPoint& e : run.evals) {
      out << run.dm_id << ',' << e.iteration << ','
          << FormatNumber(e.regret_mean) << ','
          << FormatNumber(e.regret_stderr) << ','
          << FormatNumber(e.satisfied_frac) << ',' << e.indifference_count
          << "\n";
    }
  }
  return out.str();
}

nlohmann::json TimingsJson(const CellResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const DmRunResult& run : result.runs) {
    for (const IterationTiming& t : run.timings) {
      rows.push_back({{"dm_id", run.dm_id},
                      {"iteration", t.iteration},
                      {"select_ms", t.select_ms},
                      {"update_ms", t.update_ms},
                      {"exchanges", t.exchanges},
                      {"indifferent", t.indifferent}});
    }
  }
  return {{"manifest_sha256", result.manifest_hash},
          {"pool_generation_seconds", result.pool_generation_seconds},
          {"iterations", rows}};
}

nlohmann::json SummaryJson(const CellResult& result) {
  const CellSummary& s = result.summary;
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& [iteration, mean] : s.regret_curve) {
    curve.push_back({iteration, mean});
  }
  const nlohmann::json& e = result.manifest.at("experiment");
  return {
      {"manifest_sha256", result.manifest_hash},
      {"problem", e.at("problem")},
      {"nodes", e.at("nodes")},
      {"acquisition", e.at("acquisition")},
      {"update", e.at("update")},
      {"pool", e.at("pool")},
      {"clusters", e.at("clusters")},
      {"dms", result.runs.size()},
      {"steps", e.at("steps")},
      {"final_regret_mean", s.final_regret_mean},
      {"final_regret_stderr", s.final_regret_stderr},
      {"queries_to_10pct_regret", s.queries_to_threshold
                                      ? nlohmann::json(*s.queries_to_threshold)
                                      : nlohmann::json(nullptr)},
      {"pct_dm_satisfied", s.pct_dm_satisfied},
      {"mean_update_ms_per_iteration", s.mean_update_ms},
      {"mean_select_ms_per_iteration", s.mean_select_ms},
      {"indifference_rate", s.indifference_rate},
      {"exchanges", s.exchanges},
      {"indifferent", s.indifferent},
      {"pool_generation_seconds", result.pool_generation_seconds},
      {"regret_against_pool_proxy", result.proxy_regret},
      {"regret_curve", curve}};
}

void WriteCellOutputs(const CellResult& result, const std::string& dir) {
  const std::filesystem::path root(dir);
  std::filesystem::create_directories(root);
  WriteText(root / "manifest.json", result.manifest.dump(2) + "\n");
  WriteText(root / "iterations.csv", IterationsCsv(result));
  WriteText(root / "timings.json", TimingsJson(result).dump() + "\n");
  WriteText(root / "summary.json", SummaryJson(result).dump(2) + "\n");
}

}  // namespace prefpool

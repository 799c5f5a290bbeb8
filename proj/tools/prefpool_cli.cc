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

// Experiment runner: `run` a grid cell with simulated decision makers,
// generate a candidate `pool`, or dump the update-factor `curves`.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "prefpool/bench/commands.h"
#include "prefpool/bench/experiment.h"
#include "prefpool/core/errors.h"
#include "prefpool/problems/serialization.h"

namespace {

constexpr int kConfigErrorExit = 2;

// Registers the flags shared by `run` and `pool`.
std::vector<CLI::Option*> AddExperimentFlags(
    CLI::App* app, prefpool::ExperimentConfig& c, std::string& problem,
    std::string& pool) {
  std::vector<CLI::Option*> opts;
  opts.push_back(app->add_option("--problem", problem, "config or pctsp")
                     ->check(CLI::IsMember({"config", "pctsp"})));
  opts.push_back(app->add_option("--nodes", c.nodes, "PC-TSP node count"));
  opts.push_back(
      app->add_option("--pool", pool, "relaxed or feasible")
          ->check(CLI::IsMember({"relaxed", "feasible"})));
  opts.push_back(app->add_option("--pool-size", c.pool_size));
  opts.push_back(app->add_option("--seed", c.seed));
  opts.push_back(app->add_option("--catalog", c.catalog_path,
                                 "configuration catalog JSON file"));
  opts.push_back(app->add_option("--catalog-seed", c.catalog_seed,
                                 "seed of the generated catalog"));
  return opts;
}

void ApplyNames(prefpool::ExperimentConfig& c, const std::string& problem,
                const std::string& pool, const std::string& acquisition,
                const std::string& update) {
  if (!problem.empty()) c.problem = *prefpool::ParseProblemKind(problem);
  if (!pool.empty()) c.pool = *prefpool::ParsePoolKind(pool);
  if (!acquisition.empty()) {
    c.acquisition = *prefpool::ParseAcquisitionMode(acquisition);
  }
  if (!update.empty()) c.update = *prefpool::ParseUpdateRule(update);
}

void PrintWarnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

int RunCommand(prefpool::ExperimentConfig config,
               const std::string& manifest_path, const std::string& out) {
  nlohmann::json manifest;
  if (!manifest_path.empty()) {
    manifest = prefpool::ReadJsonFile(manifest_path);
    if (!manifest.contains("experiment")) {
      throw prefpool::ConfigError("manifest has no experiment section");
    }
    config = prefpool::ExperimentFromJson(manifest.at("experiment"));
  }
  PrintWarnings(prefpool::ResolveExperiment(config));
  const int workers = prefpool::WorkersFromEnvironment();
  const prefpool::CellResult result = prefpool::RunCell(
      config, workers, manifest_path.empty() ? nullptr : &manifest);
  prefpool::WriteCellOutputs(result, out);
  nlohmann::json summary = prefpool::SummaryJson(result);
  summary.erase("regret_curve");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int PoolCommand(prefpool::ExperimentConfig config, const std::string& out) {
  if (config.problem == prefpool::ProblemKind::kConfig) config.clusters = 0;
  PrintWarnings(prefpool::ResolveExperiment(config));
  const prefpool::PoolArtifact pool = prefpool::GeneratePool(config);
  if (pool.budget_exhausted) {
    std::cerr << "warning: sampling budget exhausted after "
              << pool.records.size() << " candidates\n";
  }
  const nlohmann::json manifest =
      prefpool::WritePoolArtifact(config, pool, out);
  std::cout << manifest.dump(2) << "\n";
  return 0;
}

int CurvesCommand(double limit, int resolution, const std::string& out) {
  std::filesystem::create_directories(out);
  const std::filesystem::path path =
      std::filesystem::path(out) / "update_factors.csv";
  std::ofstream file(path, std::ios::binary);
  if (!file) throw prefpool::ConfigError("cannot write " + path.string());
  file << prefpool::UpdateFactorCurveCsv(
      prefpool::UpdateFactorCurve(limit, resolution));
  std::cout << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructive preference elicitation experiments"};
  app.require_subcommand(1);

  prefpool::ExperimentConfig run_config;
  std::string run_problem, run_pool, acquisition, update, manifest_path;
  std::string run_out = "results";
  CLI::App* run = app.add_subcommand("run", "run one experimental cell");
  std::vector<CLI::Option*> run_opts =
      AddExperimentFlags(run, run_config, run_problem, run_pool);
  run_opts.push_back(
      run->add_option("--acquisition", acquisition)
          ->check(CLI::IsMember({"ucb", "mean", "variance", "choiceperc-pool"})));
  run_opts.push_back(
      run->add_option("--update", update)
          ->check(CLI::IsMember({"sp", "pp", "mle", "mle-batch"})));
  run_opts.push_back(run->add_option("--clusters", run_config.clusters,
                                     "k-means clusters; 0 disables"));
  run_opts.push_back(run->add_option("--steps", run_config.steps));
  run_opts.push_back(run->add_option("--dms", run_config.dms));
  run_opts.push_back(run->add_option("--eval-every", run_config.eval_every));
  run_opts.push_back(
      run->add_option("--learning-rate", run_config.learning_rate));
  run_opts.push_back(run->add_option("--ensemble-size",
                                     run_config.ensemble_size));
  run_opts.push_back(run->add_option("--train", run_config.train_instances));
  run_opts.push_back(run->add_option("--test", run_config.test_instances));
  run_opts.push_back(run->add_option("--beta", run_config.response.beta));
  run_opts.push_back(run->add_option(
      "--margin-fraction", run_config.response.margin_fraction,
      "indifference margin as a fraction of the pool utility range"));
  run_opts.push_back(run->add_option("--retry-cap",
                                     run_config.indifference_retry_cap));
  CLI::Option* manifest_opt = run->add_option(
      "--manifest", manifest_path, "replay the cell recorded in a manifest");
  for (CLI::Option* o : run_opts) manifest_opt->excludes(o);
  run->add_option("--out", run_out, "output directory");

  prefpool::ExperimentConfig pool_config;
  std::string pool_problem, pool_kind;
  std::string pool_out = "pool";
  CLI::App* pool = app.add_subcommand("pool", "generate a candidate pool");
  AddExperimentFlags(pool, pool_config, pool_problem, pool_kind);
  pool->add_option("--out", pool_out, "output directory");

  double limit = 6.0;
  int resolution = 100;
  std::string curves_out = ".";
  CLI::App* curves =
      app.add_subcommand("curves", "update factor of each rule vs margin");
  curves->add_option("--limit", limit, "largest |x|")->check(
      CLI::PositiveNumber);
  curves->add_option("--resolution", resolution, "samples per unit")
      ->check(CLI::PositiveNumber);
  curves->add_option("--out", curves_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigErrorExit;
  }

  try {
    if (*run) {
      ApplyNames(run_config, run_problem, run_pool, acquisition, update);
      return RunCommand(run_config, manifest_path, run_out);
    }
    if (*pool) {
      ApplyNames(pool_config, pool_problem, pool_kind, "", "");
      return PoolCommand(pool_config, pool_out);
    }
    return CurvesCommand(limit, resolution, curves_out);
  } catch (const prefpool::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigErrorExit;
  } catch (const prefpool::CapExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 1;
  }
}

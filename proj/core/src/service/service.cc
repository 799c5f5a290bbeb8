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

#include "prefpool/service/service.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "prefpool/core/errors.h"
#include "prefpool/problems/serialization.h"

namespace prefpool {
namespace {

constexpr int kFormatVersion = 1;

const std::set<std::string> kProblemParams = {
    "nodes",    "train_instances", "test_instances", "pool",
    "pool_size", "exact_max_nodes", "catalog_path",  "catalog_seed",
    "pool_file"};
const std::set<std::string> kLoopParams = {
    "steps",  "ensemble_size", "acquisition",           "clusters",
    "update", "learning_rate", "indifference_retry_cap", "batch"};

ServiceResponse Error(int status, const std::string& code,
                      const std::string& message) {
  return {status, {{"code", code}, {"message", message}}};
}

ServiceResponse NotFound(const std::string& session_id) {
  return Error(404, "not_found", "unknown session '" + session_id + "'");
}

void MergeGroup(const nlohmann::json& body, const char* group,
                const std::set<std::string>& allowed, nlohmann::json& doc) {
  if (!body.contains(group)) return;
  const nlohmann::json& params = body.at(group);
  if (params.is_null()) return;
  if (!params.is_object()) {
    throw ConfigError(std::string("'") + group + "' must be an object");
  }
  for (const auto& [key, value] : params.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown " + std::string(group) + " field '" + key +
                        "'");
    }
    doc[key] = value;
  }
}

// Fields that determine instances and pool; sessions agreeing on them
// share one task.
std::string TaskKey(const ExperimentConfig& c) {
  const nlohmann::json full = ExperimentToJson(c);
  nlohmann::json key;
  for (const char* field :
       {"problem", "nodes", "train_instances", "test_instances", "pool",
        "pool_size", "exact_max_nodes", "catalog_path", "catalog_seed",
        "pool_file", "seed"}) {
    key[field] = full.at(field);
  }
  return key.dump();
}

nlohmann::json Breakdown(const Task& task, ContextId context,
                         const std::vector<int>& structure) {
  nlohmann::json out = nlohmann::json::object();
  for (const BreakdownEntry& e : task.Breakdown(context, structure)) {
    out[e.name] = e.value;
  }
  return out;
}

nlohmann::json Side(const Task& task, ContextId context, CandidateId id) {
  const std::vector<int> structure = task.PoolStructure(id);
  return {{"candidate_id", id},
          {"render", task.Render(context, structure)},
          {"objective_breakdown", Breakdown(task, context, structure)}};
}

nlohmann::json VectorJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

nlohmann::json SynthesisJson(const Task& task, ContextId context,
                             const WeightVector& w) {
  const Synthesis s = task.Synthesize(context, w);
  return {{"instance_id", context},
          {"solution", task.Render(context, s.structure)},
          {"objective_breakdown", Breakdown(task, context, s.structure)},
          {"solver", s.solver}};
}

ServiceResponse FromException(std::exception_ptr error) {
  try {
    std::rethrow_exception(error);
  } catch (const ConfigError& e) {
    return Error(400, "invalid_config", e.what());
  } catch (const ContractError& e) {
    return Error(400, "invalid_config", e.what());
  } catch (const CapExceededError& e) {
    return Error(507, "pool_budget_exceeded", e.what());
  } catch (const InfeasibleError& e) {
    return Error(422, "infeasible", e.what());
  } catch (const SessionFinishedError& e) {
    return Error(409, "session_finished", e.what());
  } catch (const StaleQueryError& e) {
    return Error(409, "stale_query", e.what());
  } catch (const std::exception& e) {
    return Error(500, "internal", e.what());
  }
}

}  // namespace

ExperimentConfig SessionExperimentFromRequest(
    const nlohmann::json& body, std::vector<std::string>* warnings) {
  if (!body.is_object()) throw ConfigError("request body must be an object");
  for (const auto& [key, value] : body.items()) {
    if (key != "problem" && key != "problem_params" && key != "loop_config" &&
        key != "seed") {
      throw ConfigError("unknown request field '" + key + "'");
    }
  }
  nlohmann::json doc = {{"problem", "pctsp"}, {"nodes", 10}, {"dms", 1}};
  if (body.contains("problem")) doc["problem"] = body.at("problem");
  if (body.contains("seed")) doc["seed"] = body.at("seed");
  MergeGroup(body, "problem_params", kProblemParams, doc);
  MergeGroup(body, "loop_config", kLoopParams, doc);
  ExperimentConfig config = ExperimentFromJson(doc);
  std::vector<std::string> notes = ResolveExperiment(config);
  if (warnings) *warnings = std::move(notes);
  return config;
}

SessionService::SessionService(ServiceOptions options)
    : options_(std::move(options)), id_rng_(std::random_device{}()) {
  if (!options_.state_dir.empty()) {
    std::filesystem::create_directories(options_.state_dir);
  }
}

SessionService::~SessionService() {
  std::lock_guard<std::mutex> lock(jobs_mutex_);
  for (auto& [id, job] : jobs_) job.result.wait();
}

std::string SessionService::NewId(const char* prefix) {
  std::lock_guard<std::mutex> lock(id_mutex_);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%016llx", prefix,
                static_cast<unsigned long long>(id_rng_()));
  return buf;
}

std::shared_ptr<const Task> SessionService::TaskFor(
    const ExperimentConfig& experiment) {
  const std::string key = TaskKey(experiment);
  std::promise<std::shared_ptr<const Task>> promise;
  std::shared_future<std::shared_ptr<const Task>> future;
  bool builder = false;
  {
    std::lock_guard<std::mutex> lock(tasks_mutex_);
    auto it = tasks_.find(key);
    if (it == tasks_.end()) {
      future = promise.get_future().share();
      tasks_.emplace(key, future);
      builder = true;
    } else {
      future = it->second;
    }
  }
  if (builder) {
    try {
      promise.set_value(BuildTask(experiment));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard<std::mutex> lock(tasks_mutex_);
      tasks_.erase(key);
    }
  }
  return future.get();
}

std::shared_ptr<SessionService::Entry> SessionService::Find(
    const std::string& session_id) const {
  std::lock_guard<std::mutex> lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<SessionService::Entry> SessionService::BuildEntry(
    const std::string& id, const nlohmann::json& request) {
  auto entry = std::make_shared<Entry>();
  entry->id = id;
  entry->request = request;
  entry->experiment = SessionExperimentFromRequest(request);
  if (entry->experiment.pool_size > options_.max_pool_size) {
    throw CapExceededError("pool size exceeds the service limit of " +
                           std::to_string(options_.max_pool_size));
  }
  std::shared_ptr<const Task> task = TaskFor(entry->experiment);
  if (task->pool_budget_exhausted()) {
    throw CapExceededError("sampling budget exhausted after " +
                           std::to_string(task->pool_size()) + " candidates");
  }
  if (task->pool_size() > options_.max_pool_size) {
    throw CapExceededError("pool of " + std::to_string(task->pool_size()) +
                           " candidates exceeds the service limit");
  }
  try {
    entry->session = std::make_unique<Session>(
        task, LoopConfigFor(entry->experiment), entry->experiment.seed);
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  return entry;
}

void SessionService::Persist(const Entry& entry) const {
  if (options_.state_dir.empty()) return;
  const std::filesystem::path dir(options_.state_dir);
  const nlohmann::json doc = {{"format_version", kFormatVersion},
                              {"session_id", entry.id},
                              {"request", entry.request},
                              {"answers", entry.log}};
  const std::filesystem::path tmp = dir / (entry.id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << doc.dump() << "\n";
    if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, dir / (entry.id + ".json"));
}

int SessionService::Restore(std::vector<std::string>* errors) {
  if (options_.state_dir.empty()) return 0;
  int restored = 0;
  for (const auto& file :
       std::filesystem::directory_iterator(options_.state_dir)) {
    if (file.path().extension() != ".json") continue;
    try {
      const nlohmann::json doc = ReadJsonFile(file.path().string());
      if (doc.value("format_version", 0) != kFormatVersion) {
        throw ConfigError("unsupported format version");
      }
      const std::string id = doc.at("session_id");
      std::shared_ptr<Entry> entry = BuildEntry(id, doc.at("request"));
      for (const nlohmann::json& a : doc.at("answers")) {
        const int query_id = a.at("query_id");
        const PendingQuery& q = entry->session->CurrentQuery();
        if (q.query_id != query_id) {
          throw ConfigError("replay diverged at query " +
                            std::to_string(query_id));
        }
        const auto label = LabelFromString(a.at("label").get<std::string>());
        if (!label) throw ConfigError("bad label in answer log");
        std::optional<double> seconds;
        if (a.contains("response_seconds")) seconds = a["response_seconds"];
        const ServiceResponse r =
            AnswerLocked(*entry, query_id, *label, seconds, false);
        if (r.status != 200) throw ConfigError(r.body.value("message", ""));
      }
      std::lock_guard<std::mutex> lock(sessions_mutex_);
      sessions_[id] = entry;
      ++restored;
    } catch (const std::exception& e) {
      if (errors) errors->push_back(file.path().string() + ": " + e.what());
    }
  }
  return restored;
}

ServiceResponse SessionService::CreateSession(const nlohmann::json& body) {
  std::vector<std::string> warnings;
  std::shared_ptr<Entry> entry;
  try {
    SessionExperimentFromRequest(body, &warnings);
    entry = BuildEntry(NewId("s"), body);
  } catch (...) {
    return FromException(std::current_exception());
  }
  {
    std::lock_guard<std::mutex> lock(sessions_mutex_);
    while (sessions_.count(entry->id)) entry->id = NewId("s");
    sessions_[entry->id] = entry;
  }
  try {
    std::lock_guard<std::mutex> lock(entry->mutex);
    Persist(*entry);
  } catch (const std::exception& e) {
    return Error(500, "persistence_failed", e.what());
  }
  const Task& task = entry->session->task();
  return {201,
          {{"session_id", entry->id},
           {"problem", ProblemKindName(entry->experiment.problem)},
           {"steps", entry->experiment.steps},
           {"pool_size", task.pool_size()},
           {"feature_names", task.FeatureNames()},
           {"warnings", warnings}}};
}

ServiceResponse SessionService::GetQuery(const std::string& session_id) {
  std::shared_ptr<Entry> entry = Find(session_id);
  if (!entry) return NotFound(session_id);
  std::lock_guard<std::mutex> lock(entry->mutex);
  try {
    const PendingQuery& q = entry->session->CurrentQuery();
    const Task& task = entry->session->task();
    return {200,
            {{"query_id", q.query_id},
             {"iteration", q.iteration},
             {"attempt", q.attempt},
             {"context", q.context},
             {"left", Side(task, q.context, q.pair.first)},
             {"right", Side(task, q.context, q.pair.second)}}};
  } catch (...) {
    return FromException(std::current_exception());
  }
}

ServiceResponse SessionService::AnswerLocked(
    Entry& entry, int query_id, Label label,
    std::optional<double> response_seconds, bool persist) {
  auto seen = entry.answered.find(query_id);
  if (seen != entry.answered.end()) {
    if (seen->second.label == label) return {200, seen->second.response};
    return Error(409, "stale_query",
                 "query " + std::to_string(query_id) +
                     " was already answered with a different label");
  }
  AnswerOutcome outcome;
  try {
    outcome = entry.session->Answer(query_id, label, response_seconds);
  } catch (...) {
    return FromException(std::current_exception());
  }
  const nlohmann::json response = {
      {"iteration", entry.session->iteration()},
      {"accepted", outcome.accepted},
      {"advanced", outcome.advanced},
      {"finished", entry.session->finished()}};
  entry.answered[query_id] = {label, response};
  nlohmann::json record = {{"query_id", query_id}, {"label", LabelName(label)}};
  if (response_seconds) record["response_seconds"] = *response_seconds;
  entry.log.push_back(std::move(record));
  if (persist) {
    try {
      Persist(entry);
    } catch (const std::exception& e) {
      return Error(500, "persistence_failed", e.what());
    }
  }
  return {200, response};
}

ServiceResponse SessionService::PostAnswer(const std::string& session_id,
                                           const nlohmann::json& body) {
  std::shared_ptr<Entry> entry = Find(session_id);
  if (!entry) return NotFound(session_id);
  if (!body.is_object() || !body.contains("query_id") ||
      !body.at("query_id").is_number_integer() || !body.contains("label") ||
      !body.at("label").is_string()) {
    return Error(400, "bad_request",
                 "body must be {query_id: integer, label: string}");
  }
  const std::optional<Label> label =
      LabelFromString(body.at("label").get<std::string>());
  if (!label) {
    return Error(400, "bad_request",
                 "label must be \"left\", \"right\" or \"indifferent\"");
  }
  std::optional<double> seconds;
  if (body.contains("response_seconds")) {
    if (!body.at("response_seconds").is_number()) {
      return Error(400, "bad_request", "response_seconds must be a number");
    }
    seconds = body.at("response_seconds").get<double>();
  }
  std::lock_guard<std::mutex> lock(entry->mutex);
  return AnswerLocked(*entry, body.at("query_id").get<int>(), *label, seconds,
                      true);
}

ServiceResponse SessionService::GetState(const std::string& session_id) {
  std::shared_ptr<Entry> entry = Find(session_id);
  if (!entry) return NotFound(session_id);
  std::lock_guard<std::mutex> lock(entry->mutex);
  const Session& s = *entry->session;
  int left = 0;
  int right = 0;
  for (const PreferenceObservation& o : s.dataset()) {
    (o.label == Label::kLeft ? left : right) += 1;
  }
  const auto& pending = s.pending();
  return {200,
          {{"session_id", entry->id},
           {"iteration", s.iteration()},
           {"steps", s.config().steps},
           {"finished", s.finished()},
           {"feature_names", s.task().FeatureNames()},
           {"weights_mean", VectorJson(s.ensemble().Mean())},
           {"weights_std", VectorJson(s.ensemble().StdDev())},
           {"history_counts",
            {{"exchanges", s.exchanges().size()},
             {"strict", s.dataset().size()},
             {"indifferent", s.indifferent_count()},
             {"left", left},
             {"right", right}}},
           {"pending_query_id",
            pending ? nlohmann::json(pending->query_id) : nlohmann::json()}}};
}

ServiceResponse SessionService::Synthesize(const std::string& session_id,
                                           const nlohmann::json& body) {
  std::shared_ptr<Entry> entry = Find(session_id);
  if (!entry) return NotFound(session_id);
  if (!body.is_object() || !body.contains("instance_id") ||
      !body.at("instance_id").is_number_integer()) {
    return Error(400, "bad_request", "body must be {instance_id: integer}");
  }
  const int context = body.at("instance_id").get<int>();
  std::shared_ptr<const Task> task;
  WeightVector w;
  {
    std::lock_guard<std::mutex> lock(entry->mutex);
    task = entry->session->task_ptr();
    w = entry->session->ensemble().Mean();
  }
  bool known = false;
  for (const auto* list : {&task->train_contexts(), &task->test_contexts()}) {
    for (ContextId c : *list) known = known || c == context;
  }
  if (!known) {
    return Error(400, "bad_request",
                 "unknown instance_id " + std::to_string(context));
  }
  const bool background = task->kind() == ProblemKind::kPcTsp &&
                          task->exact_synthesis() &&
                          entry->experiment.nodes >=
                              options_.async_synthesis_min_nodes;
  if (!background) {
    try {
      return {200, SynthesisJson(*task, context, w)};
    } catch (...) {
      return FromException(std::current_exception());
    }
  }
  const std::string job_id = NewId("j");
  Job job;
  job.session_id = session_id;
  job.result = std::async(std::launch::async, [task, context, w] {
                 return SynthesisJson(*task, context, w);
               }).share();
  {
    std::lock_guard<std::mutex> lock(jobs_mutex_);
    jobs_[job_id] = std::move(job);
  }
  return {202,
          {{"job_id", job_id},
           {"status", "pending"},
           {"poll", "/api/jobs/" + job_id}}};
}

ServiceResponse SessionService::GetJob(const std::string& job_id) {
  std::shared_future<nlohmann::json> result;
  {
    std::lock_guard<std::mutex> lock(jobs_mutex_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) {
      return Error(404, "not_found", "unknown job '" + job_id + "'");
    }
    result = it->second.result;
  }
  if (result.wait_for(std::chrono::seconds(0)) != std::future_status::ready) {
    return {200, {{"job_id", job_id}, {"status", "pending"}}};
  }
  try {
    return {200,
            {{"job_id", job_id}, {"status", "done"}, {"result", result.get()}}};
  } catch (...) {
    const ServiceResponse failure = FromException(std::current_exception());
    return {200,
            {{"job_id", job_id}, {"status", "failed"}, {"error", failure.body}}};
  }
}

size_t SessionService::session_count() const {
  std::lock_guard<std::mutex> lock(sessions_mutex_);
  return sessions_.size();
}

}  // namespace prefpool

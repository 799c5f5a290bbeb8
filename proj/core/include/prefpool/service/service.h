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

#ifndef PREFPOOL_SERVICE_SERVICE_H_
#define PREFPOOL_SERVICE_SERVICE_H_

#include <cstdint>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefpool/bench/experiment.h"
#include "prefpool/loop/session.h"
#include "prefpool/loop/task.h"

namespace prefpool {

// HTTP status plus JSON body. Errors carry {code, message}.
struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  // Directory holding one JSON file per session; empty disables persistence.
  std::string state_dir;
  // Largest pool a session may request; larger requests get 507.
  int max_pool_size = 200'000;
  // PC-TSP sessions with at least this many nodes (and exact synthesis)
  // solve in a background job.
  int async_synthesis_min_nodes = 13;
};

// Session create body -> resolved experiment. Human sessions default to
// PC-TSP with V=10. Throws ConfigError on unknown or ill-typed fields.
ExperimentConfig SessionExperimentFromRequest(
    const nlohmann::json& body, std::vector<std::string>* warnings = nullptr);

// Live elicitation sessions for human decision makers. Thread-safe: calls
// on different sessions run concurrently, calls on one session are
// serialized.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options = {});
  ~SessionService();
  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  // Rebuilds every persisted session by replaying its answers. Files that
  // fail to replay are skipped and described in `errors`.
  int Restore(std::vector<std::string>* errors = nullptr);

  ServiceResponse CreateSession(const nlohmann::json& body);
  ServiceResponse GetQuery(const std::string& session_id);
  ServiceResponse PostAnswer(const std::string& session_id,
                             const nlohmann::json& body);
  ServiceResponse GetState(const std::string& session_id);
  ServiceResponse Synthesize(const std::string& session_id,
                             const nlohmann::json& body);
  ServiceResponse GetJob(const std::string& job_id);

  size_t session_count() const;
  const ServiceOptions& options() const { return options_; }

 private:
  struct Answered {
    Label label = Label::kIndifferent;
    nlohmann::json response;
  };

  struct Entry {
    std::mutex mutex;
    std::string id;
    nlohmann::json request;
    ExperimentConfig experiment;
    std::unique_ptr<Session> session;
    std::map<int, Answered> answered;
    nlohmann::json log = nlohmann::json::array();
  };

  struct Job {
    std::shared_future<nlohmann::json> result;
    std::string session_id;
  };

  std::shared_ptr<const Task> TaskFor(const ExperimentConfig& experiment);
  std::shared_ptr<Entry> Find(const std::string& session_id) const;
  std::shared_ptr<Entry> BuildEntry(const std::string& id,
                                    const nlohmann::json& request);
  void Persist(const Entry& entry) const;
  std::string NewId(const char* prefix);
  ServiceResponse AnswerLocked(Entry& entry, int query_id, Label label,
                               std::optional<double> response_seconds,
                               bool persist);

  ServiceOptions options_;

  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;

  std::mutex tasks_mutex_;
  std::map<std::string, std::shared_future<std::shared_ptr<const Task>>>
      tasks_;

  std::mutex jobs_mutex_;
  std::map<std::string, Job> jobs_;

  std::mutex id_mutex_;
  std::mt19937_64 id_rng_;
};

}  // namespace prefpool

#endif  // PREFPOOL_SERVICE_SERVICE_H_

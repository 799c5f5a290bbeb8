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

#ifndef PREFPOOL_LOOP_SESSION_H_
#define PREFPOOL_LOOP_SESSION_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "prefpool/core/random.h"
#include "prefpool/core/types.h"
#include "prefpool/core/utility.h"
#include "prefpool/learning/trainer.h"
#include "prefpool/loop/task.h"
#include "prefpool/selection/acquisition.h"

namespace prefpool {

struct LoopConfig {
  int steps = 100;
  int ensemble_size = 25;
  AcquisitionConfig acquisition;
  LearnerConfig learner;
  // Evaluate every this many iterations (and always at the last one).
  int eval_every = 1;
  // Re-queries allowed within one iteration after indifferent answers.
  int indifference_retry_cap = 5;
};

// Throws ContractError on out-of-range settings.
void ValidateLoopConfig(const LoopConfig& config);

class SessionFinishedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StaleQueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PendingQuery {
  // Unique within a session, increasing.
  int query_id = 0;
  // 1-based iteration this query belongs to.
  int iteration = 0;
  ContextId context = 0;
  QueryPair pair;
  // 0 for the first query of an iteration, then one per re-query.
  int attempt = 0;
};

struct AnswerOutcome {
  // The answer completed the iteration (strict label, or indifference with
  // the retry cap used up).
  bool advanced = false;
  // A strict label grew the dataset.
  bool accepted = false;
};

struct IterationTiming {
  int iteration = 0;
  double select_ms = 0.0;
  double update_ms = 0.0;
  int exchanges = 0;
  int indifferent = 0;
};

// One elicitation session. A state machine over iterations: fetch the
// pending query, answer it, repeat until `steps` iterations are done.
// Single-writer; callers serialize access.
class Session {
 public:
  Session(std::shared_ptr<const Task> task, LoopConfig config, uint64_t seed);

  const Task& task() const { return *task_; }
  std::shared_ptr<const Task> task_ptr() const { return task_; }
  const LoopConfig& config() const { return config_; }
  uint64_t seed() const { return seed_; }

  // Completed iterations.
  int iteration() const { return iteration_; }
  bool finished() const { return iteration_ >= config_.steps; }

  const Ensemble& ensemble() const { return ensemble_; }
  // Strict-preference observations, in arrival order.
  const std::vector<PreferenceObservation>& dataset() const {
    return dataset_;
  }
  // Every answer received, indifferent ones included.
  const std::vector<PreferenceObservation>& exchanges() const {
    return exchanges_;
  }
  int indifferent_count() const { return indifferent_count_; }
  const std::vector<IterationTiming>& timings() const { return timings_; }

  const std::optional<PendingQuery>& pending() const { return pending_; }

  // The pending query, selecting a new one when none is pending. Throws
  // SessionFinishedError after the last iteration.
  const PendingQuery& CurrentQuery();

  // Answers the pending query. Throws StaleQueryError when `query_id` does
  // not match it and SessionFinishedError after the last iteration.
  AnswerOutcome Answer(int query_id, Label label,
                       std::optional<double> response_seconds = {});
  // Answers whatever query is pending (selecting one if needed).
  AnswerOutcome Answer(Label label);

  // Context scheduled for 1-based iteration t: a seeded round-robin over
  // the training contexts.
  ContextId ContextForIteration(int t) const;

  // argmax over the feasible set under the ensemble-mean weights.
  Synthesis Synthesize(ContextId context) const;

 private:
  void Advance();

  std::shared_ptr<const Task> task_;
  LoopConfig config_;
  uint64_t seed_;
  RandomSource selection_rng_;
  std::vector<ContextId> schedule_;
  Ensemble ensemble_;
  std::vector<PreferenceObservation> dataset_;
  std::vector<TrainingExample> examples_;
  std::vector<PreferenceObservation> exchanges_;
  std::optional<PendingQuery> pending_;
  int iteration_ = 0;
  int attempt_ = 0;
  // Candidates already judged indifferent in `shown_context_`; re-queries
  // avoid them. Reset when the context changes.
  std::vector<CandidateId> shown_;
  ContextId shown_context_ = -1;
  ScoreCache score_cache_;
  int next_query_id_ = 1;
  int indifferent_count_ = 0;
  IterationTiming current_timing_;
  std::vector<IterationTiming> timings_;
};

// Source of answers for RunIteration: a simulated DM or a human front end.
class AnswerSource {
 public:
  virtual ~AnswerSource() = default;
  // nullopt means no answer arrived in time.
  virtual std::optional<Label> Answer(const Session& session,
                                      const PendingQuery& query) = 0;
};

// Plays one full iteration: queries until a strict answer arrives or the
// indifference retry cap is used up. Returns false (leaving the query
// pending) when the source times out.
bool RunIteration(Session& session, AnswerSource& source);

}  // namespace prefpool

#endif  // PREFPOOL_LOOP_SESSION_H_

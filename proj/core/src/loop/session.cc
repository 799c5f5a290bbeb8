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

#include "prefpool/loop/session.h"

#include <chrono>

#include "prefpool/core/errors.h"

namespace prefpool {
namespace {

constexpr uint64_t kInitStream = 11;
constexpr uint64_t kSelectionStream = 12;
constexpr uint64_t kScheduleStream = 13;
constexpr uint64_t kShuffleStream = 14;

double MillisSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

void ValidateLoopConfig(const LoopConfig& config) {
  if (config.steps < 1) throw ContractError("steps must be >= 1");
  if (config.ensemble_size < 1) throw ContractError("ensemble size must be >= 1");
  if (config.eval_every < 1) throw ContractError("eval_every must be >= 1");
  if (config.indifference_retry_cap < 1) {
    throw ContractError("indifference retry cap must be >= 1");
  }
  if (config.acquisition.clusters < 0) {
    throw ContractError("cluster count must be >= 0");
  }
  ValidateLearnerConfig(config.learner);
}

Session::Session(std::shared_ptr<const Task> task, LoopConfig config,
                 uint64_t seed)
    : task_(std::move(task)),
      config_(std::move(config)),
      seed_(seed),
      selection_rng_(seed, kSelectionStream) {
  ValidateLoopConfig(config_);
  config_.learner.shuffle_seed = MixSeed(seed, kShuffleStream);
  RandomSource init_rng(seed, kInitStream);
  ensemble_ =
      InitializeEnsemble(config_.ensemble_size, task_->feature_dim(), init_rng);
  schedule_ = task_->train_contexts();
  RandomSource schedule_rng(seed, kScheduleStream);
  schedule_rng.Shuffle(schedule_);
}

ContextId Session::ContextForIteration(int t) const {
  return schedule_[static_cast<size_t>(t - 1) % schedule_.size()];
}

const PendingQuery& Session::CurrentQuery() {
  if (finished()) throw SessionFinishedError("session is finished");
  if (pending_) return *pending_;
  const int t = iteration_ + 1;
  const ContextId context = ContextForIteration(t);
  if (context != shown_context_) {
    shown_.clear();
    shown_context_ = context;
  }
  auto pool = task_->Clustered(context, config_.acquisition.clusters);
  const auto start = std::chrono::steady_clock::now();
  const QueryPair pair =
      SelectQuery(*pool, ensemble_, config_.acquisition, t, selection_rng_,
                  shown_, &score_cache_);
  current_timing_.select_ms += MillisSince(start);
  pending_ = PendingQuery{next_query_id_++, t, context, pair, attempt_};
  return *pending_;
}

AnswerOutcome Session::Answer(Label label) {
  return Answer(CurrentQuery().query_id, label);
}

AnswerOutcome Session::Answer(int query_id, Label label,
                              std::optional<double> response_seconds) {
  if (finished()) throw SessionFinishedError("session is finished");
  if (!pending_ || pending_->query_id != query_id) {
    throw StaleQueryError("query " + std::to_string(query_id) +
                          " is not the pending query");
  }
  const PendingQuery query = *pending_;
  pending_.reset();
  PreferenceObservation obs{query.context, query.pair.first, query.pair.second,
                            label, response_seconds};
  exchanges_.push_back(obs);
  ++current_timing_.exchanges;

  AnswerOutcome outcome;
  if (label == Label::kIndifferent) {
    ++indifferent_count_;
    ++current_timing_.indifferent;
    shown_.push_back(query.pair.first);
    shown_.push_back(query.pair.second);
    if (attempt_ < config_.indifference_retry_cap) {
      ++attempt_;
      return outcome;
    }
    outcome.advanced = true;
    Advance();
    return outcome;
  }

  const auto start = std::chrono::steady_clock::now();
  const FeatureMatrix& f = *task_->PoolFeatures(query.context);
  const CandidateId winner =
      label == Label::kLeft ? query.pair.first : query.pair.second;
  const CandidateId loser =
      label == Label::kLeft ? query.pair.second : query.pair.first;
  TrainingExample example{(f.row(winner) - f.row(loser)).transpose()};
  dataset_.push_back(obs);
  examples_.push_back(example);
  ensemble_ = EnsembleUpdate(ensemble_, examples_, example, config_.learner);
  current_timing_.update_ms += MillisSince(start);
  outcome.advanced = true;
  outcome.accepted = true;
  Advance();
  return outcome;
}

void Session::Advance() {
  ++iteration_;
  attempt_ = 0;
  score_cache_.Clear();
  current_timing_.iteration = iteration_;
  timings_.push_back(current_timing_);
  current_timing_ = IterationTiming{};
}

Synthesis Session::Synthesize(ContextId context) const {
  return task_->Synthesize(context, ensemble_.Mean());
}

bool RunIteration(Session& session, AnswerSource& source) {
  while (true) {
    const PendingQuery query = session.CurrentQuery();
    const std::optional<Label> label = source.Answer(session, query);
    if (!label) return false;
    if (session.Answer(query.query_id, *label).advanced) return true;
  }
}

}  // namespace prefpool

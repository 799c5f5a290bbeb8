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

#include "prefpool/loop/simulation.h"

#include "prefpool/core/utility.h"
#include "prefpool/oracle/metrics.h"

namespace prefpool {

SimulatedAnswerSource::SimulatedAnswerSource(SimulatedDM dm,
                                             ResponseModelConfig response)
    : dm_(std::move(dm)),
      response_(response),
      rng_(dm_.seed, /*stream=*/1) {}

const SimulatedDM& SimulatedAnswerSource::ForContext(const Task& task,
                                                     ContextId context) {
  auto it = per_context_.find(context);
  if (it != per_context_.end()) return it->second;
  SimulatedDM view = dm_;
  view.beta = response_.beta;
  if (response_.fixed_margin) {
    view.eps_ind = *response_.fixed_margin;
  } else {
    const Eigen::VectorXd u = *task.PoolFeatures(context) * dm_.w_true;
    view.eps_ind = response_.margin_fraction * (u.maxCoeff() - u.minCoeff());
  }
  ValidateDM(view);
  return per_context_.emplace(context, view).first->second;
}

std::optional<Label> SimulatedAnswerSource::Answer(const Session& session,
                                                   const PendingQuery& query) {
  const SimulatedDM& dm = ForContext(session.task(), query.context);
  const FeatureMatrix& f = *session.task().PoolFeatures(query.context);
  return Respond(dm, f.row(query.pair.first).transpose(),
                 f.row(query.pair.second).transpose(), rng_);
}

DmRunResult RunSimulatedDm(std::shared_ptr<const Task> task,
                           const SimulatedDM& dm, const LoopConfig& config,
                           const ResponseModelConfig& response,
                           uint64_t session_seed) {
  Session session(task, config, session_seed);
  SimulatedAnswerSource source(dm, response);

  const std::vector<ContextId>& tests = task->test_contexts();
  std::vector<double> u_opt(tests.size());
  for (size_t i = 0; i < tests.size(); ++i) {
    const Synthesis best = task->Synthesize(tests[i], dm.w_true);
    u_opt[i] = Utility(dm.w_true, best.features);
  }

  DmRunResult result;
  result.dm_id = dm.id;
  while (!session.finished()) {
    RunIteration(session, source);
    const int t = session.iteration();
    if (t % config.eval_every != 0 && t != config.steps) continue;
    EvalPoint point;
    point.iteration = t;
    point.indifference_count = session.indifferent_count();
    point.proxy = !task->exact_synthesis();
    int satisfied = 0;
    for (size_t i = 0; i < tests.size(); ++i) {
      const Synthesis hat = session.Synthesize(tests[i]);
      const double u_hat = Utility(dm.w_true, hat.features);
      point.regrets.push_back(RelativeRegret(task->sense(), u_opt[i], u_hat));
      const bool ok =
          DmSatisfied(source.ForContext(*task, tests[i]), u_opt[i], u_hat);
      point.satisfied.push_back(ok ? 1 : 0);
      satisfied += ok ? 1 : 0;
    }
    const MeanAndStderr s = Summarize(point.regrets);
    point.regret_mean = s.mean;
    point.regret_stderr = s.std_error;
    point.satisfied_frac = static_cast<double>(satisfied) / tests.size();
    result.evals.push_back(std::move(point));
  }
  result.timings = session.timings();
  result.exchanges = static_cast<int>(session.exchanges().size());
  result.indifferent = session.indifferent_count();
  result.dataset_size = static_cast<int>(session.dataset().size());
  result.final_mean = session.ensemble().Mean();
  return result;
}

}  // namespace prefpool

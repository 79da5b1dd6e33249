//
// Copyright 2026 The FedQ Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include "fedq/baselines/dqn.h"

#include "fedq/baselines/inputs.h"
#include "fedq/common/error.h"
#include "fedq/fed/federated_q.h"
#include "fedq/fed/policy.h"
#include "fedq/fed/replay.h"
#include "fedq/nn/loss.h"

namespace fedq::baselines {
namespace {

const BaselineConfig& CheckedFor(BaselineKind kind, const BaselineConfig& c) {
  Validate(c);
  if (IsSupervised(kind)) {
    throw ConfigError(std::string(KindName(kind)) + " is not a DQN baseline");
  }
  return c;
}

}  // namespace

DqnLearner::DqnLearner(BaselineKind kind, const BaselineConfig& c)
    : config_(CheckedFor(kind, c)),
      model_(nn::Model::Create(BaselineNetworkSpec(kind, c),
                               DeriveSeed(c.seed, "dqn.init"), c.adam)),
      rng_(DeriveSeed(c.seed, "dqn.policy")),
      replay_(c.replay_capacity) {}

grid::Action DqnLearner::Act(const nn::Tensor& s, double eps) {
  return fed::EpsilonGreedy(eps, rng_, [&] { return model_.Predict(s).data; });
}

float DqnLearner::Observe(DqnTransition t) {
  replay_.Store(std::move(t));
  const DqnTransition& tj = replay_.Get(replay_.Sample(rng_));
  const float y = tj.done ? tj.r
                          : fed::ComputeTargetY(tj.r, config_.gamma, false,
                                                model_.Predict(tj.s_next).data);
  nn::ForwardResult fr = nn::Forward(model_.spec, model_.params, tj.s);
  const std::size_t a = grid::ActionIndex(tj.a);
  const nn::ScalarLoss l = nn::MseLoss(fr.output.data[a], y);
  nn::Tensor g(fr.output.shape);
  g.data[a] = l.grad;
  const nn::Gradients grads = nn::Backward(fr.tape, g);
  nn::AdamStep(model_.params, grads.params, model_.adam);
  return l.loss;
}

DqnResult TrainDqn(BaselineKind kind, const BaselineConfig& c,
                   fed::MapList maps, int episodes, int max_steps) {
  DqnLearner learner(kind, c);
  if (maps.empty()) throw ConfigError("no training maps");
  if (episodes < 0 || max_steps < 1) {
    throw ConfigError("episodes must be >= 0 and max_steps >= 1");
  }
  Rng env_rng(DeriveSeed(c.seed, "env"));
  Rng beta_rng(DeriveSeed(c.seed, "beta.behavior"));

  DqnResult out;
  for (int ep = 0; ep < episodes; ++ep) {
    const double eps = c.epsilon.At(ep);
    const grid::DatasetEntry& m = *maps[env_rng.UniformInt(maps.size())];
    BaselineEpisode env(kind, c.history, m, max_steps);
    nn::Tensor s = env.Input();

    fed::EpisodeLog log;
    log.episode = ep;
    log.map_id = m.id;
    log.epsilon = eps;
    double loss_sum = 0.0;
    for (;;) {
      const grid::Action a = learner.Act(s, eps);
      const grid::StepResult r = env.Step(a, BetaMove(c.beta_behavior, beta_rng));
      nn::Tensor s_next = env.Input();
      loss_sum += learner.Observe({s, a, r.reward, s_next, r.done});
      log.cum_reward += r.reward;
      ++log.steps;
      s = std::move(s_next);
      if (r.done) break;
    }
    log.outcome = env.state().outcome;
    log.mean_loss = loss_sum / log.steps;
    out.logs.push_back(log);
  }
  out.model = learner.TakeModel();
  return out;
}

}  // namespace fedq::baselines

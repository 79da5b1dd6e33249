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


#ifndef FEDQ_BASELINES_DQN_H_
#define FEDQ_BASELINES_DQN_H_

#include <vector>

#include "fedq/baselines/config.h"
#include "fedq/common/rng.h"
#include "fedq/fed/replay.h"
#include "fedq/fed/session.h"
#include "fedq/nn/model.h"

namespace fedq::baselines {

struct DqnTransition {
  nn::Tensor s;
  grid::Action a = grid::Action::kEast;
  float r = 0.0f;
  nn::Tensor s_next;
  bool done = false;
};

// The learning half of a DQN baseline, independent of where transitions come
// from. Batch size 1 and no target network.
class DqnLearner {
 public:
  // Throws ConfigError for the supervised kinds.
  DqnLearner(BaselineKind kind, const BaselineConfig& c);

  // Epsilon-greedy on the network output, ties to the lowest index.
  grid::Action Act(const nn::Tensor& s, double eps);
  // Stores the transition, samples one uniformly from the replay and takes
  // one Adam step on (Y - Q(s_j)[a_j])^2 with Y = r_j + gamma max Q(s_j').
  // Returns the loss before the step.
  float Observe(DqnTransition t);

  const nn::Model& model() const { return model_; }
  nn::Model& model() { return model_; }
  nn::Model TakeModel() { return std::move(model_); }

 private:
  BaselineConfig config_;
  nn::Model model_;
  Rng rng_;
  fed::IndexedReplay<DqnTransition> replay_;
};

struct DqnResult {
  nn::Model model;
  std::vector<fed::EpisodeLog> logs;
};

// Single-learner DQN: batch size 1, no target network, the same replay,
// exploration schedule and reward stream as the federated trainer. Beta
// moves by c.beta_behavior. Throws ConfigError for the supervised kinds.
DqnResult TrainDqn(BaselineKind kind, const BaselineConfig& c,
                   fed::MapList maps, int episodes, int max_steps);

}  // namespace fedq::baselines

#endif  // FEDQ_BASELINES_DQN_H_

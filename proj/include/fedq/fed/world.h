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

#ifndef FEDQ_FED_WORLD_H_
#define FEDQ_FED_WORLD_H_

#include <mutex>
#include <optional>

#include "fedq/grid/gridworld.h"

namespace fedq::fed {

// What agent beta can do with the environment: look at its own window and
// commit its move for the current round. It never sees rewards.
class BetaEnvironment {
 public:
  virtual ~BetaEnvironment() = default;
  virtual grid::Observation ObserveBeta() = 0;
  virtual void SubmitBetaAction(grid::Action a) = 0;
};

// The simulated environment both agents act in. Beta commits its move first;
// alpha's step then executes the joint round and receives the reward.
class World : public BetaEnvironment {
 public:
  World() = default;

  void Reset(grid::MapGrid map, grid::AgentPos alpha, grid::AgentPos beta,
             int max_steps);

  grid::Observation ObserveAlpha() const;
  grid::Observation ObserveBeta() override;
  void SubmitBetaAction(grid::Action a) override;

  // Throws ProtocolError if beta has not committed a move this round.
  grid::StepResult StepAlpha(grid::Action a);

  grid::EpisodeState state() const;

 private:
  mutable std::mutex mu_;
  std::optional<grid::EpisodeState> state_;
  std::optional<grid::Action> pending_beta_;
};

}  // namespace fedq::fed

#endif  // FEDQ_FED_WORLD_H_

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

#include "fedq/fed/world.h"

#include "fedq/common/error.h"

namespace fedq::fed {

void World::Reset(grid::MapGrid map, grid::AgentPos alpha,
                  grid::AgentPos beta, int max_steps) {
  std::lock_guard<std::mutex> lock(mu_);
  state_ = grid::StartEpisode(std::move(map), alpha, beta, max_steps);
  pending_beta_.reset();
}

grid::Observation World::ObserveAlpha() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!state_) throw ProtocolError("world has no active episode");
  return grid::Observe(state_->map, state_->pos_alpha, grid::kAlphaWindow);
}

grid::Observation World::ObserveBeta() {
  std::lock_guard<std::mutex> lock(mu_);
  if (!state_) throw ProtocolError("world has no active episode");
  return grid::Observe(state_->map, state_->pos_beta, grid::kBetaWindow);
}

void World::SubmitBetaAction(grid::Action a) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!state_) throw ProtocolError("world has no active episode");
  pending_beta_ = a;
}

grid::StepResult World::StepAlpha(grid::Action a) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!state_) throw ProtocolError("world has no active episode");
  if (!pending_beta_) throw ProtocolError("beta has not committed a move");
  const grid::Action b = *pending_beta_;
  pending_beta_.reset();
  return grid::Step(*state_, a, b);
}

grid::EpisodeState World::state() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!state_) throw ProtocolError("world has no active episode");
  return *state_;
}

}  // namespace fedq::fed

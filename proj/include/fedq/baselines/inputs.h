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


#ifndef FEDQ_BASELINES_INPUTS_H_
#define FEDQ_BASELINES_INPUTS_H_

#include <optional>

#include "fedq/baselines/config.h"
#include "fedq/common/rng.h"
#include "fedq/grid/dataset.h"
#include "fedq/grid/gridworld.h"
#include "fedq/nn/tensor.h"

namespace fedq::baselines {

// H*9 + H*25: both histories flattened, alpha's first.
std::size_t FullInputWidth(int history);

// [H, 3, 3]. Takes no beta history, so alpha-only learners cannot read it.
nn::Tensor AlphaInput(const grid::ObsHistory& alpha);

// [H*9 + H*25].
nn::Tensor FullInput(const grid::ObsHistory& alpha,
                     const grid::ObsHistory& beta);

// Beta's move for one round under the given behavior; empty means beta
// stays where it is.
std::optional<grid::Action> BetaMove(BetaBehavior b, Rng& rng);

// One episode on a dataset map as seen by a single centralized learner.
// Beta's history is only kept for the kinds that consume it.
class BaselineEpisode {
 public:
  BaselineEpisode(BaselineKind kind, int history, const grid::DatasetEntry& m,
                  int max_steps);

  nn::Tensor Input() const;
  grid::StepResult Step(grid::Action a_alpha, std::optional<grid::Action> a_beta);
  const grid::EpisodeState& state() const { return state_; }

 private:
  grid::EpisodeState state_;
  grid::ObsHistory alpha_;
  std::optional<grid::ObsHistory> beta_;
};

}  // namespace fedq::baselines

#endif  // FEDQ_BASELINES_INPUTS_H_

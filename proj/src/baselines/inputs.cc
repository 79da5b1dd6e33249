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


#include "fedq/baselines/inputs.h"

#include <algorithm>

#include "fedq/common/error.h"

namespace fedq::baselines {

std::size_t FullInputWidth(int history) {
  const auto h = static_cast<std::size_t>(history);
  return h * grid::kAlphaWindow * grid::kAlphaWindow +
         h * grid::kBetaWindow * grid::kBetaWindow;
}

nn::Tensor AlphaInput(const grid::ObsHistory& alpha) {
  if (alpha.window() != grid::kAlphaWindow) {
    throw ShapeError("alpha history must use the 3x3 window");
  }
  return alpha.ToTensor();
}

nn::Tensor FullInput(const grid::ObsHistory& alpha,
                     const grid::ObsHistory& beta) {
  if (alpha.window() != grid::kAlphaWindow || beta.window() != grid::kBetaWindow) {
    throw ShapeError("full input needs a 3x3 alpha and a 5x5 beta history");
  }
  if (alpha.length() != beta.length()) {
    throw ShapeError("full input histories differ in length");
  }
  const nn::Tensor a = alpha.ToTensor();
  const nn::Tensor b = beta.ToTensor();
  nn::Tensor out({FullInputWidth(alpha.length())});
  std::copy(a.data.begin(), a.data.end(), out.data.begin());
  std::copy(b.data.begin(), b.data.end(),
            out.data.begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

std::optional<grid::Action> BetaMove(BetaBehavior b, Rng& rng) {
  if (b == BetaBehavior::kStationary) return std::nullopt;
  return grid::ActionFromIndex(rng.UniformInt(grid::kNumActions));
}

BaselineEpisode::BaselineEpisode(BaselineKind kind, int history,
                                 const grid::DatasetEntry& m, int max_steps)
    : state_(grid::StartEpisode(m.map, m.start_alpha, m.start_beta, max_steps)),
      alpha_(history, grid::kAlphaWindow) {
  alpha_.Push(grid::Observe(state_.map, state_.pos_alpha, grid::kAlphaWindow));
  if (ConsumesBeta(kind)) {
    beta_.emplace(history, grid::kBetaWindow);
    beta_->Push(grid::Observe(state_.map, state_.pos_beta, grid::kBetaWindow));
  }
}

nn::Tensor BaselineEpisode::Input() const {
  return beta_ ? FullInput(alpha_, *beta_) : AlphaInput(alpha_);
}

grid::StepResult BaselineEpisode::Step(grid::Action a_alpha,
                                       std::optional<grid::Action> a_beta) {
  const grid::StepResult r = grid::Step(state_, a_alpha, a_beta);
  alpha_.Push(grid::Observe(state_.map, state_.pos_alpha, grid::kAlphaWindow));
  if (beta_) {
    beta_->Push(grid::Observe(state_.map, state_.pos_beta, grid::kBetaWindow));
  }
  return r;
}

}  // namespace fedq::baselines

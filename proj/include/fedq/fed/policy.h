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

#ifndef FEDQ_FED_POLICY_H_
#define FEDQ_FED_POLICY_H_

#include <span>

#include "fedq/common/rng.h"
#include "fedq/grid/gridworld.h"
#include "fedq/nn/loss.h"

namespace fedq::fed {

// Linear decay from `start` to `end` over the first `decay_fraction` of
// `total_episodes`, constant afterwards.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.1;
  double decay_fraction = 0.5;
  int total_episodes = 1;

  double At(int episode) const;
};

// Throws ConfigError unless 0 <= end <= start <= 1 and the fraction is in
// [0, 1].
void ValidateSchedule(const EpsilonSchedule& s);

// One uniform draw decides between exploring and exploiting; exploring draws
// a second uniform action. `q_fn` is only called when exploiting, so the
// random streams it may use are left untouched otherwise. Ties go to the
// lowest action index.
template <class QFn>
grid::Action EpsilonGreedy(double eps, Rng& rng, QFn&& q_fn) {
  if (rng.Uniform01() < eps) {
    return grid::ActionFromIndex(rng.UniformInt(grid::kNumActions));
  }
  const auto q = q_fn();
  return grid::ActionFromIndex(nn::ArgMax(q));
}

inline grid::Action Greedy(std::span<const float> q) {
  return grid::ActionFromIndex(nn::ArgMax(q));
}

}  // namespace fedq::fed

#endif  // FEDQ_FED_POLICY_H_

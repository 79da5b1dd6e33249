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

#ifndef FEDQ_GRID_EPISODE_RESULT_H_
#define FEDQ_GRID_EPISODE_RESULT_H_

#include <cstddef>

#include "fedq/grid/gridworld.h"

namespace fedq::grid {

// Outcome of one evaluation episode on one map.
struct EpisodeResult {
  std::size_t map_id = 0;
  Outcome outcome = Outcome::kTimeout;
  int steps = 0;
  double cum_reward = 0.0;

  friend bool operator==(const EpisodeResult&, const EpisodeResult&) = default;
};

}  // namespace fedq::grid

#endif  // FEDQ_GRID_EPISODE_RESULT_H_

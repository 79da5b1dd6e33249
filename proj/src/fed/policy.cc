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

#include "fedq/fed/policy.h"

#include <algorithm>

#include "fedq/common/error.h"

namespace fedq::fed {

double EpsilonSchedule::At(int episode) const {
  const double span = decay_fraction * total_episodes;
  if (span <= 0.0) return end;
  const double frac = std::min(1.0, std::max(0.0, episode / span));
  return start + (end - start) * frac;
}

void ValidateSchedule(const EpsilonSchedule& s) {
  if (!(s.start >= 0.0 && s.start <= 1.0 && s.end >= 0.0 && s.end <= s.start)) {
    throw ConfigError("epsilon schedule needs 0 <= end <= start <= 1");
  }
  if (!(s.decay_fraction >= 0.0 && s.decay_fraction <= 1.0)) {
    throw ConfigError("epsilon decay fraction must be in [0, 1]");
  }
  if (s.total_episodes < 1) throw ConfigError("total episodes must be >= 1");
}

}  // namespace fedq::fed

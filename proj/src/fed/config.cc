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

#include "fedq/fed/config.h"

#include <cmath>

#include "fedq/common/error.h"
#include "fedq/fed/federated_q.h"
#include "fedq/grid/gridworld.h"

namespace fedq::fed {

void Validate(const FedConfig& c) {
  if (c.history < 1) throw ConfigError("history length must be >= 1");
  if (!std::isfinite(c.sigma) || c.sigma < 0) throw ConfigError("sigma must be >= 0");
  if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) throw ConfigError("gamma must be in [0, 1]");
  if (!(c.adam.lr >= 0.0) || !std::isfinite(c.adam.lr)) {
    throw ConfigError("learning rate must be finite and >= 0");
  }
  if (c.replay_capacity == 0) throw ConfigError("replay capacity must be > 0");
  if (c.conv_channels == 0 || c.hidden == 0 || c.head_hidden == 0) {
    throw ConfigError("layer widths must be > 0");
  }
  ValidateSchedule(c.epsilon);
}

nn::NetworkSpec AlphaNetworkSpec(const FedConfig& c) {
  return nn::ConvQNetworkSpec(static_cast<std::size_t>(c.history),
                              grid::kAlphaWindow, c.conv_channels, c.hidden,
                              grid::kNumActions);
}

nn::NetworkSpec BetaNetworkSpec(const FedConfig& c) {
  return nn::ConvQNetworkSpec(static_cast<std::size_t>(c.history),
                              grid::kBetaWindow, c.conv_channels, c.hidden,
                              grid::kNumActions);
}

nn::NetworkSpec HeadNetworkSpec(const FedConfig& c) {
  return FederatedHeadSpec(c.head_hidden);
}

}  // namespace fedq::fed

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


#include "fedq/baselines/config.h"

#include <cmath>
#include <string>

#include "fedq/baselines/inputs.h"
#include "fedq/common/error.h"
#include "fedq/grid/gridworld.h"

namespace fedq::baselines {

const char* KindName(BaselineKind k) {
  switch (k) {
    case BaselineKind::kDqnAlpha: return "dqn_alpha";
    case BaselineKind::kDqnFull: return "dqn_full";
    case BaselineKind::kFcnAlpha: return "fcn_alpha";
    case BaselineKind::kFcnFull: return "fcn_full";
  }
  return "?";
}

BaselineKind ParseKind(std::string_view name) {
  for (auto k : {BaselineKind::kDqnAlpha, BaselineKind::kDqnFull,
                 BaselineKind::kFcnAlpha, BaselineKind::kFcnFull}) {
    if (name == KindName(k)) return k;
  }
  throw ConfigError("unknown baseline kind '" + std::string(name) + "'");
}

bool ConsumesBeta(BaselineKind k) {
  return k == BaselineKind::kDqnFull || k == BaselineKind::kFcnFull;
}

bool IsSupervised(BaselineKind k) {
  return k == BaselineKind::kFcnAlpha || k == BaselineKind::kFcnFull;
}

const char* BehaviorName(BetaBehavior b) {
  return b == BetaBehavior::kUniform ? "uniform" : "stationary";
}

BetaBehavior ParseBehavior(std::string_view name) {
  if (name == "uniform") return BetaBehavior::kUniform;
  if (name == "stationary") return BetaBehavior::kStationary;
  throw ConfigError("unknown beta behavior '" + std::string(name) + "'");
}

void Validate(const BaselineConfig& c) {
  if (c.history < 1) throw ConfigError("history length must be >= 1");
  if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) {
    throw ConfigError("gamma must be in [0, 1]");
  }
  fed::ValidateSchedule(c.epsilon);
  if (!(std::isfinite(c.adam.lr) && c.adam.lr >= 0.0)) {
    throw ConfigError("learning rate must be finite and >= 0");
  }
  if (c.replay_capacity == 0) throw ConfigError("replay capacity must be positive");
  if (c.conv_channels == 0 || c.hidden == 0) {
    throw ConfigError("layer widths must be positive");
  }
  if (c.fcn_epochs < 1) throw ConfigError("fcn epochs must be >= 1");
  if (c.fcn_batch_size == 0) throw ConfigError("fcn batch size must be positive");
}

nn::NetworkSpec BaselineNetworkSpec(BaselineKind kind, const BaselineConfig& c) {
  const auto h = static_cast<std::size_t>(c.history);
  if (ConsumesBeta(kind)) {
    return nn::MlpSpec(FullInputWidth(c.history), c.hidden, grid::kNumActions);
  }
  return nn::ConvQNetworkSpec(h, grid::kAlphaWindow, c.conv_channels, c.hidden,
                              grid::kNumActions);
}

}  // namespace fedq::baselines

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


#ifndef FEDQ_BASELINES_CONFIG_H_
#define FEDQ_BASELINES_CONFIG_H_

#include <cstdint>
#include <string_view>

#include "fedq/fed/policy.h"
#include "fedq/nn/adam.h"
#include "fedq/nn/network.h"

namespace fedq::baselines {

enum class BaselineKind { kDqnAlpha, kDqnFull, kFcnAlpha, kFcnFull };
const char* KindName(BaselineKind k);
// Accepts "dqn_alpha", "dqn_full", "fcn_alpha", "fcn_full".
BaselineKind ParseKind(std::string_view name);
bool ConsumesBeta(BaselineKind k);
bool IsSupervised(BaselineKind k);

// How beta moves while a baseline controls alpha.
enum class BetaBehavior { kUniform, kStationary };
const char* BehaviorName(BetaBehavior b);
// Accepts "uniform" and "stationary".
BetaBehavior ParseBehavior(std::string_view name);

struct BaselineConfig {
  int history = 2;
  double gamma = 0.9;
  fed::EpsilonSchedule epsilon;
  nn::AdamOptions adam;
  std::size_t replay_capacity = 10000;
  std::size_t conv_channels = 32;
  std::size_t hidden = 256;
  BetaBehavior beta_behavior = BetaBehavior::kUniform;
  int fcn_epochs = 20;
  std::size_t fcn_batch_size = 32;
  std::uint64_t seed = 0;
};

// Throws ConfigError on out-of-range values.
void Validate(const BaselineConfig& c);

// The *_alpha kinds use the same convolutional network as agent alpha. The
// *_full kinds use an MLP over both flattened histories.
nn::NetworkSpec BaselineNetworkSpec(BaselineKind kind, const BaselineConfig& c);

}  // namespace fedq::baselines

#endif  // FEDQ_BASELINES_CONFIG_H_

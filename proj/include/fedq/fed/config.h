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

#ifndef FEDQ_FED_CONFIG_H_
#define FEDQ_FED_CONFIG_H_

#include <cstddef>
#include <cstdint>

#include "fedq/fed/policy.h"
#include "fedq/nn/adam.h"
#include "fedq/nn/network.h"

namespace fedq::fed {

// Settings both agents agree on before training starts.
struct FedConfig {
  int history = 2;      // H
  double sigma = 1.0;   // training-time noise
  double gamma = 0.9;
  EpsilonSchedule epsilon;
  nn::AdamOptions adam;
  std::size_t replay_capacity = 10000;
  std::size_t conv_channels = 32;
  std::size_t hidden = 256;
  std::size_t head_hidden = 32;
  std::uint64_t seed = 0;
};

// Throws ConfigError on out-of-range values.
void Validate(const FedConfig& c);

nn::NetworkSpec AlphaNetworkSpec(const FedConfig& c);
nn::NetworkSpec BetaNetworkSpec(const FedConfig& c);
nn::NetworkSpec HeadNetworkSpec(const FedConfig& c);

}  // namespace fedq::fed

#endif  // FEDQ_FED_CONFIG_H_

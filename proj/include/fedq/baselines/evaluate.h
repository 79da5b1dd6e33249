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


#ifndef FEDQ_BASELINES_EVALUATE_H_
#define FEDQ_BASELINES_EVALUATE_H_

#include <vector>

#include "fedq/baselines/config.h"
#include "fedq/fed/session.h"
#include "fedq/grid/episode_result.h"
#include "fedq/nn/network.h"

namespace fedq::baselines {

// One greedy episode per map from its dataset starts. Alpha takes the argmax
// of the network output; beta moves by c.beta_behavior from a stream that is
// reseeded on every call, so results depend only on the parameters and seed.
std::vector<grid::EpisodeResult> EvaluateBaseline(BaselineKind kind,
                                                  const BaselineConfig& c,
                                                  const nn::ParamSet& params,
                                                  fed::MapList maps,
                                                  int max_steps);

}  // namespace fedq::baselines

#endif  // FEDQ_BASELINES_EVALUATE_H_

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

#ifndef FEDQ_NN_ADAM_H_
#define FEDQ_NN_ADAM_H_

#include <cstdint>

#include "fedq/nn/network.h"

namespace fedq::nn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamOptions options;
  ParamSet m;
  ParamSet v;
  std::uint64_t t = 0;
};

AdamState MakeAdamState(const NetworkSpec& spec, AdamOptions options = {});

// One bias-corrected Adam update:
//   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2
//   p <- p - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
// Increments state.t and params.version. Throws ShapeError on mismatch and
// NonFiniteError if the update produced NaN/Inf.
void AdamStep(ParamSet& params, const ParamSet& grads, AdamState& state);

}  // namespace fedq::nn

#endif  // FEDQ_NN_ADAM_H_

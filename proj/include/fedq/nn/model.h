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

#ifndef FEDQ_NN_MODEL_H_
#define FEDQ_NN_MODEL_H_

#include <cstdint>

#include "fedq/nn/adam.h"
#include "fedq/nn/network.h"

namespace fedq::nn {

// A network with its parameters and optimizer state.
struct Model {
  NetworkSpec spec;
  ParamSet params;
  AdamState adam;

  static Model Create(NetworkSpec spec, std::uint64_t seed,
                      AdamOptions options = {}) {
    Model m;
    m.params = InitParams(spec, seed);
    m.adam = MakeAdamState(spec, options);
    m.spec = std::move(spec);
    return m;
  }

  Tensor Predict(const Tensor& input) const {
    return nn::Predict(spec, params, input);
  }
};

}  // namespace fedq::nn

#endif  // FEDQ_NN_MODEL_H_

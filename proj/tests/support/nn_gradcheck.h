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

#ifndef FEDQ_TESTS_SUPPORT_NN_GRADCHECK_H_
#define FEDQ_TESTS_SUPPORT_NN_GRADCHECK_H_

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "fedq/common/rng.h"
#include "fedq/nn/network.h"
#include "support/gradcheck.h"

namespace fedq::testing {

struct NamedSpec {
  std::string layer;  // layer type the case is meant to exercise
  nn::NetworkSpec spec;
};

// Small networks (<= 32 parameters) that together cover every layer type.
inline std::vector<NamedSpec> SmallGradcheckNetworks() {
  using namespace nn;
  return {
      {"Dense", {{3}, {Dense{3, 4}}}},
      {"ReLU", {{2}, {Dense{2, 4}, ReLU{}, Dense{4, 2}}}},
      {"Conv2D", {{1, 3, 3}, {Conv2D{1, 2}}}},
      {"Flatten", {{1, 3, 3}, {Conv2D{1, 1}, ReLU{}, Flatten{}, Dense{9, 2}}}},
      {"Conv2D-multichannel", {{2, 3, 3}, {Conv2D{2, 1}, Flatten{}, Dense{9, 1}}}},
  };
}

// True when some ReLU input lies within `margin` of the kink, where central
// differences are not meaningful.
inline bool NearReluKink(const nn::Tape& tape, float margin) {
  for (std::size_t i = 0; i < tape.spec->layers.size(); ++i) {
    if (!std::holds_alternative<nn::ReLU>(tape.spec->layers[i])) continue;
    for (float x : tape.inputs[i].data) {
      if (std::fabs(x) < margin) return true;
    }
  }
  return false;
}

inline void FillUniform(std::vector<float>& v, Rng& rng, double lo, double hi) {
  for (float& x : v) x = static_cast<float>(rng.Uniform(lo, hi));
}

// Draws a random instance (params, input, output weighting w) and returns the
// relative error between Backward's gradient of sum(w * output) and central
// differences of the same objective, over all parameters and the input.
inline double NetworkGradientError(const nn::NetworkSpec& spec, Rng& rng) {
  nn::ParamSet params;
  nn::Tensor input(spec.input_shape);
  nn::Tensor weights(spec.OutputShape());
  for (int attempt = 0;; ++attempt) {
    params = nn::ZerosLike(spec);
    for (auto& b : params.buffers) FillUniform(b.data, rng, -1.0, 1.0);
    FillUniform(input.data, rng, -1.0, 1.0);
    FillUniform(weights.data, rng, -1.0, 1.0);
    auto probe = nn::Forward(spec, params, input);
    if (!NearReluKink(probe.tape, 0.02f) || attempt > 100) break;
  }

  auto objective = [&] {
    const nn::Tensor out = nn::Predict(spec, params, input);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      s += static_cast<double>(weights.data[i]) * out.data[i];
    }
    return s;
  };

  auto fwd = nn::Forward(spec, params, input);
  const nn::Gradients g = nn::Backward(fwd.tape, weights);

  std::vector<double> analytic, numeric;
  for (std::size_t b = 0; b < params.buffers.size(); ++b) {
    auto n = NumericGradient(params.buffers[b].data, objective);
    numeric.insert(numeric.end(), n.begin(), n.end());
    analytic.insert(analytic.end(), g.params.buffers[b].data.begin(),
                    g.params.buffers[b].data.end());
  }
  auto n = NumericGradient(input.data, objective);
  numeric.insert(numeric.end(), n.begin(), n.end());
  analytic.insert(analytic.end(), g.input.data.begin(), g.input.data.end());
  return RelativeError(analytic, numeric);
}

}  // namespace fedq::testing

#endif  // FEDQ_TESTS_SUPPORT_NN_GRADCHECK_H_

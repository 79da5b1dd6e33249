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

#include "fedq/nn/adam.h"

#include <cmath>
#include <limits>

#include "fedq/common/error.h"

namespace fedq::nn {

AdamState MakeAdamState(const NetworkSpec& spec, AdamOptions options) {
  AdamState s;
  s.options = options;
  s.m = ZerosLike(spec);
  s.v = ZerosLike(spec);
  return s;
}

void AdamStep(ParamSet& params, const ParamSet& grads, AdamState& state) {
  const std::size_t n = params.buffers.size();
  if (grads.buffers.size() != n || state.m.buffers.size() != n ||
      state.v.buffers.size() != n) {
    throw ShapeError("adam: buffer count mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& shape = params.buffers[i].shape;
    if (grads.buffers[i].shape != shape || state.m.buffers[i].shape != shape ||
        state.v.buffers[i].shape != shape) {
      throw ShapeError("adam: buffer " + std::to_string(i) + " shape mismatch");
    }
  }

  const AdamOptions& o = state.options;
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const float b1 = static_cast<float>(o.beta1);
  const float b2 = static_cast<float>(o.beta2);
  const float step = static_cast<float>(o.lr / (1.0 - std::pow(o.beta1, t)));
  const float v_scale = static_cast<float>(1.0 / (1.0 - std::pow(o.beta2, t)));
  const float eps = static_cast<float>(o.eps);
  constexpr float kTiny = std::numeric_limits<float>::min();

  for (std::size_t i = 0; i < n; ++i) {
    float* p = params.buffers[i].data.data();
    const float* g = grads.buffers[i].data.data();
    float* m = state.m.buffers[i].data.data();
    float* v = state.v.buffers[i].data.data();
    const std::size_t len = params.buffers[i].size();
    for (std::size_t k = 0; k < len; ++k) {
      // Moments of long-idle weights decay into the subnormal range, where
      // arithmetic is very slow on x86. Flush them to zero explicitly.
      float mk = b1 * m[k] + (1.0f - b1) * g[k];
      float vk = b2 * v[k] + (1.0f - b2) * g[k] * g[k];
      m[k] = std::fabs(mk) < kTiny ? 0.0f : mk;
      v[k] = vk < kTiny ? 0.0f : vk;
      p[k] -= step * m[k] / (std::sqrt(v[k] * v_scale) + eps);
    }
#ifndef NDEBUG
    CheckFinite(params.buffers[i].data, "parameters after adam step");
#endif
  }
  params.version += 1;
}

}  // namespace fedq::nn

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

#include "fedq/nn/loss.h"

#include <algorithm>
#include <cmath>

#include "fedq/common/error.h"
#include "fedq/nn/tensor.h"

namespace fedq::nn {

ScalarLoss MseLoss(float pred, float target) {
  if (!std::isfinite(pred) || !std::isfinite(target)) {
    throw NonFiniteError("mse loss on non-finite input");
  }
  const float diff = target - pred;
  return {diff * diff, 2.0f * (pred - target)};
}

VectorLoss SoftmaxCrossEntropy(std::span<const float> logits, std::size_t label) {
  if (label >= logits.size()) throw ShapeError("label out of range");
  CheckFinite(logits, "cross-entropy logits");
  const float max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (float z : logits) sum += std::exp(static_cast<double>(z - max));
  VectorLoss out;
  out.grad.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out.grad[i] = static_cast<float>(std::exp(static_cast<double>(logits[i] - max)) / sum);
  }
  out.loss = static_cast<float>(std::log(sum) - (logits[label] - max));
  out.grad[label] -= 1.0f;
  return out;
}

std::size_t ArgMax(std::span<const float> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace fedq::nn

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

#ifndef FEDQ_NN_LOSS_H_
#define FEDQ_NN_LOSS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace fedq::nn {

struct ScalarLoss {
  float loss = 0.0f;
  float grad = 0.0f;  // d loss / d pred
};

// (target - pred)^2 and its derivative 2 (pred - target).
ScalarLoss MseLoss(float pred, float target);

struct VectorLoss {
  float loss = 0.0f;
  std::vector<float> grad;  // d loss / d logits
};

// -log softmax(logits)[label]. Gradient is softmax(logits) - onehot(label).
VectorLoss SoftmaxCrossEntropy(std::span<const float> logits, std::size_t label);

// Index of the largest value; ties resolve to the lowest index.
std::size_t ArgMax(std::span<const float> values);

}  // namespace fedq::nn

#endif  // FEDQ_NN_LOSS_H_

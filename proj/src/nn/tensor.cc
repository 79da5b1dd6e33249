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

#include "fedq/nn/tensor.h"

#include <cmath>
#include <utility>

#include "fedq/common/error.h"

namespace fedq::nn {

std::size_t NumElements(std::span<const std::size_t> shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string ShapeToString(std::span<const std::size_t> shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape s) : shape(std::move(s)), data(NumElements(shape), 0.0f) {}

Tensor::Tensor(Shape s, std::vector<float> values)
    : shape(std::move(s)), data(std::move(values)) {
  if (NumElements(shape) != data.size()) {
    throw ShapeError("tensor shape " + ShapeToString(shape) + " does not hold " +
                     std::to_string(data.size()) + " elements");
  }
}

bool Tensor::AllFinite() const {
  for (float v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void CheckFinite(std::span<const float> values, const char* what) {
  for (float v : values) {
    if (!std::isfinite(v)) {
      throw NonFiniteError(std::string("non-finite value in ") + what);
    }
  }
}

}  // namespace fedq::nn

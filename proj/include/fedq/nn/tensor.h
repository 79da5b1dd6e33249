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

#ifndef FEDQ_NN_TENSOR_H_
#define FEDQ_NN_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fedq::nn {

using Shape = std::vector<std::size_t>;

std::size_t NumElements(std::span<const std::size_t> shape);
std::string ShapeToString(std::span<const std::size_t> shape);

// Dense row-major float32 tensor.
struct Tensor {
  Shape shape;
  std::vector<float> data;

  Tensor() = default;
  // Zero-filled tensor of the given shape.
  explicit Tensor(Shape s);
  // Throws ShapeError when the element count does not match the shape.
  Tensor(Shape s, std::vector<float> values);

  std::size_t size() const { return data.size(); }
  bool AllFinite() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;
};

// Throws NonFiniteError naming `what` if any element is NaN or Inf.
void CheckFinite(std::span<const float> values, const char* what);

}  // namespace fedq::nn

#endif  // FEDQ_NN_TENSOR_H_

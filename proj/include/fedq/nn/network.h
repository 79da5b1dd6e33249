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

#ifndef FEDQ_NN_NETWORK_H_
#define FEDQ_NN_NETWORK_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fedq/nn/tensor.h"

namespace fedq::nn {

// Fully connected layer. Expects a rank-1 input of length `in`.
struct Dense {
  std::size_t in = 0;
  std::size_t out = 0;
};

// 3x3 convolution with zero padding 1 and stride 1, so spatial size is kept.
// Expects a [in_ch, height, width] input.
struct Conv2D {
  static constexpr std::size_t kKernel = 3;
  static constexpr std::size_t kPad = 1;
  std::size_t in_ch = 0;
  std::size_t out_ch = 0;
};

struct ReLU {};
struct Flatten {};

using LayerSpec = std::variant<Dense, Conv2D, ReLU, Flatten>;

// Topology of a sequential network: an input shape plus an ordered layer
// list. Dense and Conv2D layers own a weight and a bias buffer each.
struct NetworkSpec {
  Shape input_shape;
  std::vector<LayerSpec> layers;

  // Throws ShapeError if adjacent layers do not compose.
  void Validate() const;
  // Shape entering each layer, plus the final output shape at the back.
  std::vector<Shape> ActivationShapes() const;
  Shape OutputShape() const;
  // Weight/bias shapes in buffer order.
  std::vector<Shape> ParamShapes() const;
  std::size_t NumParams() const;
  // Canonical textual form, e.g. "in[2,3,3]|conv(2,32)|relu|flatten|...".
  std::string ToString() const;
  // FNV-1a of ToString(); carried by checkpoints and theta_g frames.
  std::uint64_t Fingerprint() const;
};

// Conv(channels) -> ReLU -> Flatten -> Dense(hidden) -> ReLU -> Dense(actions)
// over a [history, window, window] input.
NetworkSpec ConvQNetworkSpec(std::size_t history, std::size_t window,
                             std::size_t conv_channels, std::size_t hidden,
                             std::size_t actions);

// Dense(in -> hidden) -> ReLU -> Dense(hidden -> out).
NetworkSpec MlpSpec(std::size_t in, std::size_t hidden, std::size_t out);

// Parameter buffers for a NetworkSpec, ordered as ParamShapes().
// `version` is bumped by every optimizer step so that tapes recorded against
// older parameters are detected as stale; it does not take part in equality.
struct ParamSet {
  std::vector<Tensor> buffers;
  std::uint64_t version = 0;

  std::size_t NumParams() const;
  bool AllFinite() const;

  friend bool operator==(const ParamSet& a, const ParamSet& b) {
    return a.buffers == b.buffers;
  }
};

// Zero-valued ParamSet with the spec's shapes.
ParamSet ZerosLike(const NetworkSpec& spec);

// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)), biases zero.
ParamSet InitParams(const NetworkSpec& spec, std::uint64_t seed);

// Activation record of one forward pass. Refers to the spec and params it was
// produced from; those must outlive it and must not be updated before
// Backward is called.
struct Tape {
  const NetworkSpec* spec = nullptr;
  const ParamSet* params = nullptr;
  std::uint64_t params_version = 0;
  std::uint64_t fingerprint = 0;
  // inputs[i] is the tensor that entered layer i.
  std::vector<Tensor> inputs;
  Shape output_shape;
};

struct ForwardResult {
  Tensor output;
  Tape tape;
};

struct Gradients {
  ParamSet params;
  Tensor input;
};

// Throws ShapeError on input mismatch and NonFiniteError on NaN/Inf output.
ForwardResult Forward(const NetworkSpec& spec, const ParamSet& params,
                      const Tensor& input);

// Output only, no tape retained.
Tensor Predict(const NetworkSpec& spec, const ParamSet& params,
               const Tensor& input);

// Throws ShapeError for a stale or mismatched tape or a wrongly shaped
// output gradient.
Gradients Backward(const Tape& tape, const Tensor& output_grad);

// dst += src, elementwise over matching buffers.
void AddInPlace(ParamSet& dst, const ParamSet& src);

}  // namespace fedq::nn

#endif  // FEDQ_NN_NETWORK_H_

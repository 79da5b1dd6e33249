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

#include "fedq/nn/network.h"

#include <cmath>
#include <utility>

#include "fedq/common/error.h"
#include "fedq/common/hash.h"
#include "fedq/common/rng.h"

namespace fedq::nn {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

Shape NextShape(const LayerSpec& layer, const Shape& in, std::size_t index) {
  auto fail = [&](const std::string& why) -> ShapeError {
    return ShapeError("layer " + std::to_string(index) + ": " + why +
                      " (input " + ShapeToString(in) + ")");
  };
  return std::visit(
      Overloaded{
          [&](const Dense& d) -> Shape {
            if (d.in == 0 || d.out == 0) throw fail("dense with zero width");
            if (in.size() != 1 || in[0] != d.in) throw fail("dense expects [" + std::to_string(d.in) + "]");
            return {d.out};
          },
          [&](const Conv2D& c) -> Shape {
            if (c.in_ch == 0 || c.out_ch == 0) throw fail("conv with zero channels");
            if (in.size() != 3 || in[0] != c.in_ch) throw fail("conv expects [" + std::to_string(c.in_ch) + ",h,w]");
            return {c.out_ch, in[1], in[2]};
          },
          [&](const ReLU&) -> Shape { return in; },
          [&](const Flatten&) -> Shape { return {NumElements(in)}; },
      },
      layer);
}

// --- Per-layer kernels. ---------------------------------------------------

void DenseForward(const Dense& d, const Tensor& w, const Tensor& b,
                  const float* x, float* y) {
  // Eight interleaved partial sums, combined in a fixed order, so the loop
  // vectorizes while staying deterministic.
  constexpr std::size_t kLanes = 8;
  const std::size_t body = d.in - d.in % kLanes;
  for (std::size_t o = 0; o < d.out; ++o) {
    const float* row = &w.data[o * d.in];
    float lane[kLanes] = {};
    for (std::size_t i = 0; i < body; i += kLanes) {
      for (std::size_t l = 0; l < kLanes; ++l) lane[l] += row[i + l] * x[i + l];
    }
    float acc = b.data[o];
    for (std::size_t i = body; i < d.in; ++i) acc += row[i] * x[i];
    acc += ((lane[0] + lane[1]) + (lane[2] + lane[3])) +
           ((lane[4] + lane[5]) + (lane[6] + lane[7]));
    y[o] = acc;
  }
}

void DenseBackward(const Dense& d, const Tensor& w, const float* x,
                   const float* gy, Tensor& gw, Tensor& gb, float* gx) {
  for (std::size_t i = 0; i < d.in; ++i) gx[i] = 0.0f;
  for (std::size_t o = 0; o < d.out; ++o) {
    const float g = gy[o];
    gb.data[o] += g;
    if (g == 0.0f) continue;
    const float* row = &w.data[o * d.in];
    float* grow = &gw.data[o * d.in];
    for (std::size_t i = 0; i < d.in; ++i) {
      grow[i] += g * x[i];
      gx[i] += g * row[i];
    }
  }
}

void ConvForward(const Conv2D& c, const Tensor& w, const Tensor& b,
                 const Shape& in_shape, const float* x, float* y) {
  const std::size_t h = in_shape[1], wd = in_shape[2];
  const std::size_t k = Conv2D::kKernel;
  for (std::size_t o = 0; o < c.out_ch; ++o) {
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t col = 0; col < wd; ++col) {
        float acc = b.data[o];
        for (std::size_t ic = 0; ic < c.in_ch; ++ic) {
          const float* kern = &w.data[((o * c.in_ch) + ic) * k * k];
          const float* plane = x + ic * h * wd;
          for (std::size_t kr = 0; kr < k; ++kr) {
            const std::ptrdiff_t rr = static_cast<std::ptrdiff_t>(r + kr) - Conv2D::kPad;
            if (rr < 0 || rr >= static_cast<std::ptrdiff_t>(h)) continue;
            for (std::size_t kc = 0; kc < k; ++kc) {
              const std::ptrdiff_t cc = static_cast<std::ptrdiff_t>(col + kc) - Conv2D::kPad;
              if (cc < 0 || cc >= static_cast<std::ptrdiff_t>(wd)) continue;
              acc += kern[kr * k + kc] * plane[rr * wd + cc];
            }
          }
        }
        y[(o * h + r) * wd + col] = acc;
      }
    }
  }
}

void ConvBackward(const Conv2D& c, const Tensor& w, const Shape& in_shape,
                  const float* x, const float* gy, Tensor& gw, Tensor& gb,
                  float* gx) {
  const std::size_t h = in_shape[1], wd = in_shape[2];
  const std::size_t k = Conv2D::kKernel;
  for (std::size_t i = 0; i < c.in_ch * h * wd; ++i) gx[i] = 0.0f;
  for (std::size_t o = 0; o < c.out_ch; ++o) {
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t col = 0; col < wd; ++col) {
        const float g = gy[(o * h + r) * wd + col];
        gb.data[o] += g;
        if (g == 0.0f) continue;
        for (std::size_t ic = 0; ic < c.in_ch; ++ic) {
          const std::size_t kbase = ((o * c.in_ch) + ic) * k * k;
          const float* plane = x + ic * h * wd;
          float* gplane = gx + ic * h * wd;
          for (std::size_t kr = 0; kr < k; ++kr) {
            const std::ptrdiff_t rr = static_cast<std::ptrdiff_t>(r + kr) - Conv2D::kPad;
            if (rr < 0 || rr >= static_cast<std::ptrdiff_t>(h)) continue;
            for (std::size_t kc = 0; kc < k; ++kc) {
              const std::ptrdiff_t cc = static_cast<std::ptrdiff_t>(col + kc) - Conv2D::kPad;
              if (cc < 0 || cc >= static_cast<std::ptrdiff_t>(wd)) continue;
              gw.data[kbase + kr * k + kc] += g * plane[rr * wd + cc];
              gplane[rr * wd + cc] += g * w.data[kbase + kr * k + kc];
            }
          }
        }
      }
    }
  }
}

void CheckParamsMatch(const NetworkSpec& spec, const ParamSet& params) {
  const auto shapes = spec.ParamShapes();
  if (shapes.size() != params.buffers.size()) {
    throw ShapeError("param set has " + std::to_string(params.buffers.size()) +
                     " buffers, spec needs " + std::to_string(shapes.size()));
  }
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (shapes[i] != params.buffers[i].shape) {
      throw ShapeError("param buffer " + std::to_string(i) + " has shape " +
                       ShapeToString(params.buffers[i].shape) + ", expected " +
                       ShapeToString(shapes[i]));
    }
  }
}

}  // namespace

void NetworkSpec::Validate() const { (void)ActivationShapes(); }

std::vector<Shape> NetworkSpec::ActivationShapes() const {
  if (input_shape.empty() || NumElements(input_shape) == 0) {
    throw ShapeError("network input shape is empty");
  }
  std::vector<Shape> shapes;
  shapes.reserve(layers.size() + 1);
  shapes.push_back(input_shape);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    shapes.push_back(NextShape(layers[i], shapes.back(), i));
  }
  return shapes;
}

Shape NetworkSpec::OutputShape() const { return ActivationShapes().back(); }

std::vector<Shape> NetworkSpec::ParamShapes() const {
  Validate();
  std::vector<Shape> shapes;
  for (const auto& layer : layers) {
    if (const auto* d = std::get_if<Dense>(&layer)) {
      shapes.push_back({d->out, d->in});
      shapes.push_back({d->out});
    } else if (const auto* c = std::get_if<Conv2D>(&layer)) {
      shapes.push_back({c->out_ch, c->in_ch, Conv2D::kKernel, Conv2D::kKernel});
      shapes.push_back({c->out_ch});
    }
  }
  return shapes;
}

std::size_t NetworkSpec::NumParams() const {
  std::size_t n = 0;
  for (const auto& s : ParamShapes()) n += NumElements(s);
  return n;
}

std::string NetworkSpec::ToString() const {
  std::string s = "in" + ShapeToString(input_shape);
  for (const auto& layer : layers) {
    s += "|";
    s += std::visit(
        Overloaded{
            [](const Dense& d) {
              return "dense(" + std::to_string(d.in) + "," + std::to_string(d.out) + ")";
            },
            [](const Conv2D& c) {
              return "conv3x3p1(" + std::to_string(c.in_ch) + "," + std::to_string(c.out_ch) + ")";
            },
            [](const ReLU&) { return std::string("relu"); },
            [](const Flatten&) { return std::string("flatten"); },
        },
        layer);
  }
  return s;
}

std::uint64_t NetworkSpec::Fingerprint() const { return Fnv1a64(ToString()); }

NetworkSpec ConvQNetworkSpec(std::size_t history, std::size_t window,
                             std::size_t conv_channels, std::size_t hidden,
                             std::size_t actions) {
  NetworkSpec spec;
  spec.input_shape = {history, window, window};
  spec.layers = {Conv2D{history, conv_channels},
                 ReLU{},
                 Flatten{},
                 Dense{conv_channels * window * window, hidden},
                 ReLU{},
                 Dense{hidden, actions}};
  spec.Validate();
  return spec;
}

NetworkSpec MlpSpec(std::size_t in, std::size_t hidden, std::size_t out) {
  NetworkSpec spec;
  spec.input_shape = {in};
  spec.layers = {Dense{in, hidden}, ReLU{}, Dense{hidden, out}};
  spec.Validate();
  return spec;
}

std::size_t ParamSet::NumParams() const {
  std::size_t n = 0;
  for (const auto& b : buffers) n += b.size();
  return n;
}

bool ParamSet::AllFinite() const {
  for (const auto& b : buffers) {
    if (!b.AllFinite()) return false;
  }
  return true;
}

ParamSet ZerosLike(const NetworkSpec& spec) {
  ParamSet p;
  for (auto& s : spec.ParamShapes()) p.buffers.emplace_back(std::move(s));
  return p;
}

ParamSet InitParams(const NetworkSpec& spec, std::uint64_t seed) {
  ParamSet p = ZerosLike(spec);
  Rng rng(seed);
  // Weight buffers sit at even positions; their fan-in is every dimension
  // except the leading (output) one.
  for (std::size_t i = 0; i < p.buffers.size(); i += 2) {
    Tensor& w = p.buffers[i];
    const std::size_t fan_in = w.size() / w.shape[0];
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (float& v : w.data) v = static_cast<float>(rng.Uniform(-bound, bound));
  }
  return p;
}

ForwardResult Forward(const NetworkSpec& spec, const ParamSet& params,
                      const Tensor& input) {
  const auto shapes = spec.ActivationShapes();
  if (input.shape != spec.input_shape) {
    throw ShapeError("input shape " + ShapeToString(input.shape) +
                     " does not match network input " +
                     ShapeToString(spec.input_shape));
  }
  CheckParamsMatch(spec, params);

  ForwardResult result;
  Tape& tape = result.tape;
  tape.spec = &spec;
  tape.params = &params;
  tape.params_version = params.version;
  tape.fingerprint = spec.Fingerprint();
  tape.inputs.reserve(spec.layers.size());

  Tensor x = input;
  std::size_t buf = 0;
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    Tensor y(shapes[i + 1]);
    const LayerSpec& layer = spec.layers[i];
    if (const auto* d = std::get_if<Dense>(&layer)) {
      DenseForward(*d, params.buffers[buf], params.buffers[buf + 1],
                   x.data.data(), y.data.data());
      buf += 2;
    } else if (const auto* c = std::get_if<Conv2D>(&layer)) {
      ConvForward(*c, params.buffers[buf], params.buffers[buf + 1], x.shape,
                  x.data.data(), y.data.data());
      buf += 2;
    } else if (std::holds_alternative<ReLU>(layer)) {
      for (std::size_t k = 0; k < x.size(); ++k) {
        y.data[k] = x.data[k] > 0.0f ? x.data[k] : 0.0f;
      }
    } else {
      y.data = x.data;
    }
    tape.inputs.push_back(std::move(x));
    x = std::move(y);
  }
  CheckFinite(x.data, "network output");
  tape.output_shape = x.shape;
  result.output = std::move(x);
  return result;
}

Tensor Predict(const NetworkSpec& spec, const ParamSet& params,
               const Tensor& input) {
  return Forward(spec, params, input).output;
}

Gradients Backward(const Tape& tape, const Tensor& output_grad) {
  if (tape.spec == nullptr || tape.params == nullptr) {
    throw ShapeError("backward called with an empty tape");
  }
  const NetworkSpec& spec = *tape.spec;
  const ParamSet& params = *tape.params;
  if (tape.fingerprint != spec.Fingerprint() ||
      tape.inputs.size() != spec.layers.size()) {
    throw ShapeError("tape does not match its network spec");
  }
  if (tape.params_version != params.version) {
    throw ShapeError("stale tape: parameters changed since the forward pass");
  }
  if (output_grad.shape != tape.output_shape) {
    throw ShapeError("output gradient shape " + ShapeToString(output_grad.shape) +
                     " does not match output " + ShapeToString(tape.output_shape));
  }

  Gradients grads;
  grads.params = ZerosLike(spec);
  Tensor g = output_grad;
  std::size_t buf = params.buffers.size();
  for (std::size_t i = spec.layers.size(); i-- > 0;) {
    const Tensor& x = tape.inputs[i];
    Tensor gx(x.shape);
    const LayerSpec& layer = spec.layers[i];
    if (const auto* d = std::get_if<Dense>(&layer)) {
      buf -= 2;
      DenseBackward(*d, params.buffers[buf], x.data.data(), g.data.data(),
                    grads.params.buffers[buf], grads.params.buffers[buf + 1],
                    gx.data.data());
    } else if (const auto* c = std::get_if<Conv2D>(&layer)) {
      buf -= 2;
      ConvBackward(*c, params.buffers[buf], x.shape, x.data.data(),
                   g.data.data(), grads.params.buffers[buf],
                   grads.params.buffers[buf + 1], gx.data.data());
    } else if (std::holds_alternative<ReLU>(layer)) {
      for (std::size_t k = 0; k < x.size(); ++k) {
        gx.data[k] = x.data[k] > 0.0f ? g.data[k] : 0.0f;
      }
    } else {
      gx.data = g.data;
    }
    g = std::move(gx);
  }
  grads.input = std::move(g);
  return grads;
}

void AddInPlace(ParamSet& dst, const ParamSet& src) {
  if (dst.buffers.size() != src.buffers.size()) {
    throw ShapeError("cannot add param sets with different buffer counts");
  }
  for (std::size_t i = 0; i < dst.buffers.size(); ++i) {
    if (dst.buffers[i].shape != src.buffers[i].shape) {
      throw ShapeError("cannot add param buffers of different shapes");
    }
    for (std::size_t k = 0; k < dst.buffers[i].size(); ++k) {
      dst.buffers[i].data[k] += src.buffers[i].data[k];
    }
  }
}

}  // namespace fedq::nn

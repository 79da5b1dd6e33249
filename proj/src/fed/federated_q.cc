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

#include "fedq/fed/federated_q.h"

#include <algorithm>
#include <string>

#include "fedq/common/error.h"
#include "fedq/nn/loss.h"

namespace fedq::fed {

nn::NetworkSpec FederatedHeadSpec(std::size_t head_hidden,
                                  std::size_t num_actions) {
  return nn::MlpSpec(2 * num_actions, head_hidden, num_actions);
}

nn::Tensor HeadInput(HeadSide side, std::span<const float> own,
                     std::span<const float> remote) {
  if (own.size() != remote.size()) {
    throw ShapeError("head input halves differ: " + std::to_string(own.size()) +
                     " vs " + std::to_string(remote.size()));
  }
  const auto first = side == HeadSide::kAlpha ? own : remote;
  const auto second = side == HeadSide::kAlpha ? remote : own;
  nn::Tensor x(nn::Shape{own.size() * 2});
  std::copy(first.begin(), first.end(), x.data.begin());
  std::copy(second.begin(), second.end(),
            x.data.begin() + static_cast<std::ptrdiff_t>(own.size()));
  return x;
}

FederatedPass FederatedForward(HeadSide side, const nn::Model& local,
                               const nn::NetworkSpec& head_spec,
                               const nn::ParamSet& head_params,
                               const nn::Tensor& obs,
                               std::span<const float> remote,
                               privacy::GaussianMechanism& mech) {
  const std::size_t d = head_spec.OutputShape()[0];
  if (remote.size() != d) {
    throw ShapeError("remote Q-vector has " + std::to_string(remote.size()) +
                     " entries, expected " + std::to_string(d));
  }
  FederatedPass pass;
  pass.side = side;
  pass.local = nn::Forward(local.spec, local.params, obs);
  pass.own_noised = mech.Perturb(pass.local.output.data);
  pass.head = nn::Forward(head_spec, head_params,
                          HeadInput(side, pass.own_noised, remote));
  return pass;
}

FederatedGradients FederatedBackward(const FederatedPass& pass,
                                     const nn::Tensor& q_grad) {
  nn::Gradients head = nn::Backward(pass.head.tape, q_grad);
  const std::size_t d = pass.own_noised.size();
  const auto offset =
      static_cast<std::ptrdiff_t>(pass.side == HeadSide::kAlpha ? 0 : d);
  // The noise is additive, so dC/dQ is the identity.
  nn::Tensor own_grad(nn::Shape{d});
  std::copy(head.input.data.begin() + offset,
            head.input.data.begin() + offset + static_cast<std::ptrdiff_t>(d),
            own_grad.data.begin());
  nn::Gradients local = nn::Backward(pass.local.tape, own_grad);
  return {std::move(local.params), std::move(head.params)};
}

FederatedLoss ActionValueLoss(const FederatedPass& pass, grid::Action action,
                              float y) {
  const std::size_t a = grid::ActionIndex(action);
  const auto q = pass.q();
  if (a >= q.size()) throw ShapeError("action index out of range");
  const nn::ScalarLoss l = nn::MseLoss(q[a], y);
  nn::Tensor q_grad(nn::Shape{q.size()});
  q_grad.data[a] = l.grad;
  return {l.loss, FederatedBackward(pass, q_grad)};
}

float ComputeTargetY(float r, double gamma, bool terminal,
                     std::span<const float> q_next) {
  if (terminal) return r;
  if (q_next.empty()) throw ShapeError("empty successor Q-vector");
  const float best = *std::max_element(q_next.begin(), q_next.end());
  return static_cast<float>(static_cast<double>(r) + gamma * best);
}

}  // namespace fedq::fed

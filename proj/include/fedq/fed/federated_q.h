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

#ifndef FEDQ_FED_FEDERATED_Q_H_
#define FEDQ_FED_FEDERATED_Q_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fedq/grid/gridworld.h"
#include "fedq/nn/model.h"
#include "fedq/privacy/gaussian_mechanism.h"

namespace fedq::fed {

// Which slot of the head input holds the local agent's noised Q-vector:
// alpha feeds [own | remote], beta feeds [remote | own].
enum class HeadSide { kAlpha, kBeta };

// Dense(2*actions -> hidden) -> ReLU -> Dense(hidden -> actions).
nn::NetworkSpec FederatedHeadSpec(std::size_t head_hidden,
                                  std::size_t num_actions = grid::kNumActions);

nn::Tensor HeadInput(HeadSide side, std::span<const float> own,
                     std::span<const float> remote);

struct FederatedPass {
  HeadSide side = HeadSide::kAlpha;
  std::vector<float> own_noised;  // the local C vector
  nn::ForwardResult local;
  nn::ForwardResult head;

  std::span<const float> q() const { return head.output.data; }
};

// Local network on `obs`, Gaussian perturbation of its output, then the head
// on the concatenation with `remote`. Throws ShapeError if `remote` does not
// have one entry per action. `local` and `head_params` must stay untouched
// until any Backward on the returned pass.
FederatedPass FederatedForward(HeadSide side, const nn::Model& local,
                               const nn::NetworkSpec& head_spec,
                               const nn::ParamSet& head_params,
                               const nn::Tensor& obs,
                               std::span<const float> remote,
                               privacy::GaussianMechanism& mech);

struct FederatedGradients {
  nn::ParamSet local;
  nn::ParamSet head;
};

// Pushes dL/dQ_f through the head and, via the local slot of the head input,
// into the local network. The gradient reaching the remote slot is dropped:
// the remote vector is data, not a node of this graph.
FederatedGradients FederatedBackward(const FederatedPass& pass,
                                     const nn::Tensor& q_grad);

struct FederatedLoss {
  float loss = 0.0f;
  FederatedGradients grads;
};

// Squared error between Y and the entry of the stored action; the other
// outputs get zero gradient.
FederatedLoss ActionValueLoss(const FederatedPass& pass, grid::Action action,
                              float y);

// Y = r when the successor is terminal, else r + gamma * max(q_next).
float ComputeTargetY(float r, double gamma, bool terminal,
                     std::span<const float> q_next);

}  // namespace fedq::fed

#endif  // FEDQ_FED_FEDERATED_Q_H_

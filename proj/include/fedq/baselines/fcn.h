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


#ifndef FEDQ_BASELINES_FCN_H_
#define FEDQ_BASELINES_FCN_H_

#include <span>
#include <vector>

#include "fedq/baselines/config.h"
#include "fedq/fed/session.h"
#include "fedq/nn/model.h"

namespace fedq::baselines {

struct FcnExample {
  nn::Tensor input;
  std::size_t label = 0;  // alpha's optimal action
};

// Replays each map's stored optimal joint plan from its starts and emits one
// example per round: the learner's input before the move, labelled with
// alpha's move.
std::vector<FcnExample> BuildFcnExamples(BaselineKind kind, int history,
                                         fed::MapList maps);

struct FcnResult {
  nn::Model model;
  double initial_loss = 0.0;
  // Mean cross-entropy over all examples after each epoch.
  std::vector<double> epoch_loss;
};

// Softmax cross-entropy with minibatches of c.fcn_batch_size (gradients
// averaged over the batch), reshuffled every epoch. Throws ConfigError on an
// empty example set or a DQN kind.
FcnResult TrainFcn(BaselineKind kind, const BaselineConfig& c,
                   std::span<const FcnExample> examples);

double MeanCrossEntropy(const nn::NetworkSpec& spec, const nn::ParamSet& params,
                        std::span<const FcnExample> examples);
double Accuracy(const nn::NetworkSpec& spec, const nn::ParamSet& params,
                std::span<const FcnExample> examples);

}  // namespace fedq::baselines

#endif  // FEDQ_BASELINES_FCN_H_

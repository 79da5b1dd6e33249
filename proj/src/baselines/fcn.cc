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


#include "fedq/baselines/fcn.h"

#include <numeric>
#include <utility>

#include "fedq/baselines/inputs.h"
#include "fedq/common/error.h"
#include "fedq/nn/loss.h"

namespace fedq::baselines {

std::vector<FcnExample> BuildFcnExamples(BaselineKind kind, int history,
                                         fed::MapList maps) {
  std::vector<FcnExample> out;
  for (const grid::DatasetEntry* m : maps) {
    if (m == nullptr) throw ConfigError("null map in example list");
    const int rounds = static_cast<int>(m->opt_actions.size());
    if (rounds == 0) continue;
    BaselineEpisode env(kind, history, *m, rounds);
    for (const auto& [a, b] : m->opt_actions) {
      if (env.state().done()) {
        throw ConfigError("stored plan of map " + std::to_string(m->id) +
                          " ends early");
      }
      out.push_back({env.Input(), grid::ActionIndex(a)});
      env.Step(a, b);
    }
  }
  return out;
}

double MeanCrossEntropy(const nn::NetworkSpec& spec, const nn::ParamSet& params,
                        std::span<const FcnExample> examples) {
  if (examples.empty()) throw ConfigError("no examples");
  double sum = 0.0;
  for (const auto& e : examples) {
    sum += nn::SoftmaxCrossEntropy(nn::Predict(spec, params, e.input).data,
                                   e.label)
               .loss;
  }
  return sum / static_cast<double>(examples.size());
}

double Accuracy(const nn::NetworkSpec& spec, const nn::ParamSet& params,
                std::span<const FcnExample> examples) {
  if (examples.empty()) throw ConfigError("no examples");
  std::size_t hits = 0;
  for (const auto& e : examples) {
    hits += nn::ArgMax(nn::Predict(spec, params, e.input).data) == e.label;
  }
  return static_cast<double>(hits) / static_cast<double>(examples.size());
}

FcnResult TrainFcn(BaselineKind kind, const BaselineConfig& c,
                   std::span<const FcnExample> examples) {
  Validate(c);
  if (!IsSupervised(kind)) {
    throw ConfigError(std::string(KindName(kind)) + " is not a supervised baseline");
  }
  if (examples.empty()) throw ConfigError("supervised training needs examples");

  FcnResult out;
  out.model = nn::Model::Create(BaselineNetworkSpec(kind, c),
                                DeriveSeed(c.seed, "fcn.init"), c.adam);
  nn::Model& model = out.model;
  out.initial_loss = MeanCrossEntropy(model.spec, model.params, examples);

  Rng shuffle_rng(DeriveSeed(c.seed, "fcn.shuffle"));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < c.fcn_epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.UniformInt(i)]);
    }
    for (std::size_t lo = 0; lo < order.size(); lo += c.fcn_batch_size) {
      const std::size_t hi = std::min(order.size(), lo + c.fcn_batch_size);
      const float scale = 1.0f / static_cast<float>(hi - lo);
      nn::ParamSet grad = nn::ZerosLike(model.spec);
      for (std::size_t k = lo; k < hi; ++k) {
        const FcnExample& e = examples[order[k]];
        nn::ForwardResult fr = nn::Forward(model.spec, model.params, e.input);
        nn::VectorLoss l = nn::SoftmaxCrossEntropy(fr.output.data, e.label);
        for (float& g : l.grad) g *= scale;
        nn::AddInPlace(grad, nn::Backward(fr.tape, nn::Tensor(fr.output.shape,
                                                             std::move(l.grad)))
                                 .params);
      }
      nn::AdamStep(model.params, grad, model.adam);
    }
    out.epoch_loss.push_back(MeanCrossEntropy(model.spec, model.params, examples));
  }
  return out;
}

}  // namespace fedq::baselines

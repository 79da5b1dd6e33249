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


#include "fedq/baselines/evaluate.h"

#include "fedq/baselines/inputs.h"
#include "fedq/common/error.h"
#include "fedq/fed/policy.h"

namespace fedq::baselines {

std::vector<grid::EpisodeResult> EvaluateBaseline(BaselineKind kind,
                                                  const BaselineConfig& c,
                                                  const nn::ParamSet& params,
                                                  fed::MapList maps,
                                                  int max_steps) {
  Validate(c);
  const nn::NetworkSpec spec = BaselineNetworkSpec(kind, c);
  Rng beta_rng(DeriveSeed(c.seed, "beta.eval_behavior"));
  std::vector<grid::EpisodeResult> results;
  results.reserve(maps.size());
  for (const grid::DatasetEntry* m : maps) {
    if (m == nullptr) throw ConfigError("null map in evaluation list");
    BaselineEpisode env(kind, c.history, *m, max_steps);
    grid::EpisodeResult res;
    res.map_id = m->id;
    for (;;) {
      const nn::Tensor q = nn::Predict(spec, params, env.Input());
      const grid::StepResult r =
          env.Step(fed::Greedy(q.data), BetaMove(c.beta_behavior, beta_rng));
      res.cum_reward += r.reward;
      ++res.steps;
      if (r.done) break;
    }
    res.outcome = env.state().outcome;
    results.push_back(res);
  }
  return results;
}

}  // namespace fedq::baselines

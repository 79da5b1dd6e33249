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

#include "fedq/privacy/gaussian_mechanism.h"

#include <cmath>

#include "fedq/common/error.h"
#include "fedq/nn/tensor.h"

namespace fedq::privacy {

GaussianMechanism::GaussianMechanism(double sigma, std::uint64_t seed)
    : sigma_(0.0), rng_(seed) {
  set_sigma(sigma);
}

void GaussianMechanism::set_sigma(double sigma) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw ConfigError("gaussian mechanism sigma must be finite and >= 0");
  }
  sigma_ = sigma;
}

std::vector<float> GaussianMechanism::Perturb(std::span<const float> q) {
  nn::CheckFinite(q, "vector passed to the gaussian mechanism");
  std::vector<float> out(q.begin(), q.end());
  if (sigma_ == 0.0) return out;
  for (float& v : out) {
    v = static_cast<float>(static_cast<double>(v) + sigma_ * rng_.StandardNormal());
  }
  return out;
}

}  // namespace fedq::privacy

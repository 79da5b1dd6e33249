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

#ifndef FEDQ_PRIVACY_GAUSSIAN_MECHANISM_H_
#define FEDQ_PRIVACY_GAUSSIAN_MECHANISM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "fedq/common/rng.h"

namespace fedq::privacy {

// Adds independent N(0, sigma^2) noise to every element of a Q-vector before
// it leaves its owner. No clipping or sensitivity calibration is applied, and
// no (epsilon, delta) guarantee is claimed.
class GaussianMechanism {
 public:
  // Throws ConfigError if sigma is negative or not finite.
  GaussianMechanism(double sigma, std::uint64_t seed);

  double sigma() const { return sigma_; }
  // Only changes the scale; the random stream continues.
  void set_sigma(double sigma);

  // Returns q + noise. With sigma == 0 the input is returned unchanged and no
  // randomness is consumed. Throws NonFiniteError on NaN/Inf input.
  std::vector<float> Perturb(std::span<const float> q);

 private:
  double sigma_;
  Rng rng_;
};

}  // namespace fedq::privacy

#endif  // FEDQ_PRIVACY_GAUSSIAN_MECHANISM_H_

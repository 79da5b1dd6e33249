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

#ifndef FEDQ_TESTS_SUPPORT_NOISE_STATS_H_
#define FEDQ_TESTS_SUPPORT_NOISE_STATS_H_

#include <cmath>
#include <vector>

#include "fedq/privacy/gaussian_mechanism.h"

namespace fedq::testing {

struct NoiseStats {
  double mean = 0.0;    // over element 0 draws
  double stddev = 0.0;  // over element 0 draws
  double cross_covariance = 0.0;  // sample covariance of elements 0 and 1
};

// Perturbs a fixed two-element vector `draws` times and summarises the
// noise (output - input) with two-pass statistics.
inline NoiseStats MeasureNoise(privacy::GaussianMechanism& mech, int draws) {
  const std::vector<float> q = {0.75f, -1.25f};
  std::vector<double> e0(static_cast<std::size_t>(draws)), e1(e0.size());
  for (std::size_t i = 0; i < e0.size(); ++i) {
    const auto out = mech.Perturb(q);
    e0[i] = static_cast<double>(out[0]) - q[0];
    e1[i] = static_cast<double>(out[1]) - q[1];
  }
  double m0 = 0, m1 = 0;
  for (std::size_t i = 0; i < e0.size(); ++i) {
    m0 += e0[i];
    m1 += e1[i];
  }
  m0 /= draws;
  m1 /= draws;
  double var = 0, cov = 0;
  for (std::size_t i = 0; i < e0.size(); ++i) {
    var += (e0[i] - m0) * (e0[i] - m0);
    cov += (e0[i] - m0) * (e1[i] - m1);
  }
  return {m0, std::sqrt(var / (draws - 1)), cov / (draws - 1)};
}

}  // namespace fedq::testing

#endif  // FEDQ_TESTS_SUPPORT_NOISE_STATS_H_

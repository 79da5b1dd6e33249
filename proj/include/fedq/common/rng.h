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

#ifndef FEDQ_COMMON_RNG_H_
#define FEDQ_COMMON_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace fedq {

// Mixes a base seed with a named stream so that independent consumers
// (initializers, exploration, noise) never share a sequence.
std::uint64_t DeriveSeed(std::uint64_t base, std::string_view stream);
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t index);

// Seeded random source. The engine is std::mt19937_64, whose output sequence
// is fixed by the standard; every transform on top of it is implemented here
// rather than through <random> distributions, which are not portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform01();

  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Uniform integer in [0, n). Unbiased (rejection on the top range).
  std::uint64_t UniformInt(std::uint64_t n);

  bool Bernoulli(double p) { return Uniform01() < p; }

  // Standard normal via the Box-Muller transform; the second value of each
  // pair is cached and returned by the next call.
  double StandardNormal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fedq

#endif  // FEDQ_COMMON_RNG_H_

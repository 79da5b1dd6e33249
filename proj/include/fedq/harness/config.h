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


#ifndef FEDQ_HARNESS_CONFIG_H_
#define FEDQ_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedq/baselines/config.h"
#include "fedq/fed/config.h"
#include "fedq/fed/session.h"

namespace fedq::harness {

enum class Method { kFedRl, kDqnAlpha, kDqnFull, kFcnAlpha, kFcnFull };
const char* MethodName(Method m);
// "fedrl" or one of the baseline kind names.
Method ParseMethod(std::string_view name);
bool IsBaseline(Method m);
baselines::BaselineKind BaselineKindOf(Method m);

enum class EvalMode { kNoiseOn, kNoiseOff };
const char* EvalModeName(EvalMode m);
// "noise-on" or "noise-off".
EvalMode ParseEvalMode(std::string_view name);

struct DatasetSettings {
  std::string path;  // JSON-lines file; generated from the fields below if empty
  std::size_t count = 500;
  double density = 0.3;
  std::uint64_t seed = 42;
};

struct ExperimentConfig {
  Method method = Method::kFedRl;
  int n = 8;
  int history = 2;
  double sigma = 1.0;
  double gamma = 0.9;
  double epsilon_start = 1.0;
  double epsilon_end = 0.1;
  double epsilon_decay_fraction = 0.5;
  double lr = 1e-3;
  int episodes = 2000;
  int max_steps = 0;  // T_m; 0 picks DefaultEpisodeCap(n)
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  fed::TransportKind transport = fed::TransportKind::kInProcess;
  EvalMode eval_mode = EvalMode::kNoiseOff;
  DatasetSettings dataset;
  std::size_t replay_capacity = 10000;
  std::size_t conv_channels = 32;
  std::size_t hidden = 256;
  std::size_t head_hidden = 32;
  baselines::BetaBehavior beta_behavior = baselines::BetaBehavior::kUniform;
  int fcn_epochs = 20;
  std::size_t fcn_batch_size = 32;
};

// Throws ConfigError on out-of-range values.
void Validate(const ExperimentConfig& c);

// Canonical JSON with every field present. Parsing accepts partial documents
// (missing fields keep their defaults) and rejects unknown keys.
std::string ConfigToJson(const ExperimentConfig& c);
ExperimentConfig ConfigFromJson(std::string_view text);

// Reads a config file and applies FEDQ_SEED, which replaces the seed list
// with that single seed.
ExperimentConfig LoadConfig(const std::filesystem::path& path);
void ApplyEnvOverrides(ExperimentConfig& c);
// Replaces the seed list with `repeats` consecutive seeds starting at the
// first configured one.
void SetRepeats(ExperimentConfig& c, int repeats);
void SaveConfig(const std::filesystem::path& path, const ExperimentConfig& c);

// FNV-1a of ConfigToJson.
std::uint64_t Fingerprint(const ExperimentConfig& c);
std::string FingerprintHex(std::uint64_t f);

// 38, 86 and 178 for n = 8, 16 and 32; empty for other sizes.
std::optional<int> DefaultEpisodeCap(int n);

fed::FedConfig ToFedConfig(const ExperimentConfig& c, std::uint64_t seed);
baselines::BaselineConfig ToBaselineConfig(const ExperimentConfig& c,
                                           std::uint64_t seed);

}  // namespace fedq::harness

#endif  // FEDQ_HARNESS_CONFIG_H_

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


#include "fedq/harness/config.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "fedq/common/error.h"
#include "fedq/common/hash.h"
#include "json.hpp"

namespace fedq::harness {
namespace {

using nlohmann::json;

void CheckKeys(const json& j, const char* where,
               std::initializer_list<std::string_view> known) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown config key '" + key + "' in " + where);
  }
}

template <class T>
void Read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

const char* MethodName(Method m) {
  switch (m) {
    case Method::kFedRl: return "fedrl";
    case Method::kDqnAlpha: return "dqn_alpha";
    case Method::kDqnFull: return "dqn_full";
    case Method::kFcnAlpha: return "fcn_alpha";
    case Method::kFcnFull: return "fcn_full";
  }
  return "?";
}

Method ParseMethod(std::string_view name) {
  for (auto m : {Method::kFedRl, Method::kDqnAlpha, Method::kDqnFull,
                 Method::kFcnAlpha, Method::kFcnFull}) {
    if (name == MethodName(m)) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

bool IsBaseline(Method m) { return m != Method::kFedRl; }

baselines::BaselineKind BaselineKindOf(Method m) {
  if (!IsBaseline(m)) throw ConfigError("fedrl is not a baseline");
  return baselines::ParseKind(MethodName(m));
}

const char* EvalModeName(EvalMode m) {
  return m == EvalMode::kNoiseOn ? "noise-on" : "noise-off";
}

EvalMode ParseEvalMode(std::string_view name) {
  if (name == "noise-on") return EvalMode::kNoiseOn;
  if (name == "noise-off") return EvalMode::kNoiseOff;
  throw ConfigError("unknown eval mode '" + std::string(name) +
                    "' (expected noise-on or noise-off)");
}

void Validate(const ExperimentConfig& c) {
  if (c.n < 2) throw ConfigError("grid size must be >= 2");
  if (c.episodes < 1) throw ConfigError("episodes must be >= 1");
  if (c.max_steps < 0) throw ConfigError("max_steps must be >= 0");
  if (c.seeds.empty()) throw ConfigError("at least one seed is required");
  if (c.dataset.path.empty()) {
    if (c.dataset.count < 10) throw ConfigError("dataset needs at least 10 maps");
    if (!(c.dataset.density >= 0.0 && c.dataset.density < 1.0)) {
      throw ConfigError("obstacle density must be in [0, 1)");
    }
  }
  // The learner configs carry the remaining range checks.
  if (IsBaseline(c.method)) {
    baselines::Validate(ToBaselineConfig(c, c.seeds.front()));
  } else {
    fed::Validate(ToFedConfig(c, c.seeds.front()));
  }
}

std::string ConfigToJson(const ExperimentConfig& c) {
  json j;
  j["method"] = MethodName(c.method);
  j["n"] = c.n;
  j["history"] = c.history;
  j["sigma"] = c.sigma;
  j["gamma"] = c.gamma;
  j["epsilon"] = {{"start", c.epsilon_start},
                  {"end", c.epsilon_end},
                  {"decay_fraction", c.epsilon_decay_fraction}};
  j["lr"] = c.lr;
  j["episodes"] = c.episodes;
  j["max_steps"] = c.max_steps;
  j["seeds"] = c.seeds;
  j["transport"] = fed::TransportName(c.transport);
  j["eval_mode"] = EvalModeName(c.eval_mode);
  j["dataset"] = {{"path", c.dataset.path},
                  {"count", c.dataset.count},
                  {"density", c.dataset.density},
                  {"seed", c.dataset.seed}};
  j["replay_capacity"] = c.replay_capacity;
  j["conv_channels"] = c.conv_channels;
  j["hidden"] = c.hidden;
  j["head_hidden"] = c.head_hidden;
  j["beta_behavior"] = baselines::BehaviorName(c.beta_behavior);
  j["fcn"] = {{"epochs", c.fcn_epochs}, {"batch_size", c.fcn_batch_size}};
  return j.dump(2);
}

ExperimentConfig ConfigFromJson(std::string_view text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(text);
    CheckKeys(j, "config",
              {"method", "n", "history", "sigma", "gamma", "epsilon", "lr",
               "episodes", "max_steps", "seeds", "transport", "eval_mode",
               "dataset", "replay_capacity", "conv_channels", "hidden",
               "head_hidden", "beta_behavior", "fcn"});
    if (j.contains("method")) c.method = ParseMethod(j.at("method").get<std::string>());
    Read(j, "n", c.n);
    Read(j, "history", c.history);
    Read(j, "sigma", c.sigma);
    Read(j, "gamma", c.gamma);
    if (j.contains("epsilon")) {
      const json& e = j.at("epsilon");
      CheckKeys(e, "epsilon", {"start", "end", "decay_fraction"});
      Read(e, "start", c.epsilon_start);
      Read(e, "end", c.epsilon_end);
      Read(e, "decay_fraction", c.epsilon_decay_fraction);
    }
    Read(j, "lr", c.lr);
    Read(j, "episodes", c.episodes);
    Read(j, "max_steps", c.max_steps);
    Read(j, "seeds", c.seeds);
    if (j.contains("transport")) {
      c.transport = fed::ParseTransport(j.at("transport").get<std::string>());
    }
    if (j.contains("eval_mode")) {
      c.eval_mode = ParseEvalMode(j.at("eval_mode").get<std::string>());
    }
    if (j.contains("dataset")) {
      const json& d = j.at("dataset");
      CheckKeys(d, "dataset", {"path", "count", "density", "seed"});
      Read(d, "path", c.dataset.path);
      Read(d, "count", c.dataset.count);
      Read(d, "density", c.dataset.density);
      Read(d, "seed", c.dataset.seed);
    }
    Read(j, "replay_capacity", c.replay_capacity);
    Read(j, "conv_channels", c.conv_channels);
    Read(j, "hidden", c.hidden);
    Read(j, "head_hidden", c.head_hidden);
    if (j.contains("beta_behavior")) {
      c.beta_behavior =
          baselines::ParseBehavior(j.at("beta_behavior").get<std::string>());
    }
    if (j.contains("fcn")) {
      const json& f = j.at("fcn");
      CheckKeys(f, "fcn", {"epochs", "batch_size"});
      Read(f, "epochs", c.fcn_epochs);
      Read(f, "batch_size", c.fcn_batch_size);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
  Validate(c);
  return c;
}

void ApplyEnvOverrides(ExperimentConfig& c) {
  const char* v = std::getenv("FEDQ_SEED");
  if (v == nullptr || *v == '\0') return;
  char* end = nullptr;
  const unsigned long long seed = std::strtoull(v, &end, 10);
  if (*end != '\0' || *v == '-') {
    throw ConfigError("FEDQ_SEED must be a non-negative integer");
  }
  c.seeds = {seed};
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig c = ConfigFromJson(ss.str());
  ApplyEnvOverrides(c);
  return c;
}

void SetRepeats(ExperimentConfig& c, int repeats) {
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (c.seeds.empty()) throw ConfigError("no seed to start the repeats from");
  const std::uint64_t first = c.seeds.front();
  c.seeds.clear();
  for (int i = 0; i < repeats; ++i) c.seeds.push_back(first + static_cast<std::uint64_t>(i));
}

void SaveConfig(const std::filesystem::path& path, const ExperimentConfig& c) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << ConfigToJson(c) << "\n";
}

std::uint64_t Fingerprint(const ExperimentConfig& c) {
  return Fnv1a64(ConfigToJson(c));
}

std::string FingerprintHex(std::uint64_t f) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f));
  return buf;
}

std::optional<int> DefaultEpisodeCap(int n) {
  switch (n) {
    case 8: return 38;
    case 16: return 86;
    case 32: return 178;
    default: return std::nullopt;
  }
}

fed::FedConfig ToFedConfig(const ExperimentConfig& c, std::uint64_t seed) {
  fed::FedConfig f;
  f.history = c.history;
  f.sigma = c.sigma;
  f.gamma = c.gamma;
  f.epsilon = {c.epsilon_start, c.epsilon_end, c.epsilon_decay_fraction,
               c.episodes};
  f.adam.lr = c.lr;
  f.replay_capacity = c.replay_capacity;
  f.conv_channels = c.conv_channels;
  f.hidden = c.hidden;
  f.head_hidden = c.head_hidden;
  f.seed = seed;
  return f;
}

baselines::BaselineConfig ToBaselineConfig(const ExperimentConfig& c,
                                           std::uint64_t seed) {
  baselines::BaselineConfig b;
  b.history = c.history;
  b.gamma = c.gamma;
  b.epsilon = {c.epsilon_start, c.epsilon_end, c.epsilon_decay_fraction,
               c.episodes};
  b.adam.lr = c.lr;
  b.replay_capacity = c.replay_capacity;
  b.conv_channels = c.conv_channels;
  b.hidden = c.hidden;
  b.beta_behavior = c.beta_behavior;
  b.fcn_epochs = c.fcn_epochs;
  b.fcn_batch_size = c.fcn_batch_size;
  b.seed = seed;
  return b;
}

}  // namespace fedq::harness

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


#include "fedq/harness/metrics.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fedq/common/error.h"
#include "fedq/harness/config.h"
#include "json.hpp"

namespace fedq::harness {
namespace {

void CheckNonEmpty(std::span<const grid::EpisodeResult> results) {
  if (results.empty()) throw ConfigError("metrics need at least one episode");
}

std::string Format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

std::size_t CountMet(std::span<const grid::EpisodeResult> results) {
  std::size_t met = 0;
  for (const auto& r : results) met += r.outcome == grid::Outcome::kMet;
  return met;
}

double ComputeSuccRate(std::span<const grid::EpisodeResult> results) {
  CheckNonEmpty(results);
  return static_cast<double>(CountMet(results)) /
         static_cast<double>(results.size());
}

double ComputeAvgRwd(std::span<const grid::EpisodeResult> results) {
  CheckNonEmpty(results);
  double total = 0.0;
  for (const auto& r : results) total += r.cum_reward;
  return total / static_cast<double>(results.size());
}

SeedReport MakeSeedReport(std::uint64_t seed,
                          std::span<const grid::EpisodeResult> results) {
  SeedReport s;
  s.seed = seed;
  s.episodes = results.size();
  s.met = CountMet(results);
  s.succ_rate = ComputeSuccRate(results);
  s.avg_rwd = ComputeAvgRwd(results);
  return s;
}

void Aggregate(MetricsReport& r) {
  if (r.per_seed.empty()) throw ConfigError("report has no seeds");
  r.episodes = 0;
  r.met = 0;
  double reward = 0.0;
  for (const auto& s : r.per_seed) {
    r.episodes += s.episodes;
    r.met += s.met;
    reward += s.avg_rwd * static_cast<double>(s.episodes);
  }
  r.succ_rate = static_cast<double>(r.met) / static_cast<double>(r.episodes);
  r.avg_rwd = reward / static_cast<double>(r.episodes);
}

std::string MetricsCsv(std::span<const grid::EpisodeResult> results) {
  std::string out = "map_id,outcome,steps,cum_reward\n";
  for (const auto& r : results) {
    out += std::to_string(r.map_id) + "," + grid::OutcomeName(r.outcome) + "," +
           std::to_string(r.steps) + "," + Format("%.6f", r.cum_reward) + "\n";
  }
  return out;
}

void WriteMetricsCsv(const std::filesystem::path& path,
                     std::span<const grid::EpisodeResult> results) {
  OpenForWrite(path) << MetricsCsv(results);
}

std::vector<grid::EpisodeResult> ReadMetricsCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "map_id,outcome,steps,cum_reward") {
    throw FormatError("unexpected metrics header in " + path.string());
  }
  std::vector<grid::EpisodeResult> out;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string id, outcome, steps, reward;
    if (!std::getline(ss, id, ',') || !std::getline(ss, outcome, ',') ||
        !std::getline(ss, steps, ',') || !std::getline(ss, reward)) {
      throw FormatError("malformed metrics row: " + line);
    }
    grid::EpisodeResult r;
    try {
      r.map_id = std::stoull(id);
      r.steps = std::stoi(steps);
      r.cum_reward = std::stod(reward);
    } catch (const std::exception&) {
      throw FormatError("malformed metrics row: " + line);
    }
    if (outcome == "met") {
      r.outcome = grid::Outcome::kMet;
    } else if (outcome == "timeout") {
      r.outcome = grid::Outcome::kTimeout;
    } else {
      throw FormatError("unknown outcome '" + outcome + "'");
    }
    out.push_back(r);
  }
  return out;
}

void WriteTrainLog(const std::filesystem::path& path,
                   std::span<const fed::EpisodeLog> logs) {
  auto out = OpenForWrite(path);
  out << "episode,map_id,outcome,steps,cum_reward,mean_loss,epsilon\n";
  for (const auto& l : logs) {
    out << l.episode << ',' << l.map_id << ',' << grid::OutcomeName(l.outcome)
        << ',' << l.steps << ',' << Format("%.6f", l.cum_reward) << ','
        << Format("%.6g", l.mean_loss) << ',' << Format("%.4f", l.epsilon)
        << '\n';
  }
}

std::string SummaryJson(const MetricsReport& r) {
  nlohmann::json j;
  j["method"] = r.method;
  j["eval_mode"] = r.eval_mode;
  j["config_fingerprint"] = FingerprintHex(r.fingerprint);
  j["config"] = r.config_json.empty() ? nlohmann::json()
                                      : nlohmann::json::parse(r.config_json);
  j["max_steps"] = r.max_steps;
  j["episodes"] = r.episodes;
  j["met"] = r.met;
  j["succ_rate"] = r.succ_rate;
  j["avg_rwd"] = r.avg_rwd;
  auto& seeds = j["per_seed"] = nlohmann::json::array();
  for (const auto& s : r.per_seed) {
    seeds.push_back({{"seed", s.seed},
                     {"episodes", s.episodes},
                     {"met", s.met},
                     {"succ_rate", s.succ_rate},
                     {"avg_rwd", s.avg_rwd}});
  }
  return j.dump(2);
}

void WriteSummary(const std::filesystem::path& path, const MetricsReport& r) {
  OpenForWrite(path) << SummaryJson(r) << "\n";
}

}  // namespace fedq::harness

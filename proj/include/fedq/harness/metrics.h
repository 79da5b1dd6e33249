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


#ifndef FEDQ_HARNESS_METRICS_H_
#define FEDQ_HARNESS_METRICS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fedq/fed/session.h"
#include "fedq/grid/episode_result.h"

namespace fedq::harness {

// Both throw ConfigError on an empty result list.
double ComputeSuccRate(std::span<const grid::EpisodeResult> results);
double ComputeAvgRwd(std::span<const grid::EpisodeResult> results);
std::size_t CountMet(std::span<const grid::EpisodeResult> results);

struct SeedReport {
  std::uint64_t seed = 0;
  std::size_t episodes = 0;
  std::size_t met = 0;
  double succ_rate = 0.0;
  double avg_rwd = 0.0;
};

SeedReport MakeSeedReport(std::uint64_t seed,
                          std::span<const grid::EpisodeResult> results);

struct MetricsReport {
  std::string method;
  std::string eval_mode;
  std::uint64_t fingerprint = 0;
  std::string config_json;
  int max_steps = 0;
  // Pooled over all seeds, so succ_rate * episodes == met exactly.
  std::size_t episodes = 0;
  std::size_t met = 0;
  double succ_rate = 0.0;
  double avg_rwd = 0.0;
  std::vector<SeedReport> per_seed;
};

// Fills the pooled fields from per_seed.
void Aggregate(MetricsReport& r);

// map_id,outcome,steps,cum_reward with the reward printed as %.6f.
std::string MetricsCsv(std::span<const grid::EpisodeResult> results);
void WriteMetricsCsv(const std::filesystem::path& path,
                     std::span<const grid::EpisodeResult> results);
// Throws FormatError on a malformed file.
std::vector<grid::EpisodeResult> ReadMetricsCsv(const std::filesystem::path& path);

// episode,map_id,outcome,steps,cum_reward,mean_loss,epsilon
void WriteTrainLog(const std::filesystem::path& path,
                   std::span<const fed::EpisodeLog> logs);

std::string SummaryJson(const MetricsReport& r);
void WriteSummary(const std::filesystem::path& path, const MetricsReport& r);

}  // namespace fedq::harness

#endif  // FEDQ_HARNESS_METRICS_H_

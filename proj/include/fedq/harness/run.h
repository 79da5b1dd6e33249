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


#ifndef FEDQ_HARNESS_RUN_H_
#define FEDQ_HARNESS_RUN_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fedq/fed/link.h"
#include "fedq/grid/dataset.h"
#include "fedq/harness/config.h"
#include "fedq/harness/metrics.h"

namespace fedq::harness {

inline constexpr char kConfigFile[] = "config.json";
inline constexpr char kMetricsFile[] = "metrics.csv";
inline constexpr char kSummaryFile[] = "summary.json";
inline constexpr char kTrainLogFile[] = "train_log.csv";
inline constexpr char kFcnLossFile[] = "fcn_loss.csv";
inline constexpr char kBaselineParamsFile[] = "theta_baseline.fedq";
inline constexpr char kSweepFile[] = "sweep.csv";

struct RunHooks {
  // Sees every frame of every federated run, in both directions.
  fed::FrameSink sink;
  std::function<void(const std::string&)> progress;
};

// Reads c.dataset.path when set, otherwise generates the dataset.
grid::Dataset LoadOrMakeDataset(const ExperimentConfig& c);

// c.max_steps if positive, else DefaultEpisodeCap(c.n), else twice the longest
// optimal path in the dataset.
int ResolveMaxSteps(const ExperimentConfig& c, const grid::Dataset& d);

std::filesystem::path SeedDir(const std::filesystem::path& out_dir,
                              std::uint64_t seed);

// For each seed: train on the train split, evaluate one greedy episode per
// test map, and write into out_dir/seed_<seed>/:
//   config.json    the config reduced to this seed, with T_m resolved
//   metrics.csv    one row per test episode
//   train_log.csv  per training episode (fcn_loss.csv for supervised kinds)
//   checkpoints    theta_alpha/theta_beta/theta_g or theta_baseline
// then out_dir/config.json and out_dir/summary.json for the whole run. A
// federated seed whose directory holds a resume file continues from it.
MetricsReport Run(const ExperimentConfig& c, const std::filesystem::path& out_dir,
                  const RunHooks& hooks = {});

// Evaluates a seed directory written by Run, without training.
std::vector<grid::EpisodeResult> EvaluateCheckpoint(
    const std::filesystem::path& seed_dir, fed::MapList maps, EvalMode mode);

struct SweepReport {
  std::vector<int> values;
  std::vector<MetricsReport> reports;
  // Whether succ_rate never drops as H grows. Reported, not enforced.
  bool non_decreasing = true;
};

// Runs once per history length into out_dir/H_<value>/ and writes
// out_dir/sweep.csv (history,succ_rate,avg_rwd,met,episodes,fingerprint).
SweepReport SweepHistory(const ExperimentConfig& c, std::span<const int> values,
                         const std::filesystem::path& out_dir,
                         const RunHooks& hooks = {});

}  // namespace fedq::harness

#endif  // FEDQ_HARNESS_RUN_H_

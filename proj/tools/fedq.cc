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


// Command-line front end: dataset generation, training runs, checkpoint
// evaluation, history sweeps and baselines.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedq/common/error.h"
#include "fedq/grid/dataset.h"
#include "fedq/harness/config.h"
#include "fedq/harness/metrics.h"
#include "fedq/harness/run.h"

namespace {

using namespace fedq;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTransport = 3;

harness::ExperimentConfig Load(const std::string& path, int repeats) {
  harness::ExperimentConfig c = harness::LoadConfig(path);
  if (repeats > 0) harness::SetRepeats(c, repeats);
  return c;
}

harness::RunHooks StderrProgress() {
  harness::RunHooks hooks;
  hooks.progress = [](const std::string& line) {
    std::fprintf(stderr, "%s\n", line.c_str());
  };
  return hooks;
}

void PrintReport(const harness::MetricsReport& r) {
  std::printf("%s (%s): succ_rate %.4f avg_rwd %.3f over %zu episodes, T_m %d\n",
              r.method.c_str(), r.eval_mode.c_str(), r.succ_rate, r.avg_rwd,
              r.episodes, r.max_steps);
}

std::vector<const grid::DatasetEntry*> SelectSplit(const grid::Dataset& d,
                                                   const std::string& split) {
  if (split == "all") {
    std::vector<const grid::DatasetEntry*> all;
    for (const auto& e : d.entries) all.push_back(&e);
    return all;
  }
  if (split == "train") return d.Select(grid::Split::kTrain);
  if (split == "val") return d.Select(grid::Split::kVal);
  if (split == "test") return d.Select(grid::Split::kTest);
  throw ConfigError("unknown split '" + split + "'");
}

std::vector<int> ParseValues(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad history value '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-party federated deep Q-learning on grid worlds"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-maps", "Generate a map dataset");
  int gen_n = 8;
  std::size_t gen_count = 500;
  double gen_density = 0.3;
  std::uint64_t gen_seed = 42;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Grid size")->capture_default_str();
  gen->add_option("--count", gen_count, "Number of maps")->capture_default_str();
  gen->add_option("--density", gen_density, "Obstacle density")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Dataset seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output JSON-lines file")->required();

  auto* train = app.add_subcommand("train", "Train and evaluate per the config");
  std::string train_config, train_out;
  train->add_option("--config", train_config, "Experiment config JSON")
      ->required()->check(CLI::ExistingFile);
  train->add_option("--out-dir", train_out, "Output directory")->required();
  int train_repeats = 0;
  train->add_option("--repeats", train_repeats, "Consecutive seeds to run");

  auto* eval = app.add_subcommand("eval", "Evaluate a trained seed directory");
  std::string eval_ckpt, eval_maps, eval_mode = "noise-off", eval_split = "test",
              eval_out;
  eval->add_option("--checkpoint", eval_ckpt, "Seed directory written by train")
      ->required()->check(CLI::ExistingDirectory);
  eval->add_option("--maps", eval_maps, "Dataset JSON-lines file")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--mode", eval_mode, "noise-on or noise-off")->capture_default_str();
  eval->add_option("--split", eval_split, "train, val, test or all")->capture_default_str();
  eval->add_option("--out", eval_out, "Write per-episode metrics CSV here");

  auto* sweep = app.add_subcommand("sweep-history", "Run once per history length");
  std::string sweep_config, sweep_values = "2,4,8,16,32", sweep_out;
  sweep->add_option("--config", sweep_config, "Experiment config JSON")
      ->required()->check(CLI::ExistingFile);
  sweep->add_option("--values", sweep_values, "Comma-separated H values")
      ->capture_default_str();
  sweep->add_option("--out-dir", sweep_out, "Output directory")->required();
  int sweep_repeats = 0;
  sweep->add_option("--repeats", sweep_repeats, "Consecutive seeds to run");

  auto* base = app.add_subcommand("baseline", "Train and evaluate a baseline");
  std::string base_kind, base_config, base_out;
  base->add_option("--kind", base_kind, "dqn_alpha, dqn_full, fcn_alpha or fcn_full")
      ->required();
  base->add_option("--config", base_config, "Experiment config JSON")
      ->required()->check(CLI::ExistingFile);
  base->add_option("--out-dir", base_out, "Output directory")->required();
  int base_repeats = 0;
  base->add_option("--repeats", base_repeats, "Consecutive seeds to run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const grid::Dataset d = grid::MakeDataset(gen_n, gen_count, gen_density, gen_seed);
      grid::WriteDataset(gen_out, d);
      std::printf("wrote %zu maps to %s (T_m by dataset rule: %d)\n",
                  d.entries.size(), gen_out.c_str(), d.EpisodeCap());
    } else if (train->parsed()) {
      PrintReport(harness::Run(Load(train_config, train_repeats), train_out,
                               StderrProgress()));
    } else if (eval->parsed()) {
      const grid::Dataset d = grid::ReadDataset(eval_maps);
      const auto maps = SelectSplit(d, eval_split);
      if (maps.empty()) throw ConfigError("no maps in split '" + eval_split + "'");
      const auto results = harness::EvaluateCheckpoint(
          eval_ckpt, maps, harness::ParseEvalMode(eval_mode));
      if (!eval_out.empty()) harness::WriteMetricsCsv(eval_out, results);
      std::printf("succ_rate %.4f avg_rwd %.3f over %zu episodes\n",
                  harness::ComputeSuccRate(results),
                  harness::ComputeAvgRwd(results), results.size());
    } else if (sweep->parsed()) {
      const auto values = ParseValues(sweep_values);
      const auto s = harness::SweepHistory(Load(sweep_config, sweep_repeats),
                                           values, sweep_out, StderrProgress());
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        std::printf("H=%d: ", s.values[i]);
        PrintReport(s.reports[i]);
      }
      std::printf("succ_rate non-decreasing in H: %s\n",
                  s.non_decreasing ? "yes" : "no");
    } else if (base->parsed()) {
      harness::ExperimentConfig c = Load(base_config, base_repeats);
      c.method = harness::ParseMethod(base_kind);
      if (!harness::IsBaseline(c.method)) {
        throw ConfigError("--kind must name a baseline");
      }
      PrintReport(harness::Run(c, base_out, StderrProgress()));
    }
  } catch (const TransportError& e) {
    std::fprintf(stderr, "transport failure: %s\n"
                         "a resumable checkpoint was written; rerun to continue\n",
                 e.what());
    return kExitTransport;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
  return 0;
}

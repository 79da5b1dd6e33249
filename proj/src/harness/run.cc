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


#include "fedq/harness/run.h"

#include <cstdio>
#include <fstream>

#include "fedq/baselines/dqn.h"
#include "fedq/baselines/evaluate.h"
#include "fedq/baselines/fcn.h"
#include "fedq/common/error.h"
#include "fedq/fed/session.h"
#include "fedq/nn/serialize.h"

namespace fedq::harness {
namespace {

void Note(const RunHooks& hooks, const std::string& line) {
  if (hooks.progress) hooks.progress(line);
}

std::vector<grid::EpisodeResult> RunFedSeed(const ExperimentConfig& c,
                                            std::uint64_t seed,
                                            const grid::Dataset& data,
                                            int max_steps,
                                            const std::filesystem::path& dir,
                                            const RunHooks& hooks) {
  const auto train = data.Select(grid::Split::kTrain);
  const auto test = data.Select(grid::Split::kTest);
  fed::SessionOptions so;
  so.transport = c.transport;
  so.sink = hooks.sink;
  so.beta_checkpoint_dir = dir;
  fed::TrainOptions to;
  to.episodes = c.episodes;
  to.max_steps = max_steps;
  to.checkpoint_dir = dir;
  if (const auto next = fed::ReadResumeFile(dir)) {
    so.load_dir = dir;
    to.start_episode = *next;
    Note(hooks, "resuming seed " + std::to_string(seed) + " at episode " +
                    std::to_string(*next));
  }

  fed::FederatedSession session(ToFedConfig(c, seed), std::move(so));
  const auto logs = session.Train(train, to);
  const auto results =
      session.Evaluate(test, max_steps, c.eval_mode == EvalMode::kNoiseOn);
  session.Close();
  session.alpha().SaveCheckpoint(dir);
  session.beta().SaveCheckpoint(dir);
  std::filesystem::remove(dir / fed::kResumeFile);
  WriteTrainLog(dir / kTrainLogFile, logs);
  return results;
}

std::vector<grid::EpisodeResult> RunBaselineSeed(const ExperimentConfig& c,
                                                 std::uint64_t seed,
                                                 const grid::Dataset& data,
                                                 int max_steps,
                                                 const std::filesystem::path& dir) {
  const auto kind = BaselineKindOf(c.method);
  const auto bc = ToBaselineConfig(c, seed);
  const auto train = data.Select(grid::Split::kTrain);
  const auto test = data.Select(grid::Split::kTest);
  nn::Model model;
  if (baselines::IsSupervised(kind)) {
    const auto examples = baselines::BuildFcnExamples(kind, c.history, train);
    auto r = baselines::TrainFcn(kind, bc, examples);
    std::ofstream out(dir / kFcnLossFile);
    out << "epoch,loss\n0," << r.initial_loss << "\n";
    for (std::size_t e = 0; e < r.epoch_loss.size(); ++e) {
      out << e + 1 << ',' << r.epoch_loss[e] << '\n';
    }
    model = std::move(r.model);
  } else {
    auto r = baselines::TrainDqn(kind, bc, train, c.episodes, max_steps);
    WriteTrainLog(dir / kTrainLogFile, r.logs);
    model = std::move(r.model);
  }
  nn::SaveParams(dir / kBaselineParamsFile, model.spec, model.params);
  return baselines::EvaluateBaseline(kind, bc, model.params, test, max_steps);
}

}  // namespace

grid::Dataset LoadOrMakeDataset(const ExperimentConfig& c) {
  if (!c.dataset.path.empty()) {
    grid::Dataset d = grid::ReadDataset(c.dataset.path);
    for (const auto& e : d.entries) {
      if (e.map.n() != c.n) {
        throw ConfigError("dataset map size " + std::to_string(e.map.n()) +
                          " does not match n = " + std::to_string(c.n));
      }
    }
    return d;
  }
  return grid::MakeDataset(c.n, c.dataset.count, c.dataset.density,
                           c.dataset.seed);
}

int ResolveMaxSteps(const ExperimentConfig& c, const grid::Dataset& d) {
  if (c.max_steps > 0) return c.max_steps;
  if (const auto cap = DefaultEpisodeCap(c.n)) return *cap;
  return d.EpisodeCap();
}

std::filesystem::path SeedDir(const std::filesystem::path& out_dir,
                              std::uint64_t seed) {
  return out_dir / ("seed_" + std::to_string(seed));
}

MetricsReport Run(const ExperimentConfig& c, const std::filesystem::path& out_dir,
                  const RunHooks& hooks) {
  Validate(c);
  const grid::Dataset data = LoadOrMakeDataset(c);
  if (data.Select(grid::Split::kTrain).empty() ||
      data.Select(grid::Split::kTest).empty()) {
    throw ConfigError("dataset needs non-empty train and test splits");
  }
  const int max_steps = ResolveMaxSteps(c, data);

  MetricsReport report;
  report.method = MethodName(c.method);
  report.eval_mode = EvalModeName(c.eval_mode);
  report.fingerprint = Fingerprint(c);
  report.config_json = ConfigToJson(c);
  report.max_steps = max_steps;

  std::filesystem::create_directories(out_dir);
  SaveConfig(out_dir / kConfigFile, c);
  for (const std::uint64_t seed : c.seeds) {
    const auto dir = SeedDir(out_dir, seed);
    std::filesystem::create_directories(dir);
    ExperimentConfig single = c;
    single.seeds = {seed};
    single.max_steps = max_steps;
    SaveConfig(dir / kConfigFile, single);

    Note(hooks, std::string(MethodName(c.method)) + " seed " +
                    std::to_string(seed) + ": training");
    const auto results =
        IsBaseline(c.method)
            ? RunBaselineSeed(c, seed, data, max_steps, dir)
            : RunFedSeed(c, seed, data, max_steps, dir, hooks);
    WriteMetricsCsv(dir / kMetricsFile, results);
    report.per_seed.push_back(MakeSeedReport(seed, results));
    const auto& s = report.per_seed.back();
    char line[160];
    std::snprintf(line, sizeof line, "%s seed %llu: succ_rate %.4f avg_rwd %.3f",
                  MethodName(c.method), static_cast<unsigned long long>(seed),
                  s.succ_rate, s.avg_rwd);
    Note(hooks, line);
  }
  Aggregate(report);
  WriteSummary(out_dir / kSummaryFile, report);
  return report;
}

std::vector<grid::EpisodeResult> EvaluateCheckpoint(
    const std::filesystem::path& seed_dir, fed::MapList maps, EvalMode mode) {
  ExperimentConfig c = LoadConfig(seed_dir / kConfigFile);
  if (c.seeds.size() != 1 || c.max_steps < 1) {
    throw ConfigError(seed_dir.string() + " is not a seed directory of a run");
  }
  const std::uint64_t seed = c.seeds.front();
  if (IsBaseline(c.method)) {
    const auto kind = BaselineKindOf(c.method);
    const auto bc = ToBaselineConfig(c, seed);
    const auto params = nn::LoadParams(seed_dir / kBaselineParamsFile,
                                       baselines::BaselineNetworkSpec(kind, bc));
    return baselines::EvaluateBaseline(kind, bc, params, maps, c.max_steps);
  }
  fed::SessionOptions so;
  so.transport = c.transport;
  so.load_dir = seed_dir;
  fed::FederatedSession session(ToFedConfig(c, seed), std::move(so));
  auto results = session.Evaluate(maps, c.max_steps, mode == EvalMode::kNoiseOn);
  session.Close();
  return results;
}

SweepReport SweepHistory(const ExperimentConfig& c, std::span<const int> values,
                         const std::filesystem::path& out_dir,
                         const RunHooks& hooks) {
  if (values.empty()) throw ConfigError("history sweep needs at least one value");
  SweepReport sweep;
  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir / kSweepFile);
  if (!csv) throw ConfigError("cannot write " + (out_dir / kSweepFile).string());
  csv << "history,succ_rate,avg_rwd,met,episodes,fingerprint\n";
  for (const int h : values) {
    ExperimentConfig hc = c;
    hc.history = h;
    MetricsReport r = Run(hc, out_dir / ("H_" + std::to_string(h)), hooks);
    char line[160];
    std::snprintf(line, sizeof line, "%d,%.6f,%.6f,%zu,%zu,%s\n", h, r.succ_rate,
                  r.avg_rwd, r.met, r.episodes,
                  FingerprintHex(r.fingerprint).c_str());
    csv << line;
    if (!sweep.reports.empty() && r.succ_rate < sweep.reports.back().succ_rate) {
      sweep.non_decreasing = false;
    }
    sweep.values.push_back(h);
    sweep.reports.push_back(std::move(r));
  }
  return sweep;
}

}  // namespace fedq::harness

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

#include "fedq/grid/dataset.h"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "fedq/common/error.h"
#include "fedq/common/rng.h"
#include "json.hpp"

namespace fedq::grid {

using nlohmann::json;

const char* SplitName(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

std::vector<const DatasetEntry*> Dataset::Select(Split s) const {
  std::vector<const DatasetEntry*> out;
  for (const auto& e : entries) {
    if (e.split == s) out.push_back(&e);
  }
  return out;
}

int Dataset::EpisodeCap() const {
  int longest = 0;
  for (const auto& e : entries) longest = std::max(longest, e.path_length);
  return 2 * longest;
}

SplitSizes ComputeSplitSizes(std::size_t count) {
  SplitSizes s;
  s.train = count * 8 / 10;
  s.val = count / 10;
  s.test = count - s.train - s.val;
  return s;
}

Dataset MakeDataset(int n, std::size_t count, double density, std::uint64_t seed) {
  Dataset d;
  d.entries.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    GeneratedMap g = GenerateMap(n, density, DeriveSeed(seed, i));
    auto plan = BfsMeetDistance(g.map, g.start_alpha, g.start_beta);
    auto path = ShortestPathLength(g.map, g.start_alpha, g.start_beta);
    if (!plan || !path) throw ConfigError("generated map has unreachable starts");
    DatasetEntry& e = d.entries[i];
    e.id = i;
    e.map = std::move(g.map);
    e.start_alpha = g.start_alpha;
    e.start_beta = g.start_beta;
    e.opt_dist = plan->rounds;
    e.path_length = *path;
    e.opt_actions = std::move(plan->actions);
  }

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(DeriveSeed(seed, "dataset.split"));
  for (std::size_t i = count; i > 1; --i) {
    std::swap(order[i - 1], order[rng.UniformInt(i)]);
  }
  const SplitSizes sizes = ComputeSplitSizes(count);
  for (std::size_t k = 0; k < count; ++k) {
    Split s = k < sizes.train ? Split::kTrain
              : k < sizes.train + sizes.val ? Split::kVal
                                            : Split::kTest;
    d.entries[order[k]].split = s;
  }
  return d;
}

std::string DatasetEntryToJson(const DatasetEntry& e) {
  json actions = json::array();
  for (auto [a, b] : e.opt_actions) {
    actions.push_back({ActionIndex(a), ActionIndex(b)});
  }
  json j = {
      {"id", e.id},
      {"split", SplitName(e.split)},
      {"n", e.map.n()},
      {"cells", e.map.CellString()},
      {"start_a", {e.start_alpha.row, e.start_alpha.col}},
      {"start_b", {e.start_beta.row, e.start_beta.col}},
      {"opt_dist", e.opt_dist},
      {"path_length", e.path_length},
      {"opt_actions", std::move(actions)},
  };
  return j.dump();
}

DatasetEntry DatasetEntryFromJson(const std::string& line) {
  DatasetEntry e;
  try {
    const json j = json::parse(line);
    e.id = j.at("id").get<std::size_t>();
    const std::string split = j.value("split", "train");
    e.split = split == "test" ? Split::kTest : split == "val" ? Split::kVal : Split::kTrain;
    const int n = j.at("n").get<int>();
    e.map = MapGrid::FromCellString(n, j.at("cells").get<std::string>());
    e.start_alpha = {j.at("start_a").at(0).get<int>(), j.at("start_a").at(1).get<int>()};
    e.start_beta = {j.at("start_b").at(0).get<int>(), j.at("start_b").at(1).get<int>()};
    e.opt_dist = j.at("opt_dist").get<int>();
    e.path_length = j.value("path_length", 0);
    for (const auto& pair : j.at("opt_actions")) {
      e.opt_actions.emplace_back(ActionFromIndex(pair.at(0).get<std::size_t>()),
                                 ActionFromIndex(pair.at(1).get<std::size_t>()));
    }
  } catch (const json::exception& ex) {
    throw FormatError(std::string("bad dataset line: ") + ex.what());
  }
  if (!e.map.IsFree(e.start_alpha) || !e.map.IsFree(e.start_beta)) {
    throw FormatError("dataset entry " + std::to_string(e.id) + " has a blocked start");
  }
  return e;
}

void WriteDataset(const std::filesystem::path& path, const Dataset& d) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (const auto& e : d.entries) out << DatasetEntryToJson(e) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

Dataset ReadDataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  Dataset d;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    d.entries.push_back(DatasetEntryFromJson(line));
  }
  return d;
}

}  // namespace fedq::grid

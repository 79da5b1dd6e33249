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

#ifndef FEDQ_GRID_DATASET_H_
#define FEDQ_GRID_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fedq/grid/gridworld.h"

namespace fedq::grid {

enum class Split : std::uint8_t { kTrain, kVal, kTest };
const char* SplitName(Split s);

struct DatasetEntry {
  std::size_t id = 0;
  Split split = Split::kTrain;
  MapGrid map;
  AgentPos start_alpha;
  AgentPos start_beta;
  int opt_dist = 0;     // synchronized rounds until the agents meet
  int path_length = 0;  // single-agent shortest path between the starts
  std::vector<std::pair<Action, Action>> opt_actions;
};

struct Dataset {
  std::vector<DatasetEntry> entries;  // ordered by id

  std::vector<const DatasetEntry*> Select(Split s) const;
  // Twice the longest single-agent optimal path over all entries.
  int EpisodeCap() const;
};

// Number of maps in each split: floor(0.8 n), floor(0.1 n), and the rest.
struct SplitSizes {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};
SplitSizes ComputeSplitSizes(std::size_t count);

// Map i is generated from DeriveSeed(seed, i); ids are then shuffled with a
// seed-derived permutation and assigned to train/val/test by ComputeSplitSizes.
Dataset MakeDataset(int n, std::size_t count, double density, std::uint64_t seed);

// One JSON object per line, in id order:
//   {"id":0,"split":"train","n":8,"cells":"0110...","start_a":[r,c],
//    "start_b":[r,c],"opt_dist":3,"path_length":5,"opt_actions":[[a,b],...]}
// Actions are integer indices (0 east, 1 south, 2 west, 3 north).
std::string DatasetEntryToJson(const DatasetEntry& e);
DatasetEntry DatasetEntryFromJson(const std::string& line);
void WriteDataset(const std::filesystem::path& path, const Dataset& d);
Dataset ReadDataset(const std::filesystem::path& path);

}  // namespace fedq::grid

#endif  // FEDQ_GRID_DATASET_H_

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

#ifndef FEDQ_GRID_GRIDWORLD_H_
#define FEDQ_GRID_GRIDWORLD_H_

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fedq/nn/tensor.h"

namespace fedq::grid {

enum class Action : std::uint8_t { kEast = 0, kSouth = 1, kWest = 2, kNorth = 3 };
inline constexpr int kNumActions = 4;
inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::kEast, Action::kSouth, Action::kWest, Action::kNorth};

Action ActionFromIndex(std::size_t index);
inline std::size_t ActionIndex(Action a) { return static_cast<std::size_t>(a); }
const char* ActionName(Action a);

// Window sizes of the two agents' partial views.
inline constexpr int kAlphaWindow = 3;
inline constexpr int kBetaWindow = 5;

// Rewards.
inline constexpr float kBlockedReward = -10.0f;
inline constexpr float kMeetReward = 50.0f;
inline constexpr float kStepReward = -1.0f;

struct AgentPos {
  int row = 0;
  int col = 0;
  friend bool operator==(const AgentPos&, const AgentPos&) = default;
};

int ManhattanDistance(AgentPos a, AgentPos b);

// N x N binary grid; 1 = free, 0 = obstacle.
class MapGrid {
 public:
  MapGrid() = default;
  // All-free map.
  explicit MapGrid(int n);
  // Throws ConfigError unless cells has n*n entries of 0/1.
  MapGrid(int n, std::vector<std::uint8_t> cells);

  int n() const { return n_; }
  bool InBounds(AgentPos p) const {
    return p.row >= 0 && p.col >= 0 && p.row < n_ && p.col < n_;
  }
  // Out-of-bounds cells count as obstacles.
  bool IsFree(AgentPos p) const {
    return InBounds(p) && cells_[static_cast<std::size_t>(p.row * n_ + p.col)] != 0;
  }
  void Set(AgentPos p, bool free);
  const std::vector<std::uint8_t>& cells() const { return cells_; }
  std::size_t NumFree() const;

  // Row-major "0"/"1" string as used by the dataset file.
  std::string CellString() const;
  static MapGrid FromCellString(int n, const std::string& s);
  // '#' obstacle, '.' free, 'A'/'B' for agents when given.
  std::string Ascii(std::optional<AgentPos> a = {},
                    std::optional<AgentPos> b = {}) const;

  friend bool operator==(const MapGrid&, const MapGrid&) = default;

 private:
  int n_ = 0;
  std::vector<std::uint8_t> cells_;
};

// Position after attempting `a`; the agent stays put if the target is an
// obstacle or off the map.
struct MoveResult {
  AgentPos pos;
  bool blocked = false;
};
MoveResult TryMove(const MapGrid& map, AgentPos from, Action a);

// Meeting predicate for one synchronized round: same cell afterwards, or the
// two agents swapped cells.
bool Meets(AgentPos a_before, AgentPos b_before, AgentPos a_after,
           AgentPos b_after);

// k x k window centered on the agent, row-major, 1 = free. Cells outside the
// map read as 0. The other agent is not marked.
struct Observation {
  int k = 0;
  std::vector<std::uint8_t> cells;
  friend bool operator==(const Observation&, const Observation&) = default;
};

// Throws ConfigError if k is even or non-positive.
Observation Observe(const MapGrid& map, AgentPos pos, int k);

// The last H observations, oldest first. The first observation pushed into
// an empty history fills all H slots.
class ObsHistory {
 public:
  ObsHistory(int length, int k);

  void Push(const Observation& obs);
  void Clear() { frames_.clear(); }
  bool empty() const { return frames_.empty(); }
  int length() const { return length_; }
  int window() const { return k_; }
  const std::deque<Observation>& frames() const { return frames_; }

  // [H, k, k] float tensor of 0/1 values.
  nn::Tensor ToTensor() const;

 private:
  int length_;
  int k_;
  std::deque<Observation> frames_;
};

enum class Outcome : std::uint8_t { kRunning, kMet, kTimeout };
const char* OutcomeName(Outcome o);

struct EpisodeState {
  MapGrid map;
  AgentPos pos_alpha;
  AgentPos pos_beta;
  int t = 0;
  int max_steps = 0;  // T_m
  Outcome outcome = Outcome::kRunning;

  bool done() const { return outcome != Outcome::kRunning; }
};

// Throws ConfigError if a start is not a free cell or max_steps < 1.
EpisodeState StartEpisode(MapGrid map, AgentPos alpha, AgentPos beta,
                          int max_steps);

struct StepResult {
  float local_reward = 0.0f;   // r_l
  float global_reward = 0.0f;  // r_g
  float reward = 0.0f;         // r_l + r_g, delivered to alpha only
  bool done = false;
};

// r_g = N / manhattan distance after the move, and N when the agents share a
// cell.
float GlobalReward(int n, AgentPos a, AgentPos b);

// Advances one synchronized round. r_l is +50 on meeting, otherwise -10 if
// either move was blocked, otherwise -1. Throws ProtocolError if the episode
// is already finished.
StepResult Step(EpisodeState& state, Action a_alpha, Action a_beta);
// Same round with beta holding its cell when `a_beta` is empty.
StepResult Step(EpisodeState& state, Action a_alpha,
                std::optional<Action> a_beta);

// Single-agent shortest path length between two cells (4-connected).
std::optional<int> ShortestPathLength(const MapGrid& map, AgentPos from,
                                      AgentPos to);

struct MeetPlan {
  int rounds = 0;
  std::vector<std::pair<Action, Action>> actions;  // (alpha, beta) per round
};

// Minimum number of synchronized rounds until the agents meet, by
// breadth-first search over the joint position space using the same move and
// meeting rules as Step. Returns nullopt if they can never meet.
std::optional<MeetPlan> BfsMeetDistance(const MapGrid& map, AgentPos alpha,
                                        AgentPos beta);

struct GeneratedMap {
  MapGrid map;
  AgentPos start_alpha;
  AgentPos start_beta;
  int attempts = 0;
};

inline constexpr int kMaxGenerationAttempts = 1000;

// Random map with independent obstacle cells at the given density and two
// distinct free, mutually reachable starts. Retries with fresh draws up to
// kMaxGenerationAttempts; throws ConfigError after that or on a bad density.
GeneratedMap GenerateMap(int n, double density, std::uint64_t seed);

}  // namespace fedq::grid

#endif  // FEDQ_GRID_GRIDWORLD_H_

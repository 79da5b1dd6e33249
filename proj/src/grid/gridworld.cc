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

#include "fedq/grid/gridworld.h"

#include <algorithm>
#include <cstdlib>
#include <queue>

#include "fedq/common/error.h"
#include "fedq/common/rng.h"

namespace fedq::grid {
namespace {

constexpr int kRowDelta[kNumActions] = {0, 1, 0, -1};
constexpr int kColDelta[kNumActions] = {1, 0, -1, 0};

}  // namespace

Action ActionFromIndex(std::size_t index) {
  if (index >= kNumActions) throw ConfigError("action index out of range");
  return static_cast<Action>(index);
}

const char* ActionName(Action a) {
  switch (a) {
    case Action::kEast: return "east";
    case Action::kSouth: return "south";
    case Action::kWest: return "west";
    case Action::kNorth: return "north";
  }
  return "?";
}

int ManhattanDistance(AgentPos a, AgentPos b) {
  return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

MapGrid::MapGrid(int n)
    : n_(n), cells_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 1) {
  if (n < 1) throw ConfigError("grid size must be positive");
}

MapGrid::MapGrid(int n, std::vector<std::uint8_t> cells)
    : n_(n), cells_(std::move(cells)) {
  if (n < 1 || cells_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw ConfigError("map cell count does not match size " + std::to_string(n));
  }
  for (auto c : cells_) {
    if (c > 1) throw ConfigError("map cells must be 0 or 1");
  }
}

void MapGrid::Set(AgentPos p, bool free) {
  if (!InBounds(p)) throw ConfigError("cell out of bounds");
  cells_[static_cast<std::size_t>(p.row * n_ + p.col)] = free ? 1 : 0;
}

std::size_t MapGrid::NumFree() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1));
}

std::string MapGrid::CellString() const {
  std::string s;
  s.reserve(cells_.size());
  for (auto c : cells_) s.push_back(c ? '1' : '0');
  return s;
}

MapGrid MapGrid::FromCellString(int n, const std::string& s) {
  std::vector<std::uint8_t> cells;
  cells.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw ConfigError("map string must be 0/1");
    cells.push_back(ch == '1' ? 1 : 0);
  }
  return MapGrid(n, std::move(cells));
}

std::string MapGrid::Ascii(std::optional<AgentPos> a,
                           std::optional<AgentPos> b) const {
  std::string s;
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c < n_; ++c) {
      const AgentPos p{r, c};
      if (a && *a == p) {
        s.push_back(b && *b == p ? '*' : 'A');
      } else if (b && *b == p) {
        s.push_back('B');
      } else {
        s.push_back(IsFree(p) ? '.' : '#');
      }
    }
    s.push_back('\n');
  }
  return s;
}

MoveResult TryMove(const MapGrid& map, AgentPos from, Action a) {
  const auto i = ActionIndex(a);
  const AgentPos to{from.row + kRowDelta[i], from.col + kColDelta[i]};
  if (!map.IsFree(to)) return {from, true};
  return {to, false};
}

bool Meets(AgentPos a_before, AgentPos b_before, AgentPos a_after,
           AgentPos b_after) {
  if (a_after == b_after) return true;
  return a_after == b_before && b_after == a_before;
}

Observation Observe(const MapGrid& map, AgentPos pos, int k) {
  if (k < 1 || k % 2 == 0) throw ConfigError("observation window must be odd");
  Observation obs;
  obs.k = k;
  obs.cells.resize(static_cast<std::size_t>(k * k));
  const int half = k / 2;
  for (int dr = -half; dr <= half; ++dr) {
    for (int dc = -half; dc <= half; ++dc) {
      const AgentPos p{pos.row + dr, pos.col + dc};
      obs.cells[static_cast<std::size_t>((dr + half) * k + (dc + half))] =
          map.IsFree(p) ? 1 : 0;
    }
  }
  return obs;
}

ObsHistory::ObsHistory(int length, int k) : length_(length), k_(k) {
  if (length < 1) throw ConfigError("history length must be positive");
  if (k < 1 || k % 2 == 0) throw ConfigError("observation window must be odd");
}

void ObsHistory::Push(const Observation& obs) {
  if (obs.k != k_) throw ConfigError("observation window size mismatch");
  if (frames_.empty()) {
    frames_.assign(static_cast<std::size_t>(length_), obs);
    return;
  }
  frames_.pop_front();
  frames_.push_back(obs);
}

nn::Tensor ObsHistory::ToTensor() const {
  if (frames_.empty()) throw ConfigError("history is empty");
  const auto h = static_cast<std::size_t>(length_);
  const auto k = static_cast<std::size_t>(k_);
  nn::Tensor t({h, k, k});
  std::size_t i = 0;
  for (const auto& f : frames_) {
    for (auto c : f.cells) t.data[i++] = static_cast<float>(c);
  }
  return t;
}

const char* OutcomeName(Outcome o) {
  switch (o) {
    case Outcome::kRunning: return "running";
    case Outcome::kMet: return "met";
    case Outcome::kTimeout: return "timeout";
  }
  return "?";
}

EpisodeState StartEpisode(MapGrid map, AgentPos alpha, AgentPos beta,
                          int max_steps) {
  if (!map.IsFree(alpha) || !map.IsFree(beta)) {
    throw ConfigError("agent start positions must be free cells");
  }
  if (max_steps < 1) throw ConfigError("max_steps must be positive");
  EpisodeState s;
  s.map = std::move(map);
  s.pos_alpha = alpha;
  s.pos_beta = beta;
  s.max_steps = max_steps;
  return s;
}

float GlobalReward(int n, AgentPos a, AgentPos b) {
  const int md = ManhattanDistance(a, b);
  if (md == 0) return static_cast<float>(n);
  return static_cast<float>(n) / static_cast<float>(md);
}

StepResult Step(EpisodeState& state, Action a_alpha, Action a_beta) {
  return Step(state, a_alpha, std::optional<Action>(a_beta));
}

StepResult Step(EpisodeState& state, Action a_alpha,
                std::optional<Action> a_beta) {
  if (state.done()) throw ProtocolError("step on a finished episode");
  const MoveResult ma = TryMove(state.map, state.pos_alpha, a_alpha);
  const MoveResult mb = a_beta ? TryMove(state.map, state.pos_beta, *a_beta)
                               : MoveResult{state.pos_beta, false};
  const bool met = Meets(state.pos_alpha, state.pos_beta, ma.pos, mb.pos);
  state.pos_alpha = ma.pos;
  state.pos_beta = mb.pos;
  state.t += 1;

  StepResult r;
  if (met) {
    r.local_reward = kMeetReward;
  } else if (ma.blocked || mb.blocked) {
    r.local_reward = kBlockedReward;
  } else {
    r.local_reward = kStepReward;
  }
  r.global_reward = GlobalReward(state.map.n(), state.pos_alpha, state.pos_beta);
  r.reward = r.local_reward + r.global_reward;
  if (met) {
    state.outcome = Outcome::kMet;
  } else if (state.t >= state.max_steps) {
    state.outcome = Outcome::kTimeout;
  }
  r.done = state.done();
  return r;
}

std::optional<int> ShortestPathLength(const MapGrid& map, AgentPos from,
                                      AgentPos to) {
  if (!map.IsFree(from) || !map.IsFree(to)) return std::nullopt;
  const int n = map.n();
  std::vector<int> dist(static_cast<std::size_t>(n * n), -1);
  std::queue<AgentPos> q;
  dist[static_cast<std::size_t>(from.row * n + from.col)] = 0;
  q.push(from);
  while (!q.empty()) {
    const AgentPos p = q.front();
    q.pop();
    const int d = dist[static_cast<std::size_t>(p.row * n + p.col)];
    if (p == to) return d;
    for (Action a : kAllActions) {
      const MoveResult m = TryMove(map, p, a);
      auto& nd = dist[static_cast<std::size_t>(m.pos.row * n + m.pos.col)];
      if (!m.blocked && nd < 0) {
        nd = d + 1;
        q.push(m.pos);
      }
    }
  }
  return std::nullopt;
}

std::optional<MeetPlan> BfsMeetDistance(const MapGrid& map, AgentPos alpha,
                                        AgentPos beta) {
  if (!map.IsFree(alpha) || !map.IsFree(beta)) return std::nullopt;
  if (alpha == beta) return MeetPlan{};
  const int n = map.n();
  const std::size_t cells = static_cast<std::size_t>(n * n);
  auto cell = [n](AgentPos p) { return static_cast<std::size_t>(p.row * n + p.col); };
  auto pos = [n](std::size_t c) {
    return AgentPos{static_cast<int>(c) / n, static_cast<int>(c) % n};
  };

  struct Parent {
    std::uint32_t state = 0;
    std::uint8_t joint_action = 0;
    bool seen = false;
  };
  std::vector<Parent> parent(cells * cells);
  std::queue<std::uint32_t> q;
  const auto start = static_cast<std::uint32_t>(cell(alpha) * cells + cell(beta));
  parent[start].seen = true;
  q.push(start);

  auto reconstruct = [&](std::uint32_t state, std::uint8_t last) {
    MeetPlan plan;
    std::vector<std::uint8_t> joint = {last};
    while (state != start) {
      joint.push_back(parent[state].joint_action);
      state = parent[state].state;
    }
    std::reverse(joint.begin(), joint.end());
    for (auto j : joint) {
      plan.actions.emplace_back(ActionFromIndex(j / kNumActions),
                                ActionFromIndex(j % kNumActions));
    }
    plan.rounds = static_cast<int>(plan.actions.size());
    return plan;
  };

  while (!q.empty()) {
    const std::uint32_t s = q.front();
    q.pop();
    const AgentPos pa = pos(s / cells);
    const AgentPos pb = pos(s % cells);
    for (std::uint8_t j = 0; j < kNumActions * kNumActions; ++j) {
      const MoveResult ma = TryMove(map, pa, ActionFromIndex(j / kNumActions));
      const MoveResult mb = TryMove(map, pb, ActionFromIndex(j % kNumActions));
      if (Meets(pa, pb, ma.pos, mb.pos)) return reconstruct(s, j);
      const auto next = static_cast<std::uint32_t>(cell(ma.pos) * cells + cell(mb.pos));
      if (!parent[next].seen) {
        parent[next] = {s, j, true};
        q.push(next);
      }
    }
  }
  return std::nullopt;
}

GeneratedMap GenerateMap(int n, double density, std::uint64_t seed) {
  if (n < 2) throw ConfigError("grid size must be at least 2");
  if (!(density >= 0.0 && density < 1.0)) {
    throw ConfigError("obstacle density must be in [0, 1)");
  }
  Rng rng(seed);
  for (int attempt = 1; attempt <= kMaxGenerationAttempts; ++attempt) {
    MapGrid map(n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (rng.Bernoulli(density)) map.Set({r, c}, false);
      }
    }
    std::vector<AgentPos> free_cells;
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        if (map.IsFree({r, c})) free_cells.push_back({r, c});
      }
    }
    if (free_cells.size() < 2) continue;
    const auto ia = rng.UniformInt(free_cells.size());
    auto ib = rng.UniformInt(free_cells.size() - 1);
    if (ib >= ia) ++ib;
    const AgentPos a = free_cells[ia];
    const AgentPos b = free_cells[ib];
    if (!ShortestPathLength(map, a, b)) continue;
    return {std::move(map), a, b, attempt};
  }
  throw ConfigError("could not generate a connected map at density " +
                    std::to_string(density) + " after " +
                    std::to_string(kMaxGenerationAttempts) + " attempts");
}

}  // namespace fedq::grid

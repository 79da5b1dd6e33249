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

#ifndef FEDQ_FED_REPLAY_H_
#define FEDQ_FED_REPLAY_H_

#include <cstdint>
#include <deque>
#include <string>

#include "fedq/common/error.h"
#include "fedq/common/rng.h"
#include "fedq/grid/gridworld.h"
#include "fedq/nn/tensor.h"

namespace fedq::fed {

// Bounded FIFO memory addressed by a global, strictly increasing index. The
// index is the key both agents use to refer to the same time step.
template <class Entry>
class IndexedReplay {
 public:
  explicit IndexedReplay(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw ConfigError("replay capacity must be positive");
  }

  // Returns the index assigned to the entry. Evicts the oldest when full.
  std::uint64_t Store(Entry e) {
    if (entries_.size() == capacity_) {
      entries_.pop_front();
      ++first_;
    }
    entries_.push_back(std::move(e));
    return next_++;
  }

  bool Contains(std::uint64_t j) const { return j >= first_ && j < next_; }

  // Throws ProtocolError for an index that was never stored or was evicted.
  const Entry& Get(std::uint64_t j) const {
    if (!Contains(j)) {
      throw ProtocolError("replay index " + std::to_string(j) +
                          " is not held (have [" + std::to_string(first_) +
                          ", " + std::to_string(next_) + "))");
    }
    return entries_[static_cast<std::size_t>(j - first_)];
  }

  // Uniform over the held indices.
  std::uint64_t Sample(Rng& rng) const {
    if (entries_.empty()) throw ProtocolError("sampling from an empty replay");
    return first_ + rng.UniformInt(entries_.size());
  }

  void Clear() {
    entries_.clear();
    first_ = next_ = 0;
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t first_index() const { return first_; }
  std::uint64_t next_index() const { return next_; }

 private:
  std::size_t capacity_;
  std::deque<Entry> entries_;
  std::uint64_t first_ = 0;
  std::uint64_t next_ = 0;
};

struct AlphaTransition {
  nn::Tensor s;       // [H, 3, 3]
  grid::Action a = grid::Action::kEast;
  float r = 0.0f;     // r_l + r_g
  nn::Tensor s_next;
  bool done = false;  // successor is terminal
};

struct BetaEntry {
  nn::Tensor s;  // [H, 5, 5]
  grid::Action a = grid::Action::kEast;
};

using ReplayAlpha = IndexedReplay<AlphaTransition>;
using ReplayBeta = IndexedReplay<BetaEntry>;

}  // namespace fedq::fed

#endif  // FEDQ_FED_REPLAY_H_

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

#ifndef FEDQ_FED_SESSION_H_
#define FEDQ_FED_SESSION_H_

#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "fedq/fed/agents.h"
#include "fedq/fed/config.h"
#include "fedq/fed/link.h"
#include "fedq/fed/transport.h"
#include "fedq/fed/world.h"
#include "fedq/grid/dataset.h"
#include "fedq/grid/episode_result.h"

namespace fedq::fed {

enum class TransportKind { kInProcess, kSocket };
const char* TransportName(TransportKind k);
// Accepts "inproc" and "socket"; throws ConfigError otherwise.
TransportKind ParseTransport(std::string_view name);

struct EpisodeLog {
  int episode = 0;
  std::size_t map_id = 0;
  grid::Outcome outcome = grid::Outcome::kTimeout;
  int steps = 0;
  double cum_reward = 0.0;
  double mean_loss = 0.0;
  double epsilon = 0.0;

  friend bool operator==(const EpisodeLog&, const EpisodeLog&) = default;
};

struct StepTrace {
  int episode = 0;
  int t = 0;
  std::uint64_t stored = 0;   // index of the transition just stored
  std::uint64_t sampled = 0;  // index trained on
  float y = 0.0f;
  float loss = 0.0f;
  const AgentAlpha* alpha = nullptr;
};

inline constexpr char kResumeFile[] = "resume.json";

// The episode to continue from if `dir` holds a resume file written after a
// transport failure. Throws FormatError on a malformed file.
std::optional<int> ReadResumeFile(const std::filesystem::path& dir);

struct TrainOptions {
  int episodes = 0;
  int max_steps = 0;
  // Resuming: skip Init and continue the map sequence from this episode.
  int start_episode = 0;
  // Where alpha writes its parameters and resume.json on a transport failure.
  std::filesystem::path checkpoint_dir;
  std::function<void(const StepTrace&)> on_step;
};

using MapList = std::span<const grid::DatasetEntry* const>;

// Alpha's side of the training protocol. Each step: fetch the live C_beta
// (beta acts), choose and execute alpha's action, store the transition,
// sample an index, fetch C_beta for it, form Y, update, send Y with C_alpha
// and theta_g to beta, adopt the returned theta_g.
std::vector<EpisodeLog> TrainAlpha(AgentAlpha& alpha, BetaLink& link,
                                   World& world, MapList maps,
                                   const TrainOptions& options);

// Greedy joint execution, one episode per map in order. Both agents act from
// their federated heads and exchange C vectors every step.
std::vector<grid::EpisodeResult> EvaluateAlpha(AgentAlpha& alpha,
                                               BetaLink& link, World& world,
                                               MapList maps, int max_steps,
                                               bool noise_on);

struct SessionOptions {
  TransportKind transport = TransportKind::kInProcess;
  FrameSink sink;
  // Load theta_alpha, theta_beta and theta_g from here before starting.
  std::filesystem::path load_dir;
  // Where beta writes its parameters if the transport fails.
  std::filesystem::path beta_checkpoint_dir;
  AgentBeta::UpdateObserver beta_observer;
};

// Both agents in one process: beta serves on its own thread over the chosen
// transport, alpha drives from the calling thread.
class FederatedSession {
 public:
  explicit FederatedSession(const FedConfig& config, SessionOptions options = {});
  ~FederatedSession();
  FederatedSession(const FederatedSession&) = delete;
  FederatedSession& operator=(const FederatedSession&) = delete;

  std::vector<EpisodeLog> Train(MapList maps, TrainOptions options);
  std::vector<grid::EpisodeResult> Evaluate(MapList maps, int max_steps,
                                            bool noise_on);

  // Sends Shutdown and joins beta. Rethrows a failure from beta's thread.
  void Close();

  AgentAlpha& alpha() { return alpha_; }
  // Beta runs concurrently until Close().
  const AgentBeta& beta() const;
  std::uint64_t round_trips() const { return link_ ? link_->round_trips() : 0; }

 private:
  World world_;
  AgentAlpha alpha_;
  AgentBeta beta_;
  std::unique_ptr<TcpListener> listener_;
  std::unique_ptr<Channel> alpha_channel_;
  std::unique_ptr<Channel> beta_channel_;
  std::unique_ptr<BetaLink> link_;
  std::thread beta_thread_;
  std::exception_ptr beta_error_;
  bool closed_ = false;
};

}  // namespace fedq::fed

#endif  // FEDQ_FED_SESSION_H_

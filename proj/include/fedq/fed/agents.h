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

#ifndef FEDQ_FED_AGENTS_H_
#define FEDQ_FED_AGENTS_H_

#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedq/common/bytes.h"
#include "fedq/common/rng.h"
#include "fedq/fed/config.h"
#include "fedq/fed/federated_q.h"
#include "fedq/fed/messages.h"
#include "fedq/fed/replay.h"
#include "fedq/fed/transport.h"
#include "fedq/fed/world.h"
#include "fedq/grid/gridworld.h"
#include "fedq/nn/model.h"
#include "fedq/privacy/gaussian_mechanism.h"

namespace fedq::fed {

inline constexpr char kThetaAlphaFile[] = "theta_alpha.fedq";
inline constexpr char kThetaBetaFile[] = "theta_beta.fedq";
inline constexpr char kThetaGFile[] = "theta_g.fedq";
inline constexpr char kBetaStateFile[] = "beta_state.json";

// The reward-holding agent. It owns theta_alpha, its copy of theta_g and the
// transition memory; it never sees beta's observations or parameters.
class AgentAlpha {
 public:
  explicit AgentAlpha(const FedConfig& config);

  // Q_f^alpha(s, .) with a fresh noise draw on the local Q-vector.
  std::vector<float> QFed(const nn::Tensor& s, std::span<const float> c_beta);

  // Epsilon-greedy over QFed; QFed is only evaluated when exploiting.
  grid::Action SelectAction(const nn::Tensor& s, std::span<const float> c_beta,
                            double eps);

  // Y for a stored transition's successor.
  float ComputeTarget(float r, bool terminal, const nn::Tensor& s_next,
                      std::span<const float> c_beta);

  // One Adam step on (Y - Q_f^alpha(s^j, a^j))^2 for theta_alpha and
  // theta_g. Returns the loss before the step.
  float Update(std::uint64_t j, float y, std::span<const float> c_beta);

  // Noised local Q-vector of stored state j.
  std::vector<float> ComputeCAlpha(std::uint64_t j);

  std::uint64_t Store(AlphaTransition t) { return replay_.Store(std::move(t)); }
  std::uint64_t SampleIndex() { return replay_.Sample(rng_); }
  const ReplayAlpha& replay() const { return replay_; }
  void ResetReplay() { replay_.Clear(); }

  Bytes ThetaGBytes() const;
  void AdoptThetaG(std::span<const std::uint8_t> bytes);

  // Test-time: noise is on with the training sigma or off, drawn from a
  // stream that is independent of training.
  void BeginEval(bool noise_on);
  std::vector<float> EvalCAlpha(const nn::Tensor& s);
  grid::Action EvalAction(std::span<const float> c_alpha,
                          std::span<const float> c_beta) const;

  void SaveCheckpoint(const std::filesystem::path& dir) const;
  void LoadCheckpoint(const std::filesystem::path& dir);

  const FedConfig& config() const { return config_; }
  const nn::Model& local() const { return local_; }
  const nn::NetworkSpec& head_spec() const { return head_spec_; }
  const nn::ParamSet& head_params() const { return head_params_; }
  const nn::AdamState& head_adam() const { return head_adam_; }

 private:
  FedConfig config_;
  nn::Model local_;
  nn::NetworkSpec head_spec_;
  nn::ParamSet head_params_;
  nn::AdamState head_adam_;
  privacy::GaussianMechanism mech_;
  privacy::GaussianMechanism eval_mech_;
  Rng rng_;
  ReplayAlpha replay_;
};

// The reward-blind agent. It acts on its own window, answers alpha's
// requests and trains from the targets alpha sends.
class AgentBeta {
 public:
  // `env` may be null for agents that only answer indexed requests.
  AgentBeta(const FedConfig& config, BetaEnvironment* env);

  // Observe, pick an epsilon-greedy action from the local Q_beta, commit it,
  // store (s, a) at the next index, and return the noised Q-vector.
  std::vector<float> ComputeLive();
  // Fresh noised Q-vector of stored state j; ProtocolError for unknown j.
  std::vector<float> ComputeIndexed(std::uint64_t j);
  // Adopts theta_g, takes one Adam step on (Y - Q_f^beta(s^j, a^j))^2 for
  // theta_beta and theta_g, and returns the new theta_g.
  Bytes Update(float y, std::uint64_t j, std::span<const float> c_alpha,
               std::span<const std::uint8_t> theta_g);
  void EndEpisode();

  void BeginEval(bool noise_on, std::span<const std::uint8_t> theta_g);
  // Greedy action from Q_f^beta given alpha's vector; returns beta's own.
  std::vector<float> EvalStep(std::span<const float> c_alpha);

  // Re-initializes parameters, memory and schedule position.
  void Reset();

  // Dispatches one message. Request failures come back as ErrorReply; a
  // failure in a one-way message is reported on the next request.
  std::optional<FedMessage> Handle(const FedMessage& m);

  // Serves until Shutdown. On a transport failure the parameters are written
  // to the checkpoint directory (if set) before the error propagates.
  void Serve(Channel& channel);

  void set_checkpoint_dir(std::filesystem::path dir) { checkpoint_dir_ = std::move(dir); }
  // Called after every update with the new parameters (test hook).
  using UpdateObserver =
      std::function<void(const nn::ParamSet& theta_beta, const nn::ParamSet& theta_g)>;
  void set_update_observer(UpdateObserver f) { observer_ = std::move(f); }

  void SaveCheckpoint(const std::filesystem::path& dir) const;
  void LoadCheckpoint(const std::filesystem::path& dir);

  const nn::Model& local() const { return local_; }
  const nn::ParamSet& head_params() const { return head_params_; }
  const ReplayBeta& replay() const { return replay_; }
  int episode() const { return episode_; }
  std::optional<grid::Action> last_action() const { return last_action_; }
  std::optional<std::uint64_t> last_index() const { return last_index_; }

 private:
  nn::Tensor ObserveState();

  FedConfig config_;
  BetaEnvironment* env_;
  nn::Model local_;
  nn::NetworkSpec head_spec_;
  nn::ParamSet head_params_;
  nn::AdamState head_adam_;
  privacy::GaussianMechanism mech_;
  privacy::GaussianMechanism eval_mech_;
  Rng rng_;
  ReplayBeta replay_;
  grid::ObsHistory history_;
  int episode_ = 0;
  bool evaluating_ = false;
  std::optional<grid::Action> last_action_;
  std::optional<std::uint64_t> last_index_;
  std::optional<std::string> deferred_error_;
  std::filesystem::path checkpoint_dir_;
  UpdateObserver observer_;
};

}  // namespace fedq::fed

#endif  // FEDQ_FED_AGENTS_H_

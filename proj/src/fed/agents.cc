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

#include "fedq/fed/agents.h"

#include <fstream>

#include "fedq/common/error.h"
#include "fedq/fed/policy.h"
#include "fedq/nn/serialize.h"
#include "json.hpp"

namespace fedq::fed {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

const FedConfig& Validated(const FedConfig& c) {
  Validate(c);
  return c;
}

double EvalSigma(const FedConfig& c, bool noise_on) {
  return noise_on ? c.sigma : 0.0;
}

}  // namespace

// ---------------------------------------------------------------- alpha

AgentAlpha::AgentAlpha(const FedConfig& config)
    : config_(Validated(config)),
      local_(nn::Model::Create(AlphaNetworkSpec(config),
                               DeriveSeed(config.seed, "alpha.init"),
                               config.adam)),
      head_spec_(HeadNetworkSpec(config)),
      head_params_(nn::InitParams(head_spec_, DeriveSeed(config.seed, "head.init"))),
      head_adam_(nn::MakeAdamState(head_spec_, config.adam)),
      mech_(config.sigma, DeriveSeed(config.seed, "alpha.noise")),
      eval_mech_(0.0, DeriveSeed(config.seed, "alpha.eval_noise")),
      rng_(DeriveSeed(config.seed, "alpha.policy")),
      replay_(config.replay_capacity) {}

std::vector<float> AgentAlpha::QFed(const nn::Tensor& s,
                                    std::span<const float> c_beta) {
  const FederatedPass pass = FederatedForward(
      HeadSide::kAlpha, local_, head_spec_, head_params_, s, c_beta, mech_);
  return pass.head.output.data;
}

grid::Action AgentAlpha::SelectAction(const nn::Tensor& s,
                                      std::span<const float> c_beta,
                                      double eps) {
  return EpsilonGreedy(eps, rng_, [&] { return QFed(s, c_beta); });
}

float AgentAlpha::ComputeTarget(float r, bool terminal,
                                const nn::Tensor& s_next,
                                std::span<const float> c_beta) {
  if (terminal) return r;
  const auto q = QFed(s_next, c_beta);
  return ComputeTargetY(r, config_.gamma, false, q);
}

float AgentAlpha::Update(std::uint64_t j, float y,
                         std::span<const float> c_beta) {
  const AlphaTransition& t = replay_.Get(j);
  const FederatedPass pass = FederatedForward(
      HeadSide::kAlpha, local_, head_spec_, head_params_, t.s, c_beta, mech_);
  const FederatedLoss l = ActionValueLoss(pass, t.a, y);
  nn::AdamStep(local_.params, l.grads.local, local_.adam);
  nn::AdamStep(head_params_, l.grads.head, head_adam_);
  return l.loss;
}

std::vector<float> AgentAlpha::ComputeCAlpha(std::uint64_t j) {
  return mech_.Perturb(local_.Predict(replay_.Get(j).s).data);
}

Bytes AgentAlpha::ThetaGBytes() const {
  return nn::SerializeParams(head_spec_, head_params_);
}

void AgentAlpha::AdoptThetaG(std::span<const std::uint8_t> bytes) {
  nn::ParamSet p = nn::DeserializeParams(bytes, head_spec_);
  p.version = head_params_.version + 1;
  head_params_ = std::move(p);
}

void AgentAlpha::BeginEval(bool noise_on) {
  eval_mech_ = privacy::GaussianMechanism(
      EvalSigma(config_, noise_on), DeriveSeed(config_.seed, "alpha.eval_noise"));
}

std::vector<float> AgentAlpha::EvalCAlpha(const nn::Tensor& s) {
  return eval_mech_.Perturb(local_.Predict(s).data);
}

grid::Action AgentAlpha::EvalAction(std::span<const float> c_alpha,
                                    std::span<const float> c_beta) const {
  const nn::Tensor q = nn::Predict(
      head_spec_, head_params_, HeadInput(HeadSide::kAlpha, c_alpha, c_beta));
  return Greedy(q.data);
}

void AgentAlpha::SaveCheckpoint(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nn::SaveParams(dir / kThetaAlphaFile, local_.spec, local_.params);
  nn::SaveParams(dir / kThetaGFile, head_spec_, head_params_);
}

void AgentAlpha::LoadCheckpoint(const std::filesystem::path& dir) {
  local_.params = nn::LoadParams(dir / kThetaAlphaFile, local_.spec);
  head_params_ = nn::LoadParams(dir / kThetaGFile, head_spec_);
}

// ----------------------------------------------------------------- beta

AgentBeta::AgentBeta(const FedConfig& config, BetaEnvironment* env)
    : config_(Validated(config)),
      env_(env),
      head_spec_(HeadNetworkSpec(config)),
      mech_(config.sigma, 0),
      eval_mech_(0.0, 0),
      replay_(config.replay_capacity),
      history_(config.history, grid::kBetaWindow) {
  Reset();
}

void AgentBeta::Reset() {
  local_ = nn::Model::Create(BetaNetworkSpec(config_),
                             DeriveSeed(config_.seed, "beta.init"), config_.adam);
  // Replaced by alpha's copy on the first update; never used before that.
  head_params_ = nn::ZerosLike(head_spec_);
  head_adam_ = nn::MakeAdamState(head_spec_, config_.adam);
  mech_ = privacy::GaussianMechanism(config_.sigma,
                                     DeriveSeed(config_.seed, "beta.noise"));
  rng_ = Rng(DeriveSeed(config_.seed, "beta.policy"));
  replay_.Clear();
  history_.Clear();
  episode_ = 0;
  evaluating_ = false;
  last_action_.reset();
  last_index_.reset();
  deferred_error_.reset();
}

nn::Tensor AgentBeta::ObserveState() {
  if (env_ == nullptr) throw ProtocolError("beta has no environment");
  history_.Push(env_->ObserveBeta());
  return history_.ToTensor();
}

std::vector<float> AgentBeta::ComputeLive() {
  nn::Tensor s = ObserveState();
  const nn::Tensor q = local_.Predict(s);
  const double eps = config_.epsilon.At(episode_);
  const grid::Action a = EpsilonGreedy(eps, rng_, [&] { return q.data; });
  env_->SubmitBetaAction(a);
  last_index_ = replay_.Store(BetaEntry{std::move(s), a});
  last_action_ = a;
  return mech_.Perturb(q.data);
}

std::vector<float> AgentBeta::ComputeIndexed(std::uint64_t j) {
  return mech_.Perturb(local_.Predict(replay_.Get(j).s).data);
}

Bytes AgentBeta::Update(float y, std::uint64_t j,
                        std::span<const float> c_alpha,
                        std::span<const std::uint8_t> theta_g) {
  const BetaEntry& e = replay_.Get(j);
  nn::ParamSet adopted = nn::DeserializeParams(theta_g, head_spec_);
  adopted.version = head_params_.version + 1;
  head_params_ = std::move(adopted);
  const FederatedPass pass = FederatedForward(
      HeadSide::kBeta, local_, head_spec_, head_params_, e.s, c_alpha, mech_);
  const FederatedLoss l = ActionValueLoss(pass, e.a, y);
  nn::AdamStep(local_.params, l.grads.local, local_.adam);
  nn::AdamStep(head_params_, l.grads.head, head_adam_);
  if (observer_) observer_(local_.params, head_params_);
  return nn::SerializeParams(head_spec_, head_params_);
}

void AgentBeta::EndEpisode() {
  history_.Clear();
  if (!evaluating_) ++episode_;
}

void AgentBeta::BeginEval(bool noise_on,
                          std::span<const std::uint8_t> theta_g) {
  nn::ParamSet adopted = nn::DeserializeParams(theta_g, head_spec_);
  adopted.version = head_params_.version + 1;
  head_params_ = std::move(adopted);
  eval_mech_ = privacy::GaussianMechanism(
      EvalSigma(config_, noise_on), DeriveSeed(config_.seed, "beta.eval_noise"));
  history_.Clear();
  evaluating_ = true;
}

std::vector<float> AgentBeta::EvalStep(std::span<const float> c_alpha) {
  if (!evaluating_) throw ProtocolError("EvalStep outside evaluation");
  if (c_alpha.size() != static_cast<std::size_t>(grid::kNumActions)) {
    throw ShapeError("c_alpha must have one value per action");
  }
  const nn::Tensor s = ObserveState();
  std::vector<float> c_beta = eval_mech_.Perturb(local_.Predict(s).data);
  const nn::Tensor q = nn::Predict(
      head_spec_, head_params_, HeadInput(HeadSide::kBeta, c_beta, c_alpha));
  const grid::Action a = Greedy(q.data);
  env_->SubmitBetaAction(a);
  last_action_ = a;
  return c_beta;
}

std::optional<FedMessage> AgentBeta::Handle(const FedMessage& m) {
  const bool one_way = std::holds_alternative<fed::Init>(m) ||
                       std::holds_alternative<fed::EndEpisode>(m) ||
                       std::holds_alternative<fed::Shutdown>(m) ||
                       std::holds_alternative<fed::BeginEval>(m);
  if (!one_way && deferred_error_) {
    std::string msg = std::move(*deferred_error_);
    deferred_error_.reset();
    return fed::ErrorReply{"earlier notification failed: " + msg};
  }
  try {
    return std::visit(
        Overloaded{
            [&](const fed::Init&) -> std::optional<FedMessage> {
              Reset();
              return std::nullopt;
            },
            [&](const fed::RequestQBetaLive&) -> std::optional<FedMessage> {
              return fed::QBetaReply{ComputeLive()};
            },
            [&](const fed::RequestQBetaIndexed& x) -> std::optional<FedMessage> {
              return fed::QBetaReply{ComputeIndexed(x.j)};
            },
            [&](const fed::UpdateBeta& x) -> std::optional<FedMessage> {
              return fed::ThetaGReply{Update(x.y, x.j, x.c_alpha, x.theta_g)};
            },
            [&](const fed::EndEpisode&) -> std::optional<FedMessage> {
              EndEpisode();
              return std::nullopt;
            },
            [&](const fed::Shutdown&) -> std::optional<FedMessage> {
              return std::nullopt;
            },
            [&](const fed::BeginEval& x) -> std::optional<FedMessage> {
              BeginEval(x.noise_on, x.theta_g);
              return std::nullopt;
            },
            [&](const fed::EvalStep& x) -> std::optional<FedMessage> {
              return fed::QBetaReply{EvalStep(x.c_alpha)};
            },
            [&](const auto& x) -> std::optional<FedMessage> {
              return fed::ErrorReply{std::string("beta does not accept ") +
                                TagName(TagOf(FedMessage{x}))};
            },
        },
        m);
  } catch (const Error& e) {
    if (one_way) {
      deferred_error_ = e.what();
      return std::nullopt;
    }
    return fed::ErrorReply{e.what()};
  }
}

void AgentBeta::Serve(Channel& channel) {
  try {
    for (;;) {
      const Bytes frame = channel.Receive();
      std::optional<FedMessage> reply;
      bool stop = false;
      try {
        const FedMessage m = DecodeFrame(frame);
        stop = std::holds_alternative<Shutdown>(m);
        reply = Handle(m);
      } catch (const FormatError& e) {
        reply = ErrorReply{std::string("malformed frame: ") + e.what()};
      }
      if (reply) channel.Send(EncodeFrame(*reply));
      if (stop) return;
    }
  } catch (const TransportError&) {
    if (!checkpoint_dir_.empty()) SaveCheckpoint(checkpoint_dir_);
    throw;
  }
}

void AgentBeta::SaveCheckpoint(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nn::SaveParams(dir / kThetaBetaFile, local_.spec, local_.params);
  std::ofstream out(dir / kBetaStateFile);
  out << nlohmann::json{{"episode", episode_}}.dump() << "\n";
  if (!out) throw Error("cannot write " + (dir / kBetaStateFile).string());
}

void AgentBeta::LoadCheckpoint(const std::filesystem::path& dir) {
  local_.params = nn::LoadParams(dir / kThetaBetaFile, local_.spec);
  std::ifstream in(dir / kBetaStateFile);
  if (in) {
    try {
      episode_ = nlohmann::json::parse(in).at("episode").get<int>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("bad beta state file: ") + e.what());
    }
  }
}

}  // namespace fedq::fed

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

#include "fedq/fed/session.h"

#include <fstream>
#include <string>

#include "fedq/common/error.h"
#include "json.hpp"

namespace fedq::fed {

const char* TransportName(TransportKind k) {
  return k == TransportKind::kSocket ? "socket" : "inproc";
}

TransportKind ParseTransport(std::string_view name) {
  if (name == "inproc") return TransportKind::kInProcess;
  if (name == "socket") return TransportKind::kSocket;
  throw ConfigError("unknown transport '" + std::string(name) +
                    "' (expected inproc or socket)");
}

namespace {

void WriteResumeFile(const std::filesystem::path& dir, int next_episode) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / kResumeFile);
  out << nlohmann::json{{"next_episode", next_episode}}.dump() << "\n";
}

}  // namespace

std::optional<int> ReadResumeFile(const std::filesystem::path& dir) {
  std::ifstream in(dir / kResumeFile);
  if (!in) return std::nullopt;
  try {
    const int next = nlohmann::json::parse(in).at("next_episode").get<int>();
    if (next < 0) throw FormatError("negative episode in resume file");
    return next;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed resume file: ") + e.what());
  }
}

namespace {

void CheckMaps(MapList maps) {
  if (maps.empty()) throw ConfigError("no maps to run on");
}

}  // namespace

std::vector<EpisodeLog> TrainAlpha(AgentAlpha& alpha, BetaLink& link,
                                   World& world, MapList maps,
                                   const TrainOptions& options) {
  CheckMaps(maps);
  if (options.max_steps < 1) throw ConfigError("max_steps must be >= 1");
  const FedConfig& cfg = alpha.config();
  Rng env_rng(DeriveSeed(cfg.seed, "env"));
  for (int e = 0; e < options.start_episode; ++e) env_rng.UniformInt(maps.size());

  std::vector<EpisodeLog> logs;
  int ep = options.start_episode;
  try {
    if (options.start_episode == 0) link.Notify(Init{});
    for (; ep < options.episodes; ++ep) {
      const double eps = cfg.epsilon.At(ep);
      const grid::DatasetEntry& m = *maps[env_rng.UniformInt(maps.size())];
      world.Reset(m.map, m.start_alpha, m.start_beta, options.max_steps);
      grid::ObsHistory hist(cfg.history, grid::kAlphaWindow);
      hist.Push(world.ObserveAlpha());
      nn::Tensor s = hist.ToTensor();

      EpisodeLog log;
      log.episode = ep;
      log.map_id = m.id;
      log.epsilon = eps;
      double loss_sum = 0.0;
      for (int t = 0;; ++t) {
        const auto live = link.CallFor<QBetaReply>(RequestQBetaLive{}).c_beta;
        const grid::Action a = alpha.SelectAction(s, live, eps);
        const grid::StepResult r = world.StepAlpha(a);
        hist.Push(world.ObserveAlpha());
        nn::Tensor s_next = hist.ToTensor();
        const std::uint64_t stored =
            alpha.Store(AlphaTransition{s, a, r.reward, s_next, r.done});

        const std::uint64_t j = alpha.SampleIndex();
        const auto c_beta =
            link.CallFor<QBetaReply>(RequestQBetaIndexed{j}).c_beta;
        const AlphaTransition& tj = alpha.replay().Get(j);
        const float y = alpha.ComputeTarget(tj.r, tj.done, tj.s_next, c_beta);
        const float loss = alpha.Update(j, y, c_beta);
        const auto c_alpha = alpha.ComputeCAlpha(j);
        const auto reply = link.CallFor<ThetaGReply>(
            UpdateBeta{y, j, c_alpha, alpha.ThetaGBytes()});
        alpha.AdoptThetaG(reply.theta_g);

        log.cum_reward += r.reward;
        loss_sum += loss;
        ++log.steps;
        if (options.on_step) {
          options.on_step(StepTrace{ep, t, stored, j, y, loss, &alpha});
        }
        s = std::move(s_next);
        if (r.done) break;
      }
      link.Notify(EndEpisode{});
      log.outcome = world.state().outcome;
      log.mean_loss = loss_sum / log.steps;
      logs.push_back(log);
    }
  } catch (const TransportError&) {
    if (!options.checkpoint_dir.empty()) {
      alpha.SaveCheckpoint(options.checkpoint_dir);
      WriteResumeFile(options.checkpoint_dir, ep);
    }
    throw;
  }
  return logs;
}

std::vector<grid::EpisodeResult> EvaluateAlpha(AgentAlpha& alpha,
                                               BetaLink& link, World& world,
                                               MapList maps, int max_steps,
                                               bool noise_on) {
  CheckMaps(maps);
  if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
  link.Notify(BeginEval{noise_on, alpha.ThetaGBytes()});
  alpha.BeginEval(noise_on);
  std::vector<grid::EpisodeResult> results;
  results.reserve(maps.size());
  for (const grid::DatasetEntry* m : maps) {
    world.Reset(m->map, m->start_alpha, m->start_beta, max_steps);
    grid::ObsHistory hist(alpha.config().history, grid::kAlphaWindow);
    hist.Push(world.ObserveAlpha());
    grid::EpisodeResult res;
    res.map_id = m->id;
    for (;;) {
      const auto c_alpha = alpha.EvalCAlpha(hist.ToTensor());
      const auto c_beta = link.CallFor<QBetaReply>(EvalStep{c_alpha}).c_beta;
      const grid::StepResult r = world.StepAlpha(alpha.EvalAction(c_alpha, c_beta));
      res.cum_reward += r.reward;
      ++res.steps;
      if (r.done) break;
      hist.Push(world.ObserveAlpha());
    }
    link.Notify(EndEpisode{});
    res.outcome = world.state().outcome;
    results.push_back(res);
  }
  return results;
}

FederatedSession::FederatedSession(const FedConfig& config,
                                   SessionOptions options)
    : alpha_(config), beta_(config, &world_) {
  if (!options.load_dir.empty()) {
    alpha_.LoadCheckpoint(options.load_dir);
    beta_.LoadCheckpoint(options.load_dir);
  }
  beta_.set_checkpoint_dir(options.beta_checkpoint_dir);
  beta_.set_update_observer(std::move(options.beta_observer));

  if (options.transport == TransportKind::kInProcess) {
    auto [a, b] = MakeQueueChannelPair();
    alpha_channel_ = std::move(a);
    beta_channel_ = std::move(b);
    beta_thread_ = std::thread([this] {
      try {
        beta_.Serve(*beta_channel_);
      } catch (...) {
        beta_error_ = std::current_exception();
      }
    });
  } else {
    listener_ = std::make_unique<TcpListener>();
    beta_thread_ = std::thread([this] {
      try {
        std::unique_ptr<Channel> ch = listener_->Accept();
        beta_.Serve(*ch);
      } catch (...) {
        beta_error_ = std::current_exception();
      }
    });
    try {
      alpha_channel_ = TcpConnect("127.0.0.1", listener_->port());
    } catch (...) {
      listener_->Shutdown();
      beta_thread_.join();
      throw;
    }
  }
  link_ = std::make_unique<BetaLink>(*alpha_channel_, std::move(options.sink));
}

FederatedSession::~FederatedSession() {
  try {
    Close();
  } catch (...) {
  }
}

std::vector<EpisodeLog> FederatedSession::Train(MapList maps,
                                                TrainOptions options) {
  if (closed_) throw ProtocolError("session is closed");
  return TrainAlpha(alpha_, *link_, world_, maps, options);
}

std::vector<grid::EpisodeResult> FederatedSession::Evaluate(MapList maps,
                                                            int max_steps,
                                                            bool noise_on) {
  if (closed_) throw ProtocolError("session is closed");
  return EvaluateAlpha(alpha_, *link_, world_, maps, max_steps, noise_on);
}

void FederatedSession::Close() {
  if (closed_) return;
  closed_ = true;
  try {
    link_->Notify(Shutdown{});
  } catch (const TransportError&) {
    alpha_channel_->Close();
  }
  beta_thread_.join();
  alpha_channel_->Close();
  if (beta_error_) std::rethrow_exception(beta_error_);
}

const AgentBeta& FederatedSession::beta() const {
  if (!closed_) throw ProtocolError("beta is still serving");
  return beta_;
}

}  // namespace fedq::fed

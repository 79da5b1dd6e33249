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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>
#include <vector>

#include "fedq/common/error.h"
#include "fedq/common/hash.h"
#include "fedq/fed/agents.h"
#include "fedq/fed/audit.h"
#include "fedq/fed/federated_q.h"
#include "fedq/fed/link.h"
#include "fedq/fed/messages.h"
#include "fedq/fed/policy.h"
#include "fedq/fed/replay.h"
#include "fedq/fed/session.h"
#include "fedq/fed/transport.h"
#include "fedq/fed/world.h"
#include "fedq/grid/dataset.h"
#include "fedq/nn/serialize.h"
#include "gtest/gtest.h"
#include "support/fed_gradcheck.h"
#include "support/gradcheck.h"
#include "support/reference_fedrl.h"

namespace fedq::fed {
namespace {

FedConfig SmallConfig(std::uint64_t seed = 11) {
  FedConfig c;
  c.history = 2;
  c.sigma = 0.0;
  c.conv_channels = 4;
  c.hidden = 16;
  c.head_hidden = 8;
  c.adam.lr = 1e-2;
  c.seed = seed;
  c.epsilon.total_episodes = 10;
  return c;
}

struct Maps {
  grid::Dataset data;
  std::vector<const grid::DatasetEntry*> train;
  std::vector<const grid::DatasetEntry*> test;
};

Maps SmallMaps(std::size_t count = 20) {
  Maps m;
  m.data = grid::MakeDataset(8, count, 0.3, 5);
  m.train = m.data.Select(grid::Split::kTrain);
  m.test = m.data.Select(grid::Split::kTest);
  return m;
}

Bytes Reencode(const FedMessage& m) { return EncodeFrame(DecodeFrame(EncodeFrame(m))); }

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fedq_fed_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

// ------------------------------------------------------------- messages

TEST(MessagesTest, EveryVariantRoundTrips) {
  const Bytes blob = {1, 2, 3, 250};
  const std::vector<FedMessage> all = {
      Init{}, RequestQBetaLive{}, RequestQBetaIndexed{1ull << 40},
      QBetaReply{{1.5f, -2.0f, 0.0f, 3.25f}},
      UpdateBeta{2.8f, 77, {0.1f, 0.2f, 0.3f, 0.4f}, blob},
      ThetaGReply{blob}, EndEpisode{}, Shutdown{}, BeginEval{true, blob},
      EvalStep{{4, 3, 2, 1}}, ErrorReply{"bad index"}};
  for (const auto& m : all) {
    const Bytes frame = EncodeFrame(m);
    EXPECT_EQ(Reencode(m), frame) << TagName(TagOf(m));
    EXPECT_EQ(DecodeFrame(frame).index(), m.index());
  }
}

TEST(MessagesTest, UpdateBetaWireLayout) {
  const Bytes frame = EncodeFrame(UpdateBeta{1.0f, 3, {0, 0, 0, 0}, {9, 8}});
  // tag 1 + y 4 + j 8 + count 4 + 16 floats bytes + blob len 4 + 2
  const std::uint32_t payload = 1 + 4 + 8 + 4 + 16 + 4 + 2;
  ASSERT_EQ(frame.size(), 4 + payload);
  EXPECT_EQ(frame[0], payload);
  EXPECT_EQ(frame[1], 0);
  EXPECT_EQ(frame[4], static_cast<std::uint8_t>(MessageTag::kUpdateBeta));
  EXPECT_EQ(frame[5], 0x00);  // 1.0f = 0x3f800000, little-endian
  EXPECT_EQ(frame[8], 0x3f);
  EXPECT_EQ(frame[9], 3);  // j low byte
  EXPECT_EQ(frame[17], 4);  // vector count
  EXPECT_EQ(frame[frame.size() - 2], 9);
}

TEST(MessagesTest, RejectsMalformedFrames) {
  Bytes frame = EncodeFrame(RequestQBetaIndexed{5});
  Bytes truncated(frame.begin(), frame.end() - 1);
  EXPECT_THROW(DecodeFrame(truncated), FormatError);
  Bytes trailing = frame;
  trailing.push_back(0);
  EXPECT_THROW(DecodeFrame(trailing), FormatError);
  Bytes fixed_len = trailing;
  fixed_len[0] += 1;
  EXPECT_THROW(DecodeFrame(fixed_len), FormatError);
  Bytes bad_tag = EncodeFrame(Init{});
  bad_tag[4] = 200;
  EXPECT_THROW(DecodeFrame(bad_tag), FormatError);
  Bytes bad_flag = EncodeFrame(BeginEval{true, {}});
  bad_flag[5] = 2;
  EXPECT_THROW(DecodeFrame(bad_flag), FormatError);
}

// ------------------------------------------------------------ transport

void PingPong(Channel& a, Channel& b) {
  std::thread echo([&] { b.Send(b.Receive()); });
  const Bytes big = EncodeFrame(ThetaGReply{Bytes(1 << 20, 0x5a)});
  a.Send(big);
  EXPECT_EQ(a.Receive(), big);
  echo.join();
}

TEST(TransportTest, QueuePairIsOrderedAndClosable) {
  auto [a, b] = MakeQueueChannelPair();
  PingPong(*a, *b);
  for (std::uint64_t i = 0; i < 10; ++i) a->Send(EncodeFrame(RequestQBetaIndexed{i}));
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto m = DecodeFrame(b->Receive());
    EXPECT_EQ(std::get<RequestQBetaIndexed>(m).j, i);
  }
  std::thread closer([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    a->Close();
  });
  EXPECT_THROW(b->Receive(), TransportError);
  closer.join();
  EXPECT_THROW(a->Send(EncodeFrame(Init{})), TransportError);
}

TEST(TransportTest, TcpLoopbackCarriesFrames) {
  TcpListener listener;
  std::unique_ptr<Channel> server;
  std::thread accept([&] { server = listener.Accept(); });
  auto client = TcpConnect("127.0.0.1", listener.port());
  accept.join();
  PingPong(*client, *server);
  client.reset();
  EXPECT_THROW(server->Receive(), TransportError);
}

TEST(TransportTest, TcpRejectsOversizedPrefix) {
  TcpListener listener;
  std::unique_ptr<Channel> server;
  std::thread accept([&] { server = listener.Accept(); });
  // A raw client, since Channel::Send refuses inconsistent prefixes.
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(listener.port());
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ASSERT_EQ(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)), 0);
  accept.join();
  const std::uint8_t prefix[4] = {0xff, 0xff, 0xff, 0x7f};
  ASSERT_EQ(::send(fd, prefix, 4, 0), 4);
  EXPECT_THROW(server->Receive(), TransportError);
  ::close(fd);
}

TEST(TransportTest, SendChecksPrefixAndAddress) {
  auto [a, b] = MakeQueueChannelPair();
  Bytes f = EncodeFrame(Init{});
  f[0] = 9;
  EXPECT_THROW(a->Send(f), TransportError);
  EXPECT_THROW(TcpConnect("not-an-ip", 1), TransportError);
}

// --------------------------------------------------------------- replay

TEST(ReplayTest, IndicesIncreaseAndOldestIsEvicted) {
  IndexedReplay<int> r(3);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(r.Store(i * 10), static_cast<std::uint64_t>(i));
  EXPECT_EQ(r.size(), 3u);
  EXPECT_FALSE(r.Contains(1));
  EXPECT_THROW(r.Get(1), ProtocolError);
  EXPECT_THROW(r.Get(5), ProtocolError);
  EXPECT_EQ(r.Get(4), 40);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto j = r.Sample(rng);
    EXPECT_TRUE(j >= 2 && j <= 4);
  }
  IndexedReplay<int> empty(2);
  EXPECT_THROW(empty.Sample(rng), ProtocolError);
  EXPECT_THROW(IndexedReplay<int>(0), ConfigError);
}

// --------------------------------------------------------------- policy

TEST(PolicyTest, EpsilonScheduleIsLinearThenFlat) {
  EpsilonSchedule s;
  s.total_episodes = 100;
  EXPECT_DOUBLE_EQ(s.At(0), 1.0);
  EXPECT_NEAR(s.At(25), 0.55, 1e-12);
  EXPECT_NEAR(s.At(50), 0.1, 1e-12);
  EXPECT_NEAR(s.At(99), 0.1, 1e-12);
  s.decay_fraction = 0.0;
  EXPECT_DOUBLE_EQ(s.At(0), 0.1);
  EpsilonSchedule bad;
  bad.end = 0.5;
  bad.start = 0.2;
  EXPECT_THROW(ValidateSchedule(bad), ConfigError);
}

TEST(PolicyTest, GreedyPicksArgmaxWithLowestTie) {
  Rng rng(3);
  const std::vector<float> q = {1, 3, 2, 0};
  EXPECT_EQ(EpsilonGreedy(0.0, rng, [&] { return q; }), grid::Action::kSouth);
  const std::vector<float> tie = {5, 5, 0, 0};
  EXPECT_EQ(EpsilonGreedy(0.0, rng, [&] { return tie; }), grid::Action::kEast);
}

TEST(PolicyTest, FullExplorationIsUniform) {
  Rng rng(17);
  constexpr int kDraws = 100000;
  std::array<int, 4> counts{};
  bool q_called = false;
  for (int i = 0; i < kDraws; ++i) {
    const auto a = EpsilonGreedy(1.0, rng, [&] {
      q_called = true;
      return std::vector<float>{0, 0, 0, 1};
    });
    ++counts[grid::ActionIndex(a)];
  }
  EXPECT_FALSE(q_called);
  for (int c : counts) {
    EXPECT_LT(std::fabs(static_cast<double>(c) / kDraws - 0.25), 3.0 / std::sqrt(kDraws));
  }
}

// -------------------------------------------------------- federated head

TEST(FederatedQTest, ZeroInputsGiveHeadOfZeroVector) {
  const nn::NetworkSpec head = FederatedHeadSpec(8);
  const nn::ParamSet hp = nn::InitParams(head, 1);
  nn::Model local = nn::Model::Create(nn::ConvQNetworkSpec(2, 3, 4, 8, 4), 2);
  local.params = nn::ZerosLike(local.spec);
  privacy::GaussianMechanism mech(0.0, 1);
  nn::Tensor obs(local.spec.input_shape);
  const std::vector<float> zeros(4, 0.0f);
  const auto pass = FederatedForward(HeadSide::kAlpha, local, head, hp, obs, zeros, mech);
  const nn::Tensor expected = nn::Predict(head, hp, nn::Tensor(nn::Shape{8}));
  EXPECT_EQ(std::vector<float>(pass.q().begin(), pass.q().end()), expected.data);
}

TEST(FederatedQTest, ConcatenationOrderDiffersBetweenSides) {
  const std::vector<float> own = {1, 2, 3, 4}, remote = {5, 6, 7, 8};
  EXPECT_EQ(HeadInput(HeadSide::kAlpha, own, remote).data,
            (std::vector<float>{1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(HeadInput(HeadSide::kBeta, own, remote).data,
            (std::vector<float>{5, 6, 7, 8, 1, 2, 3, 4}));
  const nn::NetworkSpec head = FederatedHeadSpec(8);
  const nn::ParamSet hp = nn::InitParams(head, 4);
  EXPECT_NE(nn::Predict(head, hp, HeadInput(HeadSide::kAlpha, own, remote)).data,
            nn::Predict(head, hp, HeadInput(HeadSide::kBeta, own, remote)).data);
}

TEST(FederatedQTest, RejectsWrongRemoteLength) {
  const nn::NetworkSpec head = FederatedHeadSpec(8);
  const nn::ParamSet hp = nn::InitParams(head, 1);
  nn::Model local = nn::Model::Create(nn::ConvQNetworkSpec(1, 3, 2, 4, 4), 2);
  privacy::GaussianMechanism mech(0.0, 1);
  const std::vector<float> three(3, 0.0f);
  EXPECT_THROW(FederatedForward(HeadSide::kAlpha, local, head, hp,
                                nn::Tensor(local.spec.input_shape), three, mech),
               ShapeError);
}

TEST(FederatedQTest, RemoteVectorIsData) {
  // The local loss only yields gradients shaped like the local network and
  // the head; the remote party's model is not reachable from it.
  const nn::NetworkSpec head = FederatedHeadSpec(8);
  nn::Model local = nn::Model::Create(nn::ConvQNetworkSpec(1, 3, 2, 4, 4), 2);
  nn::Model remote_model = nn::Model::Create(nn::ConvQNetworkSpec(1, 5, 2, 4, 4), 3);
  const nn::ParamSet remote_before = remote_model.params;
  const nn::ParamSet hp = nn::InitParams(head, 1);
  privacy::GaussianMechanism mech(0.0, 1);
  nn::Tensor obs(local.spec.input_shape);
  obs.data.assign(obs.data.size(), 1.0f);
  const std::vector<float> remote =
      remote_model.Predict(nn::Tensor(remote_model.spec.input_shape)).data;
  const auto pass = FederatedForward(HeadSide::kAlpha, local, head, hp, obs, remote, mech);
  const auto l = ActionValueLoss(pass, grid::Action::kWest, 3.0f);
  ASSERT_EQ(l.grads.local.buffers.size(), local.params.buffers.size());
  ASSERT_EQ(l.grads.head.buffers.size(), hp.buffers.size());
  for (std::size_t i = 0; i < hp.buffers.size(); ++i) {
    EXPECT_EQ(l.grads.head.buffers[i].shape, hp.buffers[i].shape);
  }
  EXPECT_EQ(remote_model.params, remote_before);
}

TEST(FederatedQTest, TargetArithmetic) {
  const std::vector<float> q = {0.5f, 2.0f, -1.0f, 1.0f};
  EXPECT_NEAR(ComputeTargetY(1.0f, 0.9, false, q), 2.8f, 1e-6);
  EXPECT_EQ(ComputeTargetY(1.0f, 0.0, false, q), 1.0f);
  EXPECT_EQ(ComputeTargetY(-7.5f, 0.9, true, q), -7.5f);
}

class FederatedGradientTest : public ::testing::TestWithParam<int> {};

TEST_P(FederatedGradientTest, AlphaHeadMatchesFiniteDifferences) {
  Rng rng(DeriveSeed(1000, static_cast<std::uint64_t>(GetParam())));
  EXPECT_LT(testing::FederatedGradientError(HeadSide::kAlpha, 4, rng), testing::kFdTolerance);
}

TEST_P(FederatedGradientTest, BetaHeadMatchesFiniteDifferences) {
  Rng rng(DeriveSeed(2000, static_cast<std::uint64_t>(GetParam())));
  EXPECT_LT(testing::FederatedGradientError(HeadSide::kBeta, 4, rng), testing::kFdTolerance);
}

TEST_P(FederatedGradientTest, TwoActionToyMatchesFiniteDifferences) {
  Rng rng(DeriveSeed(3000, static_cast<std::uint64_t>(GetParam())));
  EXPECT_LT(testing::FederatedGradientError(HeadSide::kAlpha, 2, rng), testing::kFdTolerance);
}

INSTANTIATE_TEST_SUITE_P(Instances, FederatedGradientTest, ::testing::Range(0, 20));

// --------------------------------------------------------------- agents

// Beta with a fixed environment, for exercising its operations directly.
struct BetaHarness {
  World world;
  Maps maps = SmallMaps();
  AgentBeta beta;
  explicit BetaHarness(const FedConfig& c) : beta(c, &world) {
    const auto& m = *maps.train[0];
    world.Reset(m.map, m.start_alpha, m.start_beta, 38);
  }
};

TEST(AgentBetaTest, LiveStoresAtAlphaIndexAndActsLocally) {
  FedConfig c = SmallConfig();
  c.epsilon.start = c.epsilon.end = 0.0;  // greedy from the local network
  BetaHarness h(c);
  for (std::uint64_t j = 0; j < 3; ++j) {
    const auto c_beta = h.beta.ComputeLive();
    ASSERT_EQ(c_beta.size(), 4u);
    EXPECT_EQ(*h.beta.last_index(), j);
    const auto& e = h.beta.replay().Get(j);
    const nn::Tensor q = h.beta.local().Predict(e.s);
    EXPECT_EQ(c_beta, q.data);  // sigma = 0
    EXPECT_EQ(e.a, Greedy(q.data));
    h.world.StepAlpha(grid::Action::kEast);
  }
}

TEST(AgentBetaTest, IndexedLookupAndFreshNoise) {
  FedConfig c = SmallConfig();
  c.sigma = 1.0;
  BetaHarness h(c);
  h.beta.ComputeLive();
  const auto a = h.beta.ComputeIndexed(0);
  const auto b = h.beta.ComputeIndexed(0);
  EXPECT_NE(a, b);
  EXPECT_THROW(h.beta.ComputeIndexed(1), ProtocolError);
  const auto reply = h.beta.Handle(RequestQBetaIndexed{9});
  ASSERT_TRUE(reply.has_value());
  EXPECT_TRUE(std::holds_alternative<ErrorReply>(*reply));
}

TEST(AgentBetaTest, ZeroLearningRateKeepsThetaG) {
  FedConfig c = SmallConfig();
  c.adam.lr = 0.0;
  BetaHarness h(c);
  h.beta.ComputeLive();
  const Bytes g = nn::SerializeParams(HeadNetworkSpec(c),
                                      nn::InitParams(HeadNetworkSpec(c), 5));
  const nn::ParamSet before = h.beta.local().params;
  EXPECT_EQ(h.beta.Update(1.0f, 0, std::vector<float>{0.1f, 0.2f, 0.3f, 0.4f}, g), g);
  EXPECT_EQ(h.beta.local().params, before);
}

TEST(AgentBetaTest, UpdateDoesNotIncreaseLossOnSameExample) {
  FedConfig c = SmallConfig();
  c.adam.lr = 1e-3;
  BetaHarness h(c);
  h.beta.ComputeLive();
  const nn::NetworkSpec head_spec = HeadNetworkSpec(c);
  const nn::ParamSet g0 = nn::InitParams(head_spec, 5);
  const std::vector<float> c_alpha = {0.1f, -0.2f, 0.3f, 0.05f};
  const float y = 4.0f;
  const auto& e = h.beta.replay().Get(0);
  auto loss_with = [&](const nn::Model& local, const nn::ParamSet& g) {
    privacy::GaussianMechanism none(0.0, 0);
    const auto pass = FederatedForward(HeadSide::kBeta, local, head_spec, g, e.s, c_alpha, none);
    return ActionValueLoss(pass, e.a, y).loss;
  };
  nn::Model before = h.beta.local();
  const float l0 = loss_with(before, g0);
  const Bytes g1 = h.beta.Update(y, 0, c_alpha, nn::SerializeParams(head_spec, g0));
  const float l1 = loss_with(h.beta.local(), nn::DeserializeParams(g1, head_spec));
  EXPECT_LE(l1, l0);
  EXPECT_NE(h.beta.local().params, before.params);
}

TEST(AgentBetaTest, UnknownIndexUpdateIsAnError) {
  BetaHarness h(SmallConfig());
  const Bytes g = nn::SerializeParams(HeadNetworkSpec(SmallConfig()),
                                      nn::ZerosLike(HeadNetworkSpec(SmallConfig())));
  EXPECT_THROW(h.beta.Update(1.0f, 3, std::vector<float>(4, 0.0f), g), ProtocolError);
}

TEST(AgentBetaTest, EvalActsFromFederatedHead) {
  FedConfig c = SmallConfig();
  BetaHarness h(c);
  const nn::NetworkSpec head_spec = HeadNetworkSpec(c);
  const nn::ParamSet g = nn::InitParams(head_spec, 99);
  h.beta.BeginEval(false, nn::SerializeParams(head_spec, g));
  const std::vector<float> c_alpha = {3.0f, -1.0f, 0.5f, 2.0f};
  const auto c_beta = h.beta.EvalStep(c_alpha);
  const nn::Tensor q = nn::Predict(head_spec, g, HeadInput(HeadSide::kBeta, c_beta, c_alpha));
  EXPECT_EQ(*h.beta.last_action(), Greedy(q.data));
  EXPECT_EQ(h.beta.replay().size(), 0u);
}

TEST(AgentBetaTest, FailedNotificationSurfacesOnNextRequest) {
  BetaHarness h(SmallConfig());
  EXPECT_FALSE(h.beta.Handle(BeginEval{false, Bytes{1, 2, 3}}).has_value());
  const auto reply = h.beta.Handle(RequestQBetaLive{});
  ASSERT_TRUE(reply.has_value());
  EXPECT_TRUE(std::holds_alternative<ErrorReply>(*reply));
  // Only one request carries the deferred error.
  EXPECT_TRUE(std::holds_alternative<QBetaReply>(*h.beta.Handle(RequestQBetaLive{})));
  // Alpha-bound messages are refused.
  const auto wrong = h.beta.Handle(QBetaReply{{1, 2, 3, 4}});
  ASSERT_TRUE(wrong.has_value());
  EXPECT_TRUE(std::holds_alternative<ErrorReply>(*wrong));
}

TEST(AgentAlphaTest, SelectActionAndTargetUseFederatedQ) {
  FedConfig c = SmallConfig();
  AgentAlpha alpha(c);
  nn::Tensor s(AlphaNetworkSpec(c).input_shape);
  s.data.assign(s.data.size(), 1.0f);
  const std::vector<float> c_beta = {0.5f, 0.1f, -0.3f, 0.2f};
  const auto q = alpha.QFed(s, c_beta);
  EXPECT_EQ(alpha.SelectAction(s, c_beta, 0.0), Greedy(q));
  const float best = *std::max_element(q.begin(), q.end());
  EXPECT_EQ(alpha.ComputeTarget(1.0f, false, s, c_beta),
            static_cast<float>(1.0 + 0.9 * best));
  EXPECT_EQ(alpha.ComputeTarget(1.0f, true, s, c_beta), 1.0f);
  EXPECT_THROW(alpha.Update(0, 1.0f, c_beta), ProtocolError);
}

// -------------------------------------------------------------- session

struct TrainedTrace {
  std::vector<EpisodeLog> logs;
  std::vector<testing::ParamHashes> steps;
  std::vector<grid::EpisodeResult> eval;
  AuditReport audit;
  std::uint64_t round_trips = 0;
};

TrainedTrace TrainSmall(const FedConfig& c, TransportKind kind, int episodes,
                        int max_steps) {
  Maps maps = SmallMaps();
  TranscriptAuditor auditor(HeadNetworkSpec(c), 4);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> beta_hashes;
  SessionOptions opts;
  opts.transport = kind;
  opts.sink = auditor.Sink();
  const nn::NetworkSpec spec_b = BetaNetworkSpec(c), spec_g = HeadNetworkSpec(c);
  opts.beta_observer = [&](const nn::ParamSet& b, const nn::ParamSet& g) {
    beta_hashes.emplace_back(testing::HashParams(spec_b, b), testing::HashParams(spec_g, g));
  };
  TrainedTrace out;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> alpha_hashes;
  {
    FederatedSession session(c, std::move(opts));
    TrainOptions t;
    t.episodes = episodes;
    t.max_steps = max_steps;
    t.on_step = [&](const StepTrace& s) {
      alpha_hashes.emplace_back(
          testing::HashParams(s.alpha->local().spec, s.alpha->local().params),
          testing::HashParams(s.alpha->head_spec(), s.alpha->head_params()));
    };
    out.logs = session.Train(maps.train, t);
    out.eval = session.Evaluate(maps.test, max_steps, false);
    out.round_trips = session.round_trips();
    session.Close();
  }
  EXPECT_EQ(alpha_hashes.size(), beta_hashes.size());
  for (std::size_t i = 0; i < std::min(alpha_hashes.size(), beta_hashes.size()); ++i) {
    // theta_g identical on both sides after every round trip.
    EXPECT_EQ(alpha_hashes[i].second, beta_hashes[i].second) << "step " << i;
    out.steps.push_back({alpha_hashes[i].first, beta_hashes[i].first, alpha_hashes[i].second});
  }
  out.audit = auditor.report();
  return out;
}

testing::ReferenceSettings ReferenceFor(const FedConfig& c, int episodes, int max_steps) {
  testing::ReferenceSettings r;
  r.history = c.history;
  r.gamma = c.gamma;
  r.eps_start = c.epsilon.start;
  r.eps_end = c.epsilon.end;
  r.eps_fraction = c.epsilon.decay_fraction;
  r.episodes = episodes;
  r.max_steps = max_steps;
  r.lr = c.adam.lr;
  r.capacity = c.replay_capacity;
  r.conv = c.conv_channels;
  r.hidden = c.hidden;
  r.head_hidden = c.head_hidden;
  r.seed = c.seed;
  return r;
}

class SessionTransportTest : public ::testing::TestWithParam<TransportKind> {};

TEST_P(SessionTransportTest, MatchesSingleProcessReference) {
  FedConfig c = SmallConfig(21);
  c.replay_capacity = 40;  // exercises eviction on both sides
  constexpr int kEpisodes = 6, kMaxSteps = 25;
  c.epsilon.total_episodes = kEpisodes;
  const TrainedTrace t = TrainSmall(c, GetParam(), kEpisodes, kMaxSteps);
  Maps maps = SmallMaps();
  const auto ref = testing::RunReferenceFedRl(ReferenceFor(c, kEpisodes, kMaxSteps), maps.train);
  ASSERT_GE(ref.per_step.size(), 100u);
  ASSERT_EQ(t.steps.size(), ref.per_step.size());
  for (std::size_t i = 0; i < ref.per_step.size(); ++i) {
    ASSERT_EQ(t.steps[i], ref.per_step[i]) << "first divergence at step " << i;
  }
}

TEST_P(SessionTransportTest, TranscriptIsClean) {
  FedConfig c = SmallConfig(3);
  c.sigma = 1.0;
  constexpr int kEpisodes = 4, kMaxSteps = 20;
  c.epsilon.total_episodes = kEpisodes;
  const TrainedTrace t = TrainSmall(c, GetParam(), kEpisodes, kMaxSteps);
  EXPECT_TRUE(t.audit.clean()) << (t.audit.violations.empty() ? "" : t.audit.violations[0]);
  const std::uint64_t cap = static_cast<std::uint64_t>(kEpisodes) * kMaxSteps;
  std::uint64_t steps = 0;
  for (const auto& l : t.logs) steps += static_cast<std::uint64_t>(l.steps);
  EXPECT_EQ(t.audit.count(MessageTag::kRequestQBetaLive), steps);
  EXPECT_EQ(t.audit.count(MessageTag::kUpdateBeta), steps);
  EXPECT_LE(t.audit.count(MessageTag::kRequestQBetaIndexed), cap);
  EXPECT_LE(t.audit.count(MessageTag::kThetaGReply), cap);
  EXPECT_EQ(t.audit.count(MessageTag::kInit), 1u);
  EXPECT_EQ(t.audit.count(MessageTag::kShutdown), 1u);
  EXPECT_EQ(t.audit.count(MessageTag::kErrorReply), 0u);
}

INSTANTIATE_TEST_SUITE_P(Transports, SessionTransportTest,
                         ::testing::Values(TransportKind::kInProcess, TransportKind::kSocket),
                         [](const auto& info) { return std::string(TransportName(info.param)); });

TEST(SessionTest, DeterministicAcrossRunsAndTransports) {
  FedConfig c = SmallConfig(8);
  c.epsilon.total_episodes = 5;
  const TrainedTrace a = TrainSmall(c, TransportKind::kInProcess, 5, 20);
  const TrainedTrace b = TrainSmall(c, TransportKind::kInProcess, 5, 20);
  const TrainedTrace s = TrainSmall(c, TransportKind::kSocket, 5, 20);
  EXPECT_EQ(a.logs, b.logs);
  EXPECT_EQ(a.eval, b.eval);
  EXPECT_EQ(a.logs, s.logs);
  EXPECT_EQ(a.eval, s.eval);
  for (const auto& r : a.eval) {
    EXPECT_TRUE(r.outcome == grid::Outcome::kMet || r.outcome == grid::Outcome::kTimeout);
    EXPECT_LE(r.steps, 20);
  }
}

TEST(SessionTest, NoiseOffEvalMatchesMonolithicForward) {
  FedConfig c = SmallConfig(4);
  Maps maps = SmallMaps();
  FederatedSession session(c);
  TrainOptions t;
  t.episodes = 3;
  t.max_steps = 15;
  session.Train(maps.train, t);
  const auto results = session.Evaluate(maps.test, 15, false);
  session.Close();
  const AgentAlpha& alpha = session.alpha();
  const AgentBeta& beta = session.beta();
  const nn::NetworkSpec head_spec = HeadNetworkSpec(c);
  for (std::size_t i = 0; i < maps.test.size(); ++i) {
    const auto& m = *maps.test[i];
    grid::EpisodeState st = grid::StartEpisode(m.map, m.start_alpha, m.start_beta, 15);
    grid::ObsHistory ha(c.history, 3), hb(c.history, 5);
    ha.Push(grid::Observe(st.map, st.pos_alpha, 3));
    hb.Push(grid::Observe(st.map, st.pos_beta, 5));
    int steps = 0;
    for (;;) {
      const auto qa = alpha.local().Predict(ha.ToTensor()).data;
      const auto qb = beta.local().Predict(hb.ToTensor()).data;
      nn::Tensor x(nn::Shape{8});
      std::copy(qa.begin(), qa.end(), x.data.begin());
      std::copy(qb.begin(), qb.end(), x.data.begin() + 4);
      const auto q = nn::Predict(head_spec, alpha.head_params(), x).data;
      // Same input order for both agents' heads: [C_alpha | C_beta].
      const auto a = Greedy(q);
      const auto r = grid::Step(st, a, a);
      ++steps;
      if (r.done) break;
      ha.Push(grid::Observe(st.map, st.pos_alpha, 3));
      hb.Push(grid::Observe(st.map, st.pos_beta, 5));
    }
    EXPECT_EQ(results[i].outcome, st.outcome) << "map " << m.id;
    EXPECT_EQ(results[i].steps, steps) << "map " << m.id;
  }
}

TEST(SessionTest, LoadedCheckpointEvaluatesIdentically) {
  FedConfig c = SmallConfig(6);
  Maps maps = SmallMaps();
  const auto dir = TempDir("load");
  std::vector<grid::EpisodeResult> before;
  {
    FederatedSession session(c);
    TrainOptions t;
    t.episodes = 3;
    t.max_steps = 15;
    session.Train(maps.train, t);
    before = session.Evaluate(maps.test, 15, false);
    session.Close();
    session.alpha().SaveCheckpoint(dir);
    session.beta().SaveCheckpoint(dir);
  }
  SessionOptions opts;
  opts.load_dir = dir;
  FederatedSession loaded(c, opts);
  EXPECT_EQ(loaded.Evaluate(maps.test, 15, false), before);
  loaded.Close();
  std::filesystem::remove_all(dir);
}

// Forwards frames until `budget` sends have happened, then fails.
class FailingChannel : public Channel {
 public:
  FailingChannel(std::unique_ptr<Channel> inner, int budget)
      : inner_(std::move(inner)), budget_(budget) {}
  void Send(const Bytes& f) override {
    if (budget_-- <= 0) {
      inner_->Close();
      throw TransportError("injected failure");
    }
    inner_->Send(f);
  }
  Bytes Receive() override { return inner_->Receive(); }
  void Close() override { inner_->Close(); }

 private:
  std::unique_ptr<Channel> inner_;
  int budget_;
};

TEST(SessionTest, TransportFailureLeavesResumableCheckpoint) {
  FedConfig c = SmallConfig(12);
  Maps maps = SmallMaps();
  const auto dir = TempDir("resume");
  World world;
  AgentAlpha alpha(c);
  AgentBeta beta(c, &world);
  beta.set_checkpoint_dir(dir / "beta");
  auto [a, b] = MakeQueueChannelPair();
  std::exception_ptr beta_error;
  std::thread server([&] {
    try {
      beta.Serve(*b);
    } catch (...) {
      beta_error = std::current_exception();
    }
  });
  FailingChannel failing(std::move(a), 150);
  BetaLink link(failing);
  TrainOptions t;
  t.episodes = 50;
  t.max_steps = 20;
  t.checkpoint_dir = dir / "alpha";
  EXPECT_THROW(TrainAlpha(alpha, link, world, maps.train, t), TransportError);
  server.join();
  EXPECT_TRUE(beta_error != nullptr);
  ASSERT_TRUE(std::filesystem::exists(dir / "alpha" / kThetaAlphaFile));
  ASSERT_TRUE(std::filesystem::exists(dir / "alpha" / kThetaGFile));
  ASSERT_TRUE(std::filesystem::exists(dir / "beta" / kThetaBetaFile));
  ASSERT_TRUE(ReadResumeFile(dir / "alpha").has_value());
  const int next = *ReadResumeFile(dir / "alpha");
  EXPECT_GT(next, 0);
  EXPECT_LT(next, 50);

  // Resume from the checkpoint on a fresh pair of agents.
  World world2;
  AgentAlpha alpha2(c);
  alpha2.LoadCheckpoint(dir / "alpha");
  EXPECT_EQ(alpha2.local().params, alpha.local().params);
  AgentBeta beta2(c, &world2);
  beta2.LoadCheckpoint(dir / "beta");
  EXPECT_EQ(beta2.episode(), next);
  auto [a2, b2] = MakeQueueChannelPair();
  std::thread server2([&] { beta2.Serve(*b2); });
  BetaLink link2(*a2);
  t.start_episode = next;
  t.episodes = next + 2;
  t.checkpoint_dir.clear();
  const auto logs = TrainAlpha(alpha2, link2, world2, maps.train, t);
  link2.Notify(Shutdown{});
  server2.join();
  ASSERT_EQ(logs.size(), 2u);
  EXPECT_EQ(logs[0].episode, next);
  std::filesystem::remove_all(dir);
}

TEST(SessionTest, RejectsBadInputs) {
  EXPECT_THROW(ParseTransport("udp"), ConfigError);
  FedConfig c = SmallConfig();
  c.history = 0;
  EXPECT_THROW(AgentAlpha{c}, ConfigError);
  FederatedSession session(SmallConfig());
  TrainOptions t;
  t.episodes = 1;
  t.max_steps = 5;
  EXPECT_THROW(session.Train({}, t), ConfigError);
}

}  // namespace
}  // namespace fedq::fed

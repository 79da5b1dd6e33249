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


#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "fedq/baselines/config.h"
#include "fedq/baselines/dqn.h"
#include "fedq/baselines/evaluate.h"
#include "fedq/baselines/fcn.h"
#include "fedq/baselines/inputs.h"
#include "fedq/common/error.h"
#include "fedq/grid/dataset.h"
#include "gtest/gtest.h"

namespace fedq::baselines {
namespace {

BaselineConfig SmallConfig(std::uint64_t seed = 5) {
  BaselineConfig c;
  c.conv_channels = 8;
  c.hidden = 32;
  c.seed = seed;
  c.epsilon.total_episodes = 20;
  return c;
}

const grid::Dataset& SmallDataset() {
  static const grid::Dataset d = grid::MakeDataset(8, 40, 0.3, 11);
  return d;
}

grid::DatasetEntry EmptyMapEntry(int n, grid::AgentPos a, grid::AgentPos b) {
  grid::DatasetEntry e;
  e.map = grid::MapGrid(n);
  e.start_alpha = a;
  e.start_beta = b;
  return e;
}

// ----------------------------------------------------------------- config

TEST(BaselineConfigTest, KindNamesRoundTrip) {
  for (auto k : {BaselineKind::kDqnAlpha, BaselineKind::kDqnFull,
                 BaselineKind::kFcnAlpha, BaselineKind::kFcnFull}) {
    EXPECT_EQ(ParseKind(KindName(k)), k);
  }
  EXPECT_THROW(ParseKind("dqn"), ConfigError);
  EXPECT_EQ(ParseBehavior("stationary"), BetaBehavior::kStationary);
  EXPECT_THROW(ParseBehavior("greedy"), ConfigError);
}

TEST(BaselineConfigTest, OnlyFullKindsConsumeBeta) {
  EXPECT_FALSE(ConsumesBeta(BaselineKind::kDqnAlpha));
  EXPECT_FALSE(ConsumesBeta(BaselineKind::kFcnAlpha));
  EXPECT_TRUE(ConsumesBeta(BaselineKind::kDqnFull));
  EXPECT_TRUE(ConsumesBeta(BaselineKind::kFcnFull));
}

TEST(BaselineConfigTest, RejectsBadValues) {
  BaselineConfig c;
  c.gamma = 1.5;
  EXPECT_THROW(Validate(c), ConfigError);
  c = {};
  c.fcn_batch_size = 0;
  EXPECT_THROW(Validate(c), ConfigError);
  c = {};
  c.history = 0;
  EXPECT_THROW(Validate(c), ConfigError);
}

// ----------------------------------------------------------------- inputs

TEST(BaselineInputsTest, FullInputWidth) {
  EXPECT_EQ(FullInputWidth(2), 2u * 9 + 2u * 25);
  EXPECT_EQ(FullInputWidth(4), 136u);
  BaselineConfig c;
  c.history = 2;
  EXPECT_EQ(BaselineNetworkSpec(BaselineKind::kDqnFull, c).input_shape,
            nn::Shape{68});
  EXPECT_EQ(BaselineNetworkSpec(BaselineKind::kFcnFull, c).input_shape,
            nn::Shape{68});
  EXPECT_EQ(BaselineNetworkSpec(BaselineKind::kDqnAlpha, c).input_shape,
            (nn::Shape{2, 3, 3}));
  EXPECT_EQ(BaselineNetworkSpec(BaselineKind::kDqnFull, c).OutputShape(),
            nn::Shape{4});
}

TEST(BaselineInputsTest, FullInputIsAlphaThenBeta) {
  grid::MapGrid m(6);
  m.Set({0, 1}, false);
  grid::ObsHistory a(2, 3), b(2, 5);
  a.Push(grid::Observe(m, {0, 0}, 3));
  b.Push(grid::Observe(m, {4, 4}, 5));
  const nn::Tensor x = FullInput(a, b);
  ASSERT_EQ(x.size(), 68u);
  const nn::Tensor ta = a.ToTensor(), tb = b.ToTensor();
  for (std::size_t i = 0; i < 18; ++i) EXPECT_EQ(x.data[i], ta.data[i]);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(x.data[18 + i], tb.data[i]);
  EXPECT_THROW(FullInput(b, a), ShapeError);
}

TEST(BaselineInputsTest, AlphaOnlyInputIgnoresBetaSurroundings) {
  // Two maps that differ only around beta: alpha-only inputs agree, full
  // inputs do not.
  grid::DatasetEntry e1 = EmptyMapEntry(8, {0, 0}, {6, 6});
  grid::DatasetEntry e2 = e1;
  e2.map.Set({7, 6}, false);
  e2.map.Set({5, 5}, false);
  for (auto kind : {BaselineKind::kDqnAlpha, BaselineKind::kFcnAlpha}) {
    BaselineEpisode x(kind, 2, e1, 10), y(kind, 2, e2, 10);
    EXPECT_EQ(x.Input(), y.Input());
    x.Step(grid::Action::kEast, grid::Action::kNorth);
    y.Step(grid::Action::kEast, grid::Action::kNorth);
    EXPECT_EQ(x.Input(), y.Input());
  }
  BaselineEpisode x(BaselineKind::kDqnFull, 2, e1, 10);
  BaselineEpisode y(BaselineKind::kDqnFull, 2, e2, 10);
  EXPECT_NE(x.Input(), y.Input());
}

TEST(BaselineInputsTest, StationaryBetaHoldsItsCell) {
  Rng rng(1);
  EXPECT_FALSE(BetaMove(BetaBehavior::kStationary, rng).has_value());
  BaselineEpisode env(BaselineKind::kDqnAlpha, 2,
                      EmptyMapEntry(5, {0, 0}, {4, 4}), 10);
  const grid::StepResult r = env.Step(grid::Action::kEast, std::nullopt);
  EXPECT_EQ(env.state().pos_beta, (grid::AgentPos{4, 4}));
  EXPECT_EQ(env.state().pos_alpha, (grid::AgentPos{0, 1}));
  EXPECT_EQ(r.local_reward, -1.0f);
}

TEST(BaselineInputsTest, UniformBetaCoversAllActions) {
  Rng rng(2);
  std::set<grid::Action> seen;
  for (int i = 0; i < 200; ++i) seen.insert(*BetaMove(BetaBehavior::kUniform, rng));
  EXPECT_EQ(seen.size(), 4u);
}

// -------------------------------------------------------------------- dqn

// Tabular sanity check on a 4x4 map with gamma = 0: the regression target is
// the immediate reward, so the learned Q(s, a) must approach the mean reward
// observed for that input and action. Beta sits in a walled-off corner so
// every episode runs to the step cap.
std::map<std::pair<std::vector<float>, int>, std::pair<double, int>>
DriveRandomWalk(DqnLearner& learner, int steps, bool constant_reward) {
  std::map<std::pair<std::vector<float>, int>, std::pair<double, int>> seen;
  grid::DatasetEntry e = EmptyMapEntry(4, {0, 0}, {3, 3});
  e.map.Set({2, 3}, false);
  e.map.Set({3, 2}, false);
  std::optional<BaselineEpisode> env;
  for (int i = 0; i < steps; ++i) {
    if (!env || env->state().done()) env.emplace(BaselineKind::kDqnAlpha, 2, e, 30);
    const nn::Tensor s = env->Input();
    const grid::Action a = learner.Act(s, 1.0);
    const grid::StepResult r = env->Step(a, std::nullopt);
    const float reward = constant_reward ? 5.0f : r.reward;
    auto& [sum, count] = seen[{s.data, static_cast<int>(a)}];
    sum += reward;
    ++count;
    learner.Observe({s, a, reward, env->Input(), r.done});
    // Settle with a small step so batch-1 Adam jitter does not dominate.
    if (i == steps * 2 / 3) learner.model().adam.options.lr = 1e-4;
  }
  return seen;
}

TEST(DqnTest, ZeroGammaConstantRewardLearnsTheReward) {
  BaselineConfig c = SmallConfig();
  c.gamma = 0.0;
  c.adam.lr = 3e-3;
  DqnLearner learner(BaselineKind::kDqnAlpha, c);
  const auto seen = DriveRandomWalk(learner, 3000, true);
  for (const auto& [key, stats] : seen) {
    nn::Tensor s({2, 3, 3}, key.first);
    const float q = learner.model().Predict(s).data[static_cast<std::size_t>(key.second)];
    EXPECT_NEAR(q, 5.0, 0.25);
  }
}

TEST(DqnTest, ZeroGammaLearnsMeanImmediateReward) {
  BaselineConfig c = SmallConfig();
  c.conv_channels = 16;
  c.hidden = 64;
  c.gamma = 0.0;
  c.adam.lr = 3e-3;
  DqnLearner learner(BaselineKind::kDqnAlpha, c);
  const auto seen = DriveRandomWalk(learner, 9000, false);
  for (const auto& [key, stats] : seen) {
    if (stats.second < 50) continue;  // rarely visited pairs are noisy
    nn::Tensor s({2, 3, 3}, key.first);
    const float q = learner.model().Predict(s).data[static_cast<std::size_t>(key.second)];
    EXPECT_NEAR(q, stats.first / stats.second, 0.5);
  }
}

TEST(DqnTest, RejectsSupervisedKinds) {
  EXPECT_THROW(DqnLearner(BaselineKind::kFcnAlpha, SmallConfig()), ConfigError);
}

TEST(DqnTest, DeterministicUnderSeed) {
  const auto train = SmallDataset().Select(grid::Split::kTrain);
  for (auto kind : {BaselineKind::kDqnAlpha, BaselineKind::kDqnFull}) {
    const DqnResult a = TrainDqn(kind, SmallConfig(), train, 20, 15);
    const DqnResult b = TrainDqn(kind, SmallConfig(), train, 20, 15);
    EXPECT_EQ(a.model.params, b.model.params);
    EXPECT_EQ(a.logs, b.logs);
    const DqnResult other = TrainDqn(kind, SmallConfig(6), train, 20, 15);
    EXPECT_NE(a.model.params, other.model.params);
  }
}

TEST(DqnTest, GreedyPolicyGivesValidActionsAndOutcomes) {
  const auto& d = SmallDataset();
  const auto train = d.Select(grid::Split::kTrain);
  const auto test = d.Select(grid::Split::kTest);
  for (auto kind : {BaselineKind::kDqnAlpha, BaselineKind::kDqnFull}) {
    DqnResult r = TrainDqn(kind, SmallConfig(), train, 10, 15);
    for (const auto* m : test) {
      BaselineEpisode env(kind, 2, *m, 15);
      const auto q = r.model.Predict(env.Input());
      EXPECT_LT(nn::ArgMax(q.data), 4u);
    }
    const auto results = EvaluateBaseline(kind, SmallConfig(), r.model.params, test, 15);
    ASSERT_EQ(results.size(), test.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
      EXPECT_EQ(results[i].map_id, test[i]->id);
      EXPECT_TRUE(results[i].outcome == grid::Outcome::kMet ||
                  results[i].outcome == grid::Outcome::kTimeout);
      EXPECT_LE(results[i].steps, 15);
    }
    EXPECT_EQ(results,
              EvaluateBaseline(kind, SmallConfig(), r.model.params, test, 15));
  }
}

TEST(DqnTest, LogsCoverEveryEpisode) {
  const auto train = SmallDataset().Select(grid::Split::kTrain);
  const DqnResult r = TrainDqn(BaselineKind::kDqnAlpha, SmallConfig(), train, 12, 15);
  ASSERT_EQ(r.logs.size(), 12u);
  for (const auto& l : r.logs) {
    EXPECT_GE(l.steps, 1);
    EXPECT_LE(l.steps, 15);
    EXPECT_TRUE(std::isfinite(l.mean_loss));
  }
  EXPECT_DOUBLE_EQ(r.logs.front().epsilon, 1.0);
}

// -------------------------------------------------------------------- fcn

TEST(FcnTest, ExamplesFollowTheOptimalPlan) {
  const auto train = SmallDataset().Select(grid::Split::kTrain);
  const auto ex = BuildFcnExamples(BaselineKind::kFcnAlpha, 2, train);
  std::size_t rounds = 0;
  for (const auto* m : train) rounds += m->opt_actions.size();
  ASSERT_EQ(ex.size(), rounds);
  std::size_t k = 0;
  for (const auto* m : train) {
    for (const auto& [a, b] : m->opt_actions) {
      EXPECT_EQ(ex[k].label, grid::ActionIndex(a));
      EXPECT_LT(ex[k].label, 4u);
      ++k;
    }
  }
  // The first example of each map is the start window repeated H times.
  const auto* m0 = train.front();
  grid::ObsHistory h(2, 3);
  h.Push(grid::Observe(m0->map, m0->start_alpha, 3));
  EXPECT_EQ(ex.front().input, h.ToTensor());

  const auto full = BuildFcnExamples(BaselineKind::kFcnFull, 2, train);
  ASSERT_EQ(full.size(), ex.size());
  EXPECT_EQ(full.front().input.shape, nn::Shape{68});
}

TEST(FcnTest, MemorizesASingleExample) {
  const auto train = SmallDataset().Select(grid::Split::kTrain);
  auto ex = BuildFcnExamples(BaselineKind::kFcnAlpha, 2, train);
  ex.resize(1);
  BaselineConfig c = SmallConfig();
  c.fcn_epochs = 50;
  c.fcn_batch_size = 1;
  const FcnResult r = TrainFcn(BaselineKind::kFcnAlpha, c, ex);
  EXPECT_EQ(Accuracy(r.model.spec, r.model.params, ex), 1.0);
}

TEST(FcnTest, LossDecreasesOverFirstEpochs) {
  const grid::Dataset d = grid::MakeDataset(8, 80, 0.3, 12);
  const auto train = d.Select(grid::Split::kTrain);
  auto ex = BuildFcnExamples(BaselineKind::kFcnFull, 2, train);
  ASSERT_GE(ex.size(), 100u);
  ex.resize(100);
  BaselineConfig c;
  c.seed = 3;
  c.fcn_epochs = 5;
  c.fcn_batch_size = 10;
  const FcnResult r = TrainFcn(BaselineKind::kFcnFull, c, ex);
  double prev = r.initial_loss;
  for (double l : r.epoch_loss) {
    EXPECT_LT(l, prev);
    prev = l;
  }
}

TEST(FcnTest, RejectsEmptyDataAndDqnKinds) {
  EXPECT_THROW(TrainFcn(BaselineKind::kFcnAlpha, SmallConfig(), {}), ConfigError);
  const auto train = SmallDataset().Select(grid::Split::kTrain);
  const auto ex = BuildFcnExamples(BaselineKind::kFcnAlpha, 2, train);
  EXPECT_THROW(TrainFcn(BaselineKind::kDqnAlpha, SmallConfig(), ex), ConfigError);
}

TEST(FcnTest, DeterministicUnderSeed) {
  const auto train = SmallDataset().Select(grid::Split::kTrain);
  const auto ex = BuildFcnExamples(BaselineKind::kFcnAlpha, 2, train);
  BaselineConfig c = SmallConfig();
  c.fcn_epochs = 2;
  const FcnResult a = TrainFcn(BaselineKind::kFcnAlpha, c, ex);
  const FcnResult b = TrainFcn(BaselineKind::kFcnAlpha, c, ex);
  EXPECT_EQ(a.model.params, b.model.params);
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
}

}  // namespace
}  // namespace fedq::baselines

// Copyright 2026 The Clutterpush Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "clutterpush/env/returns.h"
#include "clutterpush/errors.h"
#include "clutterpush/imitation/targets.h"
#include "clutterpush/imitation/trainer.h"
#include "clutterpush/nn/features.h"
#include "clutterpush/physics/stepper.h"
#include "clutterpush/rrt/planner.h"

namespace clutterpush::imitation {
namespace {

double Summation(int n, double gamma, double r = -1.0) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += std::pow(gamma, k) * r;
  return s;
}

// Synthetic plan: states are distinct but physics plays no role in targets.
rrt::Plan ToyPlan(int length, std::uint64_t seed) {
  Rng rng(seed);
  rrt::Plan plan;
  plan.task.specs = physics::ReferenceSpecs(3);
  auto state = [&] {
    env::WorldState s;
    s.robot = {Uniform(rng, -0.3, 0.3), Uniform(rng, -0.3, 0.3),
               Uniform(rng, -3, 3)};
    for (int i = 0; i < 3; ++i) {
      s.objects.push_back({Uniform(rng, -0.3, 0.3), Uniform(rng, -0.3, 0.3),
                           Uniform(rng, -3, 3)});
    }
    return s;
  };
  plan.task.initial = state();
  for (int i = 0; i < 3; ++i) {
    plan.task.goals.push_back({plan.task.initial.objects[i].position(), 0.06});
  }
  plan.task.goals[0].center = {0.2, 0.1};
  for (int l = 0; l < length; ++l) {
    plan.states.push_back(l == 0 ? plan.task.initial : state());
    plan.actions.push_back(kAllActions[UniformInt(rng, 0, 5)]);
  }
  plan.final_state = state();
  return plan;
}

TEST(ChosenTargetTest, ClosedFormExamples) {
  EXPECT_EQ(ChosenTarget(3, 10, 1.0), -7.0);
  for (double g : {0.5, 0.9, 0.98, 1.0}) {
    EXPECT_NEAR(ChosenTarget(9, 10, g), -1.0, 1e-15);
  }
  EXPECT_NEAR(ChosenTarget(0, 20, 0.95), -12.830281551829, 1e-9);
  EXPECT_NEAR(ChosenTarget(0, 20, 0.95), Summation(20, 0.95), 1e-12);
}

TEST(ChosenTargetTest, MatchesSummationOnGrid) {
  for (double g : {0.9, 0.95, 0.98, 1.0}) {
    for (int n = 1; n <= 60; ++n) {
      EXPECT_NEAR(ChosenTarget(0, n, g), Summation(n, g), 1e-9);
      EXPECT_NEAR(ChosenTarget(7, 7 + n, g), Summation(n, g), 1e-9);
    }
  }
}

TEST(ChosenTargetTest, MonotoneInStepIndex) {
  for (double g : {0.9, 0.98, 1.0}) {
    for (int l = 0; l + 1 < 40; ++l) {
      EXPECT_LT(ChosenTarget(l, 40, g), ChosenTarget(l + 1, 40, g));
    }
  }
}

TEST(ChosenTargetTest, ContinuousAtUndiscountedLimit) {
  const double g = 1.0 - 1e-9;
  EXPECT_NEAR(ChosenTarget(0, 1, g), -1.0, 1e-15);
  EXPECT_NEAR(ChosenTarget(0, 2, g), -2.0, 1e-9 + 1e-15);
  for (int n = 1; n <= 60; ++n) {
    // 1 + g + ... + g^(n-1) differs from n by at most (1 - g) n (n - 1) / 2.
    const double bound = (1.0 - g) * n * (n - 1) / 2.0 + 1e-12;
    EXPECT_NEAR(ChosenTarget(0, n, g), -static_cast<double>(n), bound);
    EXPECT_GE(ChosenTarget(0, n, g), -static_cast<double>(n));
  }
}

TEST(ChosenTargetTest, RejectsBadArguments) {
  EXPECT_THROW(ChosenTarget(5, 5, 0.9), std::invalid_argument);
  EXPECT_THROW(ChosenTarget(-1, 5, 0.9), std::invalid_argument);
  EXPECT_THROW(ChosenTarget(0, 5, 0.0), std::invalid_argument);
  EXPECT_THROW(ChosenTarget(0, 5, 1.5), std::invalid_argument);
}

TEST(UnchosenTargetTest, ClosedFormExamples) {
  EXPECT_EQ(*UnchosenTarget(5, 10, 4, 1.0, -3.0, -5.0), -9.0);
  EXPECT_FALSE(UnchosenTarget(5, 10, 4, 1.0, -10.0, -5.0).has_value());
  const double chosen = ChosenTarget(5, 10, 0.95);
  const auto at_boundary = UnchosenTarget(5, 10, 4, 0.95, chosen, chosen);
  ASSERT_TRUE(at_boundary.has_value());
  EXPECT_NEAR(*at_boundary, -(1 - std::pow(0.95, 9)) / 0.05, 1e-12);
  EXPECT_NEAR(*at_boundary, -7.395011805508, 1e-9);
  EXPECT_THROW(UnchosenTarget(0, 5, 0, 0.9, 0.0, -1.0), std::invalid_argument);
}

TEST(UnchosenTargetTest, MarginOrderingOnGrid) {
  for (double g : {0.7, 0.9, 0.95, 0.98, 1.0}) {
    for (int n = 1; n <= 60; ++n) {
      const double chosen = ChosenTarget(0, n, g);
      for (int k = 1; k <= 8; ++k) {
        const auto fired = UnchosenTarget(0, n, k, g, chosen + 1.0, chosen);
        ASSERT_TRUE(fired.has_value());
        EXPECT_LT(*fired, chosen) << g << " " << n << " " << k;
        EXPECT_NEAR(*fired, Summation(n + k, g), 1e-9);
      }
    }
  }
}

TEST(DatasetTest, HandWorkedTwoStepPlan) {
  rrt::Plan plan = ToyPlan(2, 1);
  plan.actions = {Action::kPushPosX, Action::kPushNegY};
  const std::vector<rrt::Plan> plans = {plan};
  nn::Matrix features(2, nn::kReferenceFeatureDim);
  nn::Matrix q(2, 6);
  const double row0[6] = {-1.0, -1.9, -3.0, -1.95, 0.0, -1.89};
  const double row1[6] = {-1.0, -2.0, -0.5, -5.0, -1.0000001, -0.99};
  std::copy(row0, row0 + 6, q.row(0));
  std::copy(row1, row1 + 6, q.row(1));
  const auto rows = BuildDatasetFromPredictions(plans, features, q, 0.9, 4);
  ASSERT_EQ(rows.size(), 2u);

  // l = 0: chosen -(1 + 0.9); margin -(1 - 0.9^6) / 0.1.
  EXPECT_EQ(rows[0].chosen, 0);
  const std::array<std::uint8_t, 6> mask0 = {1, 1, 0, 0, 1, 1};
  EXPECT_EQ(rows[0].mask, mask0);
  EXPECT_NEAR(rows[0].target[0], -1.9, 1e-12);
  for (int a : {1, 4, 5}) EXPECT_NEAR(rows[0].target[a], -4.68559, 1e-12);

  // l = 1: chosen -1; margin -(1 - 0.9^5) / 0.1.
  EXPECT_EQ(rows[1].chosen, 3);
  const std::array<std::uint8_t, 6> mask1 = {1, 0, 1, 1, 0, 1};
  EXPECT_EQ(rows[1].mask, mask1);
  EXPECT_NEAR(rows[1].target[3], -1.0, 1e-12);
  for (int a : {0, 2, 5}) EXPECT_NEAR(rows[1].target[a], -4.0951, 1e-12);
}

TEST(DatasetTest, RowCountsAndVeryLowPredictions) {
  std::vector<rrt::Plan> plans = {ToyPlan(3, 2), ToyPlan(7, 3), ToyPlan(1, 4)};
  // A linear net with large negative biases rates every action very low.
  nn::NetParams low(nn::NetArchitecture{nn::kReferenceFeatureDim, {}, 6});
  for (double& b : low.bias(0)) b = -1e6;
  const auto rows = BuildDataset(plans, low, 0.98, 4);
  ASSERT_EQ(rows.size(), 11u);
  for (const TargetRow& r : rows) {
    for (int a = 0; a < 6; ++a) EXPECT_EQ(r.mask[a], a == r.chosen ? 1 : 0);
    EXPECT_EQ(r.features.size(), 34u);
  }
  EXPECT_EQ(rows[3].features,
            nn::EncodeFeatures(plans[1].states[0], plans[1].task.goals, {}));
  EXPECT_NEAR(rows[3].target[rows[3].chosen], ChosenTarget(0, 7, 0.98), 0);
}

TEST(TrainerTest, ZeroEpochsKeepsInitialParams) {
  const std::vector<rrt::Plan> plans = {ToyPlan(4, 5)};
  ImitationConfig config;
  config.epochs = 0;
  config.hidden = {8};
  const nn::NetParams init =
      nn::NetParams::HeUniform({nn::kReferenceFeatureDim, {8}, 6}, 3);
  const ImitationResult r = TrainImitation(plans, config, 1, &init);
  EXPECT_EQ(r.params, init);
  EXPECT_TRUE(r.curve.empty());
  EXPECT_THROW(TrainImitation({}, config, 1), std::invalid_argument);
}

TEST(TrainerTest, OverfitsOnePlan) {
  const env::Model model{physics::ReferenceSpecs(3),
                         physics::DefaultSimConfig(), {}};
  env::TaskInstance t;
  t.specs = model.specs;
  t.initial.robot = {-0.08, 0.0, 0.0};
  t.initial.objects = {{0.0, 0.0, 0.0}, {-0.3, 0.3, 0.0}, {0.3, -0.3, 0.0}};
  t.goals = {{{0.15, 0.0}, 0.06}, {{-0.3, 0.3}, 0.06}, {{0.3, -0.3}, 0.06}};
  rrt::RrtConfig rc;
  rc.max_nodes = 20000;
  const auto planned = rrt::PlanTask(t, model, rc, 3);
  ASSERT_TRUE(planned.plan.has_value());
  const std::vector<rrt::Plan> plans = {*planned.plan};

  ImitationConfig config;
  config.epochs = 12000;
  config.hidden = {64, 64};
  config.lr = 1e-3;
  config.l2 = 0.0;
  config.batch_size = 16;
  const ImitationResult r = TrainImitation(plans, config, 11);
  EXPECT_EQ(r.val_plans, 0);
  EXPECT_EQ(r.train_plans, 1);
  EXPECT_EQ(r.best_epoch, static_cast<int>(r.curve.size()));
  const rrt::Plan& p = plans[0];
  for (int l = 0; l < p.length(); ++l) {
    const auto q = nn::Forward(
        r.params, nn::EncodeFeatures(p.states[l], p.task.goals, {}));
    EXPECT_NEAR(q[ActionIndex(p.actions[l])],
                ChosenTarget(l, p.length(), config.gamma), 0.1)
        << "step " << l;
  }
}

TEST(TrainerTest, DeterministicWithValidationSplitAndCurve) {
  std::vector<rrt::Plan> plans;
  for (int i = 0; i < 10; ++i) plans.push_back(ToyPlan(5 + i, 100 + i));
  ImitationConfig config;
  config.epochs = 6;
  config.hidden = {16};
  config.patience = 3;
  std::vector<int> seen;
  const ImitationResult a = TrainImitation(
      plans, config, 4, nullptr,
      [&](const EpochLog& e) { seen.push_back(e.epoch); });
  const ImitationResult b = TrainImitation(plans, config, 4);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.val_plans, 1);
  EXPECT_EQ(a.train_plans, 9);
  ASSERT_EQ(seen.size(), a.curve.size());
  for (size_t i = 0; i < a.curve.size(); ++i) {
    EXPECT_EQ(a.curve[i].train_loss, b.curve[i].train_loss);
    EXPECT_TRUE(std::isfinite(a.curve[i].val_loss));
  }
  // The returned params are those of the best validation epoch.
  double best = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  for (const EpochLog& e : a.curve) {
    if (e.val_loss < best) {
      best = e.val_loss;
      best_epoch = e.epoch;
    }
  }
  EXPECT_EQ(a.best_epoch, best_epoch);

  const auto path = std::filesystem::temp_directory_path() / "cp_curve.csv";
  WriteLossCurve(a.curve, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "epoch,train_loss,val_loss");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, static_cast<int>(a.curve.size()));
  std::filesystem::remove(path);
}

TEST(TrainerTest, DivergenceIsReported) {
  std::vector<rrt::Plan> plans = {ToyPlan(6, 8), ToyPlan(6, 9)};
  ImitationConfig config;
  config.epochs = 5;
  config.hidden = {16};
  // Activations overflow to infinity on the first forward pass.
  nn::NetParams huge(nn::NetArchitecture{nn::kReferenceFeatureDim, {16}, 6});
  for (double& v : huge.data()) v = 1e110;
  EXPECT_THROW(TrainImitation(plans, config, 1, &huge),
               TrainingDivergenceError);
}

}  // namespace
}  // namespace clutterpush::imitation

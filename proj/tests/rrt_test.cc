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
#include <limits>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>
#include <omp.h>

#include "clutterpush/env/mdp.h"
#include "clutterpush/env/task.h"
#include "clutterpush/errors.h"
#include "clutterpush/physics/stepper.h"
#include "clutterpush/rrt/plan_log.h"
#include "clutterpush/rrt/planner.h"

namespace clutterpush::rrt {
namespace {

using env::GoalRegion;

env::Model ReferenceModel() {
  return env::Model{.specs = physics::ReferenceSpecs(3),
                    .sim = physics::DefaultSimConfig(),
                    .workspace = {}};
}

WorldState RandomState(Rng& rng) {
  WorldState s;
  auto pose = [&] {
    return physics::Pose2D{Uniform(rng, -0.3, 0.3), Uniform(rng, -0.3, 0.3),
                           Uniform(rng, -3.0, 3.0)};
  };
  s.robot = pose();
  for (int i = 0; i < 3; ++i) s.objects.push_back(pose());
  return s;
}

// Straightforward distance: no flattening, explicit wrapped angle.
double OracleDistance(const WorldState& a, const WorldState& b,
                      const DistanceMetric& m) {
  double sq = 0.0, ang = 0.0;
  for (int i = 0; i < a.num_bodies(); ++i) {
    const double w = (i - 1 == m.weighted_object) ? m.target_weight : 1.0;
    sq += std::pow(w * (a.body(i).x - b.body(i).x), 2) +
          std::pow(w * (a.body(i).y - b.body(i).y), 2);
    ang += std::abs(std::remainder(a.body(i).theta - b.body(i).theta,
                                   2 * std::numbers::pi));
  }
  return std::sqrt(sq) + m.w_theta * ang;
}

TaskInstance CorridorTask() {
  TaskInstance t;
  t.specs = physics::ReferenceSpecs(3);
  t.initial.robot = {-0.08, 0.0, 0.0};
  t.initial.objects = {{0.0, 0.0, 0.0}, {-0.3, 0.3, 0.0}, {0.3, -0.3, 0.0}};
  t.goals = {{{0.15, 0.0}, 0.06}, {{-0.3, 0.3}, 0.06}, {{0.3, -0.3}, 0.06}};
  return t;
}

TEST(DistanceTest, MatchesOracle) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const WorldState a = RandomState(rng), b = RandomState(rng);
    const DistanceMetric plain;
    const DistanceMetric weighted{.weighted_object = 0, .target_weight = 3.0};
    EXPECT_NEAR(plain(a, b), OracleDistance(a, b, plain), 1e-12);
    EXPECT_NEAR(weighted(a, b), OracleDistance(a, b, weighted), 1e-12);
    EXPECT_EQ(plain(a, a), 0.0);
  }
}

TEST(NearestTest, SingleNodeAndExactMatch) {
  Rng rng(2);
  const WorldState root = RandomState(rng);
  Tree tree(root);
  EXPECT_EQ(tree.Nearest(RandomState(rng), DistanceMetric{}), 0);
  std::vector<WorldState> states;
  for (int i = 0; i < 20; ++i) {
    states.push_back(RandomState(rng));
    tree.Add(TreeNode{.state = states.back(), .parent = 0, .depth = 1});
  }
  EXPECT_EQ(tree.Nearest(states[7], DistanceMetric{}), 8);
  EXPECT_EQ(tree.Nearest(states[7], DistanceMetric{}, 1), 0);
  EXPECT_EQ(tree.Nearest(states[7], DistanceMetric{}, 0), -1);
}

TEST(NearestTest, MatchesLinearScanIncludingTies) {
  omp_set_num_threads(4);
  for (int size : {100, 6000}) {
    Rng rng(size);
    Tree tree(RandomState(rng));
    std::vector<WorldState> states = {tree.node(0).state};
    for (int i = 1; i < size; ++i) {
      // Duplicates exercise the lowest-id tie break.
      states.push_back(i % 10 == 0 ? states[i / 2] : RandomState(rng));
      tree.Add(TreeNode{.state = states.back(), .parent = 0, .depth = 1});
    }
    const DistanceMetric m{.weighted_object = 1, .target_weight = 3.0};
    for (int q = 0; q < 100; ++q) {
      const WorldState sample =
          q % 4 == 0 ? states[UniformInt(rng, 0, size - 1)] : RandomState(rng);
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (int i = 0; i < size; ++i) {
        const double d = m(states[i], sample);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      EXPECT_EQ(tree.Nearest(sample, m), best);
    }
  }
  omp_set_num_threads(1);
}

TEST(ExtendTest, FreeSpacePushTowardPlusX) {
  const env::Model model = ReferenceModel();
  WorldState root;
  root.objects = {{0.3, 0.3, 0.0}, {-0.3, 0.3, 0.0}, {0.3, -0.3, 0.0}};
  Tree tree(root);
  WorldState sample = root;
  sample.robot.x = 0.2;
  Rng rng(0);
  const auto child = Extend(tree, 0, sample, model, rng, 6, DistanceMetric{});
  ASSERT_TRUE(child.has_value());
  EXPECT_EQ(*child->action_from_parent, Action::kPushPosX);
  EXPECT_EQ(child->parent, 0);
  EXPECT_EQ(child->depth, 1);
  EXPECT_EQ(child->state, model.Apply(root, Action::kPushPosX));
}

TEST(ExtendTest, SingleActionChildIsItsTransition) {
  const env::Model model = ReferenceModel();
  Rng task_rng(4);
  const TaskInstance t = env::SampleTask(task_rng);
  Tree tree(t.initial);
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const auto child =
        Extend(tree, 0, RandomState(rng), model, rng, 1, DistanceMetric{});
    ASSERT_TRUE(child.has_value());
    EXPECT_EQ(child->state,
              model.Apply(t.initial, *child->action_from_parent));
  }
}

TEST(ExtendTest, OffTableChildrenAreDiscarded) {
  const env::Model model = ReferenceModel();
  WorldState root;
  root.robot = {0.49, 0.0, 0.0};
  root.objects = {{0.0, 0.3, 0.0}, {-0.3, 0.3, 0.0}, {0.3, -0.3, 0.0}};
  Tree tree(root);
  WorldState sample = root;
  sample.robot.x = 0.9;
  Rng rng(0);
  const auto child = Extend(tree, 0, sample, model, rng, 6, DistanceMetric{});
  ASSERT_TRUE(child.has_value());
  EXPECT_NE(*child->action_from_parent, Action::kPushPosX);
  EXPECT_TRUE(env::InWorkspace(child->state, model.workspace));
}

TEST(PlanTest, AlreadySolvedGivesEmptyPlan) {
  TaskInstance t = CorridorTask();
  t.goals[0].center = {0.0, 0.0};
  const PlanResult r = PlanTask(t, ReferenceModel(), RrtConfig{}, 1);
  ASSERT_TRUE(r.plan.has_value());
  EXPECT_EQ(r.plan->length(), 0);
  EXPECT_EQ(r.plan->final_state, t.initial);
}

TEST(PlanTest, CorridorPlanReplaysToGoal) {
  const env::Model model = ReferenceModel();
  RrtConfig config;
  config.max_nodes = 20000;
  const PlanResult r = PlanTask(CorridorTask(), model, config, 3);
  ASSERT_TRUE(r.plan.has_value());
  const auto dev = ReplayDeviation(*r.plan, model);
  ASSERT_TRUE(dev.has_value());
  EXPECT_LE(*dev, 1e-9);
  EXPECT_TRUE(env::IsGoal(r.plan->final_state, r.plan->task.goals));
  EXPECT_LE(r.plan->length(), config.max_depth);

  const PlanResult again = PlanTask(CorridorTask(), model, config, 3);
  ASSERT_TRUE(again.plan.has_value());
  EXPECT_EQ(again.plan->actions, r.plan->actions);
  EXPECT_EQ(again.nodes, r.nodes);
}

TEST(PlanTest, StarvedBudgetFails) {
  RrtConfig config;
  config.max_nodes = 1;
  const PlanResult r = PlanTask(CorridorTask(), ReferenceModel(), config, 3);
  EXPECT_FALSE(r.plan.has_value());
  EXPECT_EQ(r.nodes, 1);
}

TEST(PlanTest, RandomTasksGiveValidPlans) {
  const env::Model model = ReferenceModel();
  RrtConfig config;
  config.max_nodes = 20000;
  int solved = 0;
  for (int i = 0; i < 4; ++i) {
    Rng rng(DeriveSeed(17, "task", i));
    const TaskInstance t = env::SampleTask(rng);
    const PlanResult r = PlanTask(t, model, config, DeriveSeed(17, "plan", i));
    if (!r.plan) continue;
    ++solved;
    const auto dev = ReplayDeviation(*r.plan, model);
    ASSERT_TRUE(dev.has_value());
    EXPECT_LE(*dev, 1e-9);
    // Tree consistency along the plan.
    for (int l = 0; l < r.plan->length(); ++l) {
      const WorldState next = l + 1 < r.plan->length()
                                  ? r.plan->states[l + 1]
                                  : r.plan->final_state;
      EXPECT_EQ(model.Apply(r.plan->states[l], r.plan->actions[l]), next);
    }
  }
  EXPECT_GE(solved, 2);
}

TEST(PlanLogTest, JsonRoundTripAndTransitions) {
  const env::Model model = ReferenceModel();
  RrtConfig config;
  config.max_nodes = 20000;
  const PlanResult r = PlanTask(CorridorTask(), model, config, 3);
  ASSERT_TRUE(r.plan.has_value());
  const env::Json j = PlanToJson(*r.plan, model.sim.Digest());
  EXPECT_EQ(j.at("sim_digest"), model.sim.Digest());
  const Plan back = PlanFromJson(j);
  EXPECT_EQ(back.actions, r.plan->actions);
  EXPECT_EQ(back.states, r.plan->states);
  EXPECT_EQ(back.final_state, r.plan->final_state);
  EXPECT_EQ(back.task, r.plan->task);
  EXPECT_EQ(back.seed, r.plan->seed);

  const auto ts = PlanTransitions(back);
  ASSERT_EQ(static_cast<int>(ts.size()), back.length());
  for (size_t l = 0; l < ts.size(); ++l) {
    EXPECT_EQ(ts[l].r, -1.0);
    EXPECT_EQ(ts[l].terminal, l + 1 == ts.size());
    EXPECT_EQ(ts[l].a, back.actions[l]);
  }
  EXPECT_THROW(PlanFromJson(env::Json::object()), FormatError);
}

}  // namespace
}  // namespace clutterpush::rrt

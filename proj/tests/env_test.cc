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
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "clutterpush/env/mdp.h"
#include "clutterpush/env/returns.h"
#include "clutterpush/env/serialization.h"
#include "clutterpush/env/symmetry.h"
#include "clutterpush/env/task.h"
#include "clutterpush/errors.h"
#include "clutterpush/physics/collide.h"
#include "clutterpush/physics/stepper.h"

namespace clutterpush::env {
namespace {

using physics::DefaultSimConfig;

std::vector<GoalRegion> GoalsAt(const WorldState& s) {
  std::vector<GoalRegion> goals;
  for (const Pose2D& p : s.objects) goals.push_back({p.position(), 0.06});
  return goals;
}

TEST(ActionTest, IndexMappingIsFixed) {
  EXPECT_EQ(kNumActions, 6);
  for (int i = 0; i < kNumActions; ++i) {
    EXPECT_EQ(ActionIndex(kAllActions[i]), i);
    EXPECT_EQ(*ActionFromIndex(i), kAllActions[i]);
  }
  EXPECT_EQ(ActionName(Action::kPushPosX), "PUSH_POS_X");
  EXPECT_EQ(ActionName(Action::kRotCcw), "ROT_CCW");
  EXPECT_FALSE(ActionFromIndex(6).has_value());
  EXPECT_FALSE(ActionFromIndex(-1).has_value());
}

TEST(GoalTest, BoundaryInclusive) {
  WorldState s;
  s.objects = {{0.0, 0.0, 0.0}};
  std::vector<GoalRegion> goals = {{{0.06, 0.0}, 0.06}};
  EXPECT_TRUE(IsGoal(s, goals));
  goals[0].center.x = 0.06 + 1e-6;
  EXPECT_FALSE(IsGoal(s, goals));
  goals[0].center = {0.0, 0.0};
  EXPECT_TRUE(IsGoal(s, goals));
}

TEST(GoalTest, CountMismatchThrows) {
  WorldState s;
  s.objects = {{0.0, 0.0, 0.0}, {0.1, 0.0, 0.0}};
  std::vector<GoalRegion> goals = {{{0.0, 0.0}, 0.06}};
  EXPECT_THROW(IsGoal(s, goals), StateValidityError);
}

TEST(GoalTest, OrientationIgnoredAndMonotoneTowardGoal) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    WorldState s;
    std::vector<GoalRegion> goals;
    for (int i = 0; i < 3; ++i) {
      s.objects.push_back(
          {Uniform(rng, -0.2, 0.2), Uniform(rng, -0.2, 0.2), 0.0});
      goals.push_back({{Uniform(rng, -0.2, 0.2), Uniform(rng, -0.2, 0.2)},
                       Uniform(rng, 0.02, 0.3)});
    }
    const bool before = IsGoal(s, goals);
    WorldState closer = s;
    const int i = UniformInt(rng, 0, 2);
    const double f = Uniform(rng, 0.0, 1.0);
    closer.objects[i].x += f * (goals[i].center.x - s.objects[i].x);
    closer.objects[i].y += f * (goals[i].center.y - s.objects[i].y);
    closer.objects[i].theta = Uniform(rng, -3.0, 3.0);
    if (before) {
      EXPECT_TRUE(IsGoal(closer, goals));
    }
  }
}

TEST(TransitionTest, RewardAndGoalSelfLoop) {
  const auto specs = physics::ReferenceSpecs(1);
  WorldState s;
  s.objects = {{0.2, 0.2, 0.0}};
  const StepOutcome out =
      TransitionFn(s, Action::kPushPosX, specs, DefaultSimConfig());
  EXPECT_EQ(out.reward, -1.0);
  EXPECT_NEAR(out.next.robot.x, 0.05, 1e-3);

  const auto goals = GoalsAt(s);
  const StepOutcome loop =
      TransitionFn(s, Action::kPushPosX, goals, specs, DefaultSimConfig());
  EXPECT_EQ(loop.reward, 0.0);
  EXPECT_EQ(loop.next, s);
}

TEST(WorkspaceTest, ContainsEdgesAndRejectsOutside) {
  const Workspace ws;
  EXPECT_TRUE(ws.Contains({0.5, -0.5}));
  EXPECT_FALSE(ws.Contains({0.5000001, 0.0}));
  WorldState s;
  s.objects = {{0.0, 0.6, 0.0}};
  EXPECT_FALSE(InWorkspace(s, ws));
  s.objects[0].y = 0.4;
  EXPECT_TRUE(InWorkspace(s, ws));
}

TEST(SampleTaskTest, SameSeedSameTask) {
  Rng a(0), b(0);
  EXPECT_EQ(SampleTask(a), SampleTask(b));
}

TEST(SampleTaskTest, ThousandTasksCollisionFreeWithPinnedGoals) {
  Rng rng(42);
  const TaskSamplerConfig config;
  for (int n = 0; n < 1000; ++n) {
    const TaskInstance t = SampleTask(rng, config);
    ASSERT_EQ(t.goals.size(), t.initial.objects.size());
    ASSERT_EQ(t.specs.size(), t.initial.objects.size() + 1);
    for (int i = 0; i < t.initial.num_bodies(); ++i) {
      for (int j = i + 1; j < t.initial.num_bodies(); ++j) {
        EXPECT_FALSE(physics::Collide(
                         physics::BodyRect(t.initial.body(i), t.specs[i]),
                         physics::BodyRect(t.initial.body(j), t.specs[j]))
                         .has_value());
      }
    }
    for (size_t i = 0; i < t.goals.size(); ++i) {
      EXPECT_EQ(t.goals[i].radius, 0.06);
      if (static_cast<int>(i) == t.target) {
        const double d =
            physics::Length(t.goals[i].center - t.initial.objects[i].position());
        EXPECT_GE(d, config.min_target_goal_distance);
        EXPECT_LE(d, config.max_target_goal_distance);
        EXPECT_TRUE(config.workspace.Contains(t.goals[i].center));
      } else {
        EXPECT_EQ(t.goals[i].center, t.initial.objects[i].position());
      }
    }
  }
}

TEST(SampleTaskTest, ExhaustedBudgetThrows) {
  TaskSamplerConfig config;
  config.num_objects = 200;
  config.max_attempts = 1000;
  Rng rng(1);
  EXPECT_THROW(SampleTask(rng, config), SamplingError);
  TaskSamplerConfig empty;
  empty.min_target_goal_distance = 0.3;
  empty.max_target_goal_distance = 0.2;
  EXPECT_THROW(SampleTask(rng, empty), SamplingError);
}

TEST(PerturbTest, NoneIsIdentityAndDrawsNothing) {
  const auto specs = physics::ReferenceSpecs(3);
  Rng rng(9), untouched(9);
  EXPECT_EQ(PerturbParams(specs, UncertaintyLevel::kNone, rng), specs);
  EXPECT_EQ(rng(), untouched());
}

double EmpiricalSd(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (v.size() - 1));
}

TEST(PerturbTest, EmpiricalSpreadMatchesLevel) {
  BodySpec box = physics::ReferenceBox();
  box.density = 1.0;
  box.friction = 0.3;
  const std::vector<BodySpec> specs = {physics::ReferenceEndEffector(), box};
  Rng rng(77);
  std::vector<double> density, friction, hx;
  for (int i = 0; i < 10000; ++i) {
    const auto low = PerturbParams(specs, UncertaintyLevel::kLow, rng);
    density.push_back(low[1].density);
    EXPECT_EQ(low[0], specs[0]);
    const auto high = PerturbParams(specs, UncertaintyLevel::kHigh, rng);
    friction.push_back(high[1].friction);
    hx.push_back(high[1].half_extents.x / box.half_extents.x);
    EXPECT_GE(high[1].friction, 0.1 * 0.3);
  }
  EXPECT_NEAR(EmpiricalSd(density), 0.1, 0.01);
  EXPECT_NEAR(EmpiricalSd(friction), 0.09, 0.009);
  EXPECT_NEAR(EmpiricalSd(hx), 0.3, 0.03);
}

TEST(UncertaintyTest, ScalesAndNames) {
  EXPECT_EQ(UncertaintyScale(UncertaintyLevel::kNone), 0.0);
  EXPECT_EQ(UncertaintyScale(UncertaintyLevel::kLow), 0.1);
  EXPECT_EQ(UncertaintyScale(UncertaintyLevel::kMed), 0.2);
  EXPECT_EQ(UncertaintyScale(UncertaintyLevel::kHigh), 0.3);
  for (UncertaintyLevel l : kAllUncertaintyLevels) {
    EXPECT_EQ(*ParseUncertainty(UncertaintyName(l)), l);
  }
  EXPECT_FALSE(ParseUncertainty("extreme").has_value());
}

TEST(EpisodeTest, InitialGoalSucceedsWithZeroSteps) {
  Rng rng(5);
  TaskInstance t = SampleTask(rng);
  t.goals = GoalsAt(t.initial);
  int calls = 0;
  const Policy p = [&](const WorldState&) {
    ++calls;
    return Action::kPushPosX;
  };
  const EpisodeResult r =
      RunEpisode(p, t, t.specs, DefaultSimConfig(), Workspace{});
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.steps, 0);
  EXPECT_EQ(calls, 0);
}

TEST(EpisodeTest, RotatingOnlyHitsTheCap) {
  Rng rng(6);
  const TaskInstance t = SampleTask(rng);
  const Policy p = [](const WorldState&) { return Action::kRotCw; };
  const EpisodeResult r =
      RunEpisode(p, t, t.specs, DefaultSimConfig(), Workspace{}, 40);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.steps, 40);
  EXPECT_EQ(r.end, EpisodeEnd::kActionCap);
  EXPECT_FALSE(r.transitions.back().terminal);
  // Undiscounted return equals minus the number of steps.
  double ret = 0.0;
  for (const Transition& tr : r.transitions) ret += tr.r;
  EXPECT_EQ(ret, -40.0);
  EXPECT_THROW(RunEpisode(p, t, t.specs, DefaultSimConfig(), Workspace{}, 0),
               StateValidityError);
}

TEST(EpisodeTest, ReproducibleAndTerminalIffGoal) {
  Rng rng(8);
  const TaskInstance t = SampleTask(rng);
  auto make = [] {
    auto r = std::make_shared<Rng>(123);
    return Policy([r](const WorldState&) {
      return kAllActions[UniformInt(*r, 0, kNumActions - 1)];
    });
  };
  const EpisodeResult a =
      RunEpisode(make(), t, t.specs, DefaultSimConfig(), Workspace{});
  const EpisodeResult b =
      RunEpisode(make(), t, t.specs, DefaultSimConfig(), Workspace{});
  ASSERT_EQ(a.steps, b.steps);
  EXPECT_EQ(a.final_state, b.final_state);
  for (size_t i = 0; i < a.transitions.size(); ++i) {
    EXPECT_EQ(a.transitions[i].s_next, b.transitions[i].s_next);
    EXPECT_EQ(a.transitions[i].r, -1.0);
    EXPECT_EQ(a.transitions[i].terminal, IsGoal(a.transitions[i].s_next, t.goals));
  }
}

TEST(EpisodeTest, LeavingTheTableFails) {
  TaskInstance t;
  t.specs = physics::ReferenceSpecs(1);
  t.initial.robot = {0.45, 0.0, 0.0};
  t.initial.objects = {{-0.2, 0.0, 0.0}};
  t.goals = {{{0.2, 0.2}, 0.06}};
  const Policy p = [](const WorldState&) { return Action::kPushPosX; };
  const EpisodeResult r =
      RunEpisode(p, t, t.specs, DefaultSimConfig(), Workspace{});
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.end, EpisodeEnd::kOutOfWorkspace);
  EXPECT_EQ(r.steps, 2);
  EXPECT_TRUE(r.transitions.back().out_of_bounds);
}

TEST(ReturnsTest, ConstantRewardReturnMatchesSummation) {
  for (double gamma : {0.9, 0.95, 0.98, 1.0}) {
    for (int n = 0; n <= 60; ++n) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += std::pow(gamma, k) * -1.0;
      EXPECT_NEAR(ConstantRewardReturn(n, gamma, -1.0), sum, 1e-9);
    }
  }
  EXPECT_NEAR(FailureValue(0.98, 40), -50.0, 1e-9);
  EXPECT_DOUBLE_EQ(FailureValue(1.0, 40), -40.0);
}

TEST(SerializationTest, RoundTripsTasksAndTransitions) {
  Rng rng(10);
  const TaskInstance t = SampleTask(rng);
  EXPECT_EQ(TaskFromJson(ToJson(t)), t);
  const Policy p = [](const WorldState&) { return Action::kPushNegY; };
  const EpisodeResult r =
      RunEpisode(p, t, t.specs, DefaultSimConfig(), Workspace{}, 3);
  const auto dir = std::filesystem::temp_directory_path() / "cp_env_test";
  std::filesystem::create_directories(dir);
  std::vector<Json> lines;
  for (const Transition& tr : r.transitions) lines.push_back(ToJson(tr));
  WriteJsonLines(dir / "t.jsonl", lines);
  const auto back = ReadJsonLines(dir / "t.jsonl");
  ASSERT_EQ(back.size(), r.transitions.size());
  for (size_t i = 0; i < back.size(); ++i) {
    const Transition tr = TransitionFromJson(back[i]);
    EXPECT_EQ(tr.s, r.transitions[i].s);
    EXPECT_EQ(tr.s_next, r.transitions[i].s_next);
    EXPECT_EQ(tr.a, r.transitions[i].a);
    EXPECT_EQ(tr.goals, r.transitions[i].goals);
  }
  EXPECT_THROW(PoseFromJson(Json{{"x", 1.0}}), FormatError);
  EXPECT_THROW(TransitionFromJson(Json::parse(
                   R"({"s":{},"a":9,"r":-1,"s_next":{},"terminal":false})")),
               FormatError);
  std::filesystem::remove_all(dir);
}

TEST(SymmetryTest, GroupStructure) {
  const Vec2 p{0.3, -0.1};
  EXPECT_EQ(Transform(0, p), p);
  const Vec2 q = Transform(1, p);
  EXPECT_DOUBLE_EQ(q.x, 0.1);
  EXPECT_DOUBLE_EQ(q.y, 0.3);
  const Vec2 m = Transform(4, p);
  EXPECT_DOUBLE_EQ(m.x, -0.3);
  EXPECT_DOUBLE_EQ(m.y, -0.1);
  EXPECT_EQ(Transform(1, Action::kPushPosX), Action::kPushPosY);
  EXPECT_EQ(Transform(2, Action::kPushPosY), Action::kPushNegY);
  EXPECT_EQ(Transform(4, Action::kPushPosX), Action::kPushNegX);
  EXPECT_EQ(Transform(4, Action::kRotCw), Action::kRotCcw);
  EXPECT_EQ(Transform(3, Action::kRotCw), Action::kRotCw);
  for (int g = 0; g < kNumSymmetries; ++g) {
    bool seen[kNumActions] = {};
    for (Action a : kAllActions) seen[ActionIndex(Transform(g, a))] = true;
    for (bool s : seen) EXPECT_TRUE(s) << g;
  }
  EXPECT_THROW(Transform(8, p), std::invalid_argument);
}

// Stepping a transformed world equals transforming the stepped world.
TEST(SymmetryTest, CommutesWithTheTransition) {
  Rng rng(31);
  const auto sim = DefaultSimConfig();
  for (int trial = 0; trial < 24; ++trial) {
    const TaskInstance t = SampleTask(rng);
    WorldState s = t.initial;
    for (int k = UniformInt(rng, 0, 4); k > 0; --k) {
      s = physics::Step(s, kAllActions[UniformInt(rng, 0, 5)], t.specs, sim);
    }
    const Action a = kAllActions[trial % kNumActions];
    const WorldState next = physics::Step(s, a, t.specs, sim);
    for (int g = 1; g < kNumSymmetries; ++g) {
      const WorldState lhs =
          physics::Step(Transform(g, s), Transform(g, a), t.specs, sim);
      const WorldState rhs = Transform(g, next);
      for (int b = 0; b < lhs.num_bodies(); ++b) {
        EXPECT_NEAR(lhs.body(b).x, rhs.body(b).x, 1e-6) << trial << " " << g;
        EXPECT_NEAR(lhs.body(b).y, rhs.body(b).y, 1e-6);
        EXPECT_NEAR(physics::AngleDiff(lhs.body(b).theta, rhs.body(b).theta),
                    0.0, 1e-6);
      }
      EXPECT_EQ(IsGoal(lhs, Transform(g, t.goals)), IsGoal(next, t.goals));
    }
  }
}

}  // namespace
}  // namespace clutterpush::env

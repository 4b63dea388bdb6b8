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

#include "clutterpush/env/mdp.h"

#include <cmath>
#include <string>

#include "clutterpush/errors.h"
#include "clutterpush/physics/stepper.h"

namespace clutterpush::env {

StepOutcome TransitionFn(const WorldState& state, Action action,
                         std::span<const BodySpec> specs,
                         const SimConfig& config) {
  return StepOutcome{.next = physics::Step(state, action, specs, config),
                     .reward = kStepReward};
}

StepOutcome TransitionFn(const WorldState& state, Action action,
                         std::span<const GoalRegion> goals,
                         std::span<const BodySpec> specs,
                         const SimConfig& config) {
  if (IsGoal(state, goals)) return StepOutcome{.next = state, .reward = 0.0};
  return TransitionFn(state, action, specs, config);
}

bool IsGoal(const WorldState& state, std::span<const GoalRegion> goals) {
  if (goals.size() != state.objects.size()) {
    throw StateValidityError("goal count " + std::to_string(goals.size()) +
                             " does not match object count " +
                             std::to_string(state.objects.size()));
  }
  for (size_t i = 0; i < goals.size(); ++i) {
    const double dx = state.objects[i].x - goals[i].center.x;
    const double dy = state.objects[i].y - goals[i].center.y;
    if (std::sqrt(dx * dx + dy * dy) > goals[i].radius) return false;
  }
  return true;
}

bool InWorkspace(const WorldState& state, const Workspace& workspace) {
  if (!workspace.Contains(state.robot.position())) return false;
  for (const Pose2D& p : state.objects) {
    if (!workspace.Contains(p.position())) return false;
  }
  return true;
}

WorldState Model::Apply(const WorldState& state, Action action) const {
  return physics::Step(state, action, specs, sim);
}

EpisodeResult RunEpisode(const Policy& policy, const TaskInstance& task,
                         std::span<const BodySpec> exec_specs,
                         const SimConfig& sim, const Workspace& workspace,
                         int cap) {
  if (cap < 1) throw StateValidityError("episode cap must be at least 1");
  EpisodeResult result;
  WorldState s = task.initial;
  result.final_state = s;
  if (IsGoal(s, task.goals)) {
    result.success = true;
    result.end = EpisodeEnd::kGoal;
    return result;
  }
  for (int step = 0; step < cap; ++step) {
    const std::optional<Action> a = policy(s);
    if (!a) {
      result.end = EpisodeEnd::kPolicyStopped;
      break;
    }
    Transition t;
    t.s = s;
    t.a = *a;
    t.r = kStepReward;
    t.s_next = physics::Step(s, *a, exec_specs, sim);
    t.terminal = IsGoal(t.s_next, task.goals);
    t.out_of_bounds = !InWorkspace(t.s_next, workspace);
    t.goals = task.goals;
    s = t.s_next;
    const bool terminal = t.terminal;
    const bool oob = t.out_of_bounds;
    result.transitions.push_back(std::move(t));
    if (oob) {
      result.end = EpisodeEnd::kOutOfWorkspace;
      break;
    }
    if (terminal) {
      result.success = true;
      result.end = EpisodeEnd::kGoal;
      break;
    }
  }
  result.steps = static_cast<int>(result.transitions.size());
  result.final_state = s;
  return result;
}

}  // namespace clutterpush::env

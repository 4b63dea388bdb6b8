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

#ifndef CLUTTERPUSH_ENV_MDP_H_
#define CLUTTERPUSH_ENV_MDP_H_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "clutterpush/action.h"
#include "clutterpush/env/task.h"
#include "clutterpush/physics/sim_config.h"

namespace clutterpush::env {

using physics::SimConfig;

inline constexpr double kStepReward = -1.0;
inline constexpr int kDefaultActionCap = 40;

struct Transition {
  WorldState s;
  Action a = Action::kPushPosX;
  double r = kStepReward;
  WorldState s_next;
  bool terminal = false;        // s_next is a goal state
  bool out_of_bounds = false;   // s_next left the workspace (failed episode)
  std::vector<GoalRegion> goals;
};

struct StepOutcome {
  WorldState next;
  double reward = kStepReward;
};

// Physics transition with the constant -1 reward.
StepOutcome TransitionFn(const WorldState& state, Action action,
                         std::span<const BodySpec> specs,
                         const SimConfig& config);

// Goal-aware transition: goal states are absorbing with zero reward.
StepOutcome TransitionFn(const WorldState& state, Action action,
                         std::span<const GoalRegion> goals,
                         std::span<const BodySpec> specs,
                         const SimConfig& config);

// True iff every object's center is within (<=) its region's radius.
// Orientation is ignored. Throws StateValidityError on a count mismatch.
bool IsGoal(const WorldState& state, std::span<const GoalRegion> goals);

// All body centers lie on the table.
bool InWorkspace(const WorldState& state, const Workspace& workspace);

// The world model a controller simulates against.
struct Model {
  std::vector<BodySpec> specs;
  SimConfig sim;
  Workspace workspace;

  WorldState Apply(const WorldState& state, Action action) const;
};

// Returns nullopt to abandon the episode (e.g. an exhausted open-loop plan).
using Policy = std::function<std::optional<Action>(const WorldState&)>;

enum class EpisodeEnd { kGoal, kActionCap, kOutOfWorkspace, kPolicyStopped };

struct EpisodeResult {
  bool success = false;
  int steps = 0;
  EpisodeEnd end = EpisodeEnd::kActionCap;
  std::vector<Transition> transitions;
  WorldState final_state;
};

// Closed-loop execution on the world given by `exec_specs`: observe, act,
// observe, until the goal is reached, `cap` actions were taken, a body left
// the workspace, or the policy gave up.
EpisodeResult RunEpisode(const Policy& policy, const TaskInstance& task,
                         std::span<const BodySpec> exec_specs,
                         const SimConfig& sim, const Workspace& workspace,
                         int cap = kDefaultActionCap);

}  // namespace clutterpush::env

#endif  // CLUTTERPUSH_ENV_MDP_H_

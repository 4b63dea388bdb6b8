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

#ifndef CLUTTERPUSH_ENV_TASK_H_
#define CLUTTERPUSH_ENV_TASK_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clutterpush/physics/world_state.h"
#include "clutterpush/random.h"

namespace clutterpush::env {

using physics::BodySpec;
using physics::Pose2D;
using physics::Vec2;
using physics::WorldState;

// Circular region an object's center must lie in.
struct GoalRegion {
  Vec2 center;
  double radius = 0.06;
  bool operator==(const GoalRegion&) const = default;
};

// Bounded square table centered at the origin. Leaving it fails an episode.
struct Workspace {
  double half_width = 0.5;

  bool Contains(Vec2 p) const {
    return p.x >= -half_width && p.x <= half_width && p.y >= -half_width &&
           p.y <= half_width;
  }
  bool operator==(const Workspace&) const = default;
};

struct TaskInstance {
  WorldState initial;
  std::vector<GoalRegion> goals;  // one per object
  std::vector<BodySpec> specs;    // end-effector first, then one per object
  int target = 0;                 // object index of the object to deliver
  bool operator==(const TaskInstance&) const = default;
};

struct TaskSamplerConfig {
  Workspace workspace;
  // Bodies and goals are drawn from [-h, h]^2 with h = sample_half_width.
  double sample_half_width = 0.25;
  int num_objects = 3;
  double goal_radius = 0.06;
  double min_target_goal_distance = 0.10;
  double max_target_goal_distance = 0.30;
  // Target goal centers keep at least this distance from every obstacle.
  double goal_obstacle_clearance = 0.10;
  int max_attempts = 100000;
};

// Rejection-samples pairwise non-colliding initial poses (end-effector and
// boxes, reference bodies), pins obstacle goals to the obstacles' initial
// positions and draws the target goal uniformly among points whose distance
// to the target lies in [min_target_goal_distance, max_target_goal_distance].
// Throws SamplingError when max_attempts is exhausted.
TaskInstance SampleTask(Rng& rng, const TaskSamplerConfig& config = {});

enum class UncertaintyLevel { kNone = 0, kLow = 1, kMed = 2, kHigh = 3 };

inline constexpr UncertaintyLevel kAllUncertaintyLevels[] = {
    UncertaintyLevel::kNone, UncertaintyLevel::kLow, UncertaintyLevel::kMed,
    UncertaintyLevel::kHigh};

// Standard deviation as a fraction of the mean: 0, 0.1, 0.2, 0.3.
double UncertaintyScale(UncertaintyLevel level);
std::string_view UncertaintyName(UncertaintyLevel level);
std::optional<UncertaintyLevel> ParseUncertainty(std::string_view name);

// Draws each box's half extents (independently per axis), density and
// friction from N(mean, (scale * mean)^2) truncated below at 0.1 * mean.
// The end-effector spec is copied unchanged. kNone returns the input and
// draws nothing from `rng`.
std::vector<BodySpec> PerturbParams(std::span<const BodySpec> specs,
                                    UncertaintyLevel level, Rng& rng);

}  // namespace clutterpush::env

#endif  // CLUTTERPUSH_ENV_TASK_H_

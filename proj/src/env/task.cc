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

#include "clutterpush/env/task.h"

#include <cmath>
#include <numbers>
#include <random>

#include "clutterpush/errors.h"
#include "clutterpush/physics/collide.h"

namespace clutterpush::env {
namespace {

Pose2D RandomPose(Rng& rng, double half_width) {
  return Pose2D{.x = Uniform(rng, -half_width, half_width),
                .y = Uniform(rng, -half_width, half_width),
                .theta = physics::NormalizeAngle(
                    Uniform(rng, -std::numbers::pi, std::numbers::pi))};
}

bool CollidesWithAny(const Pose2D& pose, const BodySpec& spec,
                     std::span<const Pose2D> placed,
                     std::span<const BodySpec> placed_specs) {
  const auto rect = physics::BodyRect(pose, spec);
  for (size_t i = 0; i < placed.size(); ++i) {
    if (physics::Collide(rect, physics::BodyRect(placed[i], placed_specs[i]))) {
      return true;
    }
  }
  return false;
}

double TruncatedGaussian(Rng& rng, double mean, double sigma) {
  std::normal_distribution<double> normal(mean, sigma);
  const double floor = 0.1 * mean;
  for (;;) {
    const double v = normal(rng);
    if (v >= floor) return v;
  }
}

}  // namespace

TaskInstance SampleTask(Rng& rng, const TaskSamplerConfig& config) {
  const int m = config.num_objects;
  if (m < 1) throw SamplingError("task needs at least one object");
  const double h = config.sample_half_width;
  if (h <= 0.0 || h > config.workspace.half_width) {
    throw SamplingError("sampling region must lie inside the workspace");
  }
  if (config.max_target_goal_distance < config.min_target_goal_distance) {
    throw SamplingError("empty range of target-goal distances");
  }
  TaskInstance task;
  task.specs = physics::ReferenceSpecs(m);
  task.target = 0;

  int attempts = 0;
  auto spend = [&] {
    if (++attempts > config.max_attempts) {
      throw SamplingError("task sampling exhausted its rejection budget");
    }
  };

  std::vector<Pose2D> placed;
  std::vector<BodySpec> placed_specs;
  placed.reserve(m + 1);
  for (int body = 0; body <= m; ++body) {
    for (;;) {
      spend();
      Pose2D p = RandomPose(rng, h);
      if (!CollidesWithAny(p, task.specs[body], placed, placed_specs)) {
        placed.push_back(p);
        placed_specs.push_back(task.specs[body]);
        break;
      }
    }
  }
  task.initial.robot = placed[0];
  task.initial.objects.assign(placed.begin() + 1, placed.end());
  task.initial.at_rest = true;

  task.goals.resize(m);
  for (int i = 0; i < m; ++i) {
    task.goals[i] = GoalRegion{.center = task.initial.objects[i].position(),
                               .radius = config.goal_radius};
  }
  const Vec2 target_start = task.initial.objects[task.target].position();
  for (;;) {
    spend();
    const Vec2 c{Uniform(rng, -h, h), Uniform(rng, -h, h)};
    const double d = physics::Length(c - target_start);
    if (d < config.min_target_goal_distance ||
        d > config.max_target_goal_distance) {
      continue;
    }
    bool clear = true;
    for (int i = 0; i < m && clear; ++i) {
      if (i == task.target) continue;
      clear = physics::Length(c - task.initial.objects[i].position()) >=
              config.goal_obstacle_clearance;
    }
    if (clear) {
      task.goals[task.target].center = c;
      break;
    }
  }
  return task;
}

double UncertaintyScale(UncertaintyLevel level) {
  switch (level) {
    case UncertaintyLevel::kNone: return 0.0;
    case UncertaintyLevel::kLow: return 0.1;
    case UncertaintyLevel::kMed: return 0.2;
    case UncertaintyLevel::kHigh: return 0.3;
  }
  return 0.0;
}

std::string_view UncertaintyName(UncertaintyLevel level) {
  switch (level) {
    case UncertaintyLevel::kNone: return "none";
    case UncertaintyLevel::kLow: return "low";
    case UncertaintyLevel::kMed: return "med";
    case UncertaintyLevel::kHigh: return "high";
  }
  return "?";
}

std::optional<UncertaintyLevel> ParseUncertainty(std::string_view name) {
  for (UncertaintyLevel l : kAllUncertaintyLevels) {
    if (UncertaintyName(l) == name) return l;
  }
  if (name == "medium") return UncertaintyLevel::kMed;
  return std::nullopt;
}

std::vector<BodySpec> PerturbParams(std::span<const BodySpec> specs,
                                    UncertaintyLevel level, Rng& rng) {
  std::vector<BodySpec> out(specs.begin(), specs.end());
  const double scale = UncertaintyScale(level);
  if (scale == 0.0) return out;
  for (BodySpec& s : out) {
    if (s.kind != physics::BodyKind::kBox) continue;
    s.half_extents.x =
        TruncatedGaussian(rng, s.half_extents.x, scale * s.half_extents.x);
    s.half_extents.y =
        TruncatedGaussian(rng, s.half_extents.y, scale * s.half_extents.y);
    s.density = TruncatedGaussian(rng, s.density, scale * s.density);
    s.friction = TruncatedGaussian(rng, s.friction, scale * s.friction);
  }
  return out;
}

}  // namespace clutterpush::env

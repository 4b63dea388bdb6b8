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

#include "clutterpush/env/symmetry.h"

#include <numbers>
#include <stdexcept>

#include "clutterpush/physics/geometry.h"

namespace clutterpush::env {
namespace {

void Check(int g) {
  if (g < 0 || g >= kNumSymmetries) {
    throw std::invalid_argument("symmetry index out of range");
  }
}

}  // namespace

Vec2 Transform(int g, Vec2 p) {
  Check(g);
  if (g >= 4) p.x = -p.x;
  for (int r = 0; r < g % 4; ++r) p = Vec2{-p.y, p.x};
  return p;
}

Pose2D Transform(int g, const Pose2D& pose) {
  const Vec2 c = Transform(g, Vec2{pose.x, pose.y});
  double theta = g >= 4 ? std::numbers::pi - pose.theta : pose.theta;
  theta += (g % 4) * (std::numbers::pi / 2);
  return Pose2D{.x = c.x, .y = c.y, .theta = physics::NormalizeAngle(theta)};
}

Action Transform(int g, Action a) {
  Check(g);
  switch (a) {
    case Action::kRotCw: return g >= 4 ? Action::kRotCcw : Action::kRotCw;
    case Action::kRotCcw: return g >= 4 ? Action::kRotCw : Action::kRotCcw;
    default: break;
  }
  Vec2 d;
  switch (a) {
    case Action::kPushPosX: d = {1, 0}; break;
    case Action::kPushNegX: d = {-1, 0}; break;
    case Action::kPushPosY: d = {0, 1}; break;
    default: d = {0, -1}; break;
  }
  d = Transform(g, d);
  if (d.x > 0.5) return Action::kPushPosX;
  if (d.x < -0.5) return Action::kPushNegX;
  return d.y > 0 ? Action::kPushPosY : Action::kPushNegY;
}

WorldState Transform(int g, const WorldState& state) {
  WorldState out = state;
  out.robot = Transform(g, state.robot);
  for (auto& o : out.objects) o = Transform(g, o);
  return out;
}

std::vector<GoalRegion> Transform(int g, const std::vector<GoalRegion>& goals) {
  std::vector<GoalRegion> out = goals;
  for (auto& goal : out) goal.center = Transform(g, goal.center);
  return out;
}

}  // namespace clutterpush::env

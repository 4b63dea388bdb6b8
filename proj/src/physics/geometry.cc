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

#include "clutterpush/physics/geometry.h"
#include "clutterpush/physics/world_state.h"

#include <cmath>
#include <string>

#include "clutterpush/errors.h"

namespace clutterpush::physics {

std::array<Vec2, 4> OrientedRect::Corners() const {
  const auto [ux, uy] = Axes();
  const Vec2 ex = ux * half_extents.x;
  const Vec2 ey = uy * half_extents.y;
  return {center + ex - ey, center + ex + ey, center - ex + ey,
          center - ex - ey};
}

bool OrientedRect::Contains(Vec2 p) const {
  const auto [ux, uy] = Axes();
  const Vec2 d = p - center;
  return std::abs(Dot(d, ux)) < half_extents.x &&
         std::abs(Dot(d, uy)) < half_extents.y;
}

void BodySpec::Validate() const {
  if (!(half_extents.x > 0.0) || !(half_extents.y > 0.0) ||
      !std::isfinite(half_extents.x) || !std::isfinite(half_extents.y)) {
    throw StateValidityError("body half extents must be positive and finite");
  }
  if (!(density > 0.0) || !std::isfinite(density)) {
    throw StateValidityError("body density must be positive and finite");
  }
  if (!(friction >= 0.0) || !std::isfinite(friction)) {
    throw StateValidityError("body friction must be non-negative and finite");
  }
}

BodySpec ReferenceEndEffector() {
  return BodySpec{.half_extents = {0.01, 0.04},
                  .density = 10.0,
                  .friction = 0.3,
                  .kind = BodyKind::kEndEffector};
}

BodySpec ReferenceBox() {
  return BodySpec{.half_extents = {0.03, 0.03},
                  .density = 1.0,
                  .friction = 0.3,
                  .kind = BodyKind::kBox};
}

std::vector<BodySpec> ReferenceSpecs(int num_boxes) {
  std::vector<BodySpec> specs;
  specs.reserve(num_boxes + 1);
  specs.push_back(ReferenceEndEffector());
  for (int i = 0; i < num_boxes; ++i) specs.push_back(ReferenceBox());
  return specs;
}

bool WorldState::AllFinite() const {
  auto finite = [](const Pose2D& p) {
    return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.theta);
  };
  if (!finite(robot)) return false;
  for (const auto& o : objects) {
    if (!finite(o)) return false;
  }
  return true;
}

OrientedRect BodyRect(const Pose2D& pose, const BodySpec& spec) {
  return OrientedRect{.center = pose.position(),
                      .angle = pose.theta,
                      .half_extents = spec.half_extents};
}

MovingWorld MovingWorld::AtRest(const WorldState& state) {
  MovingWorld w;
  w.state = state;
  w.velocities.assign(state.num_bodies(), Twist{});
  return w;
}

}  // namespace clutterpush::physics

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

#ifndef CLUTTERPUSH_PHYSICS_WORLD_STATE_H_
#define CLUTTERPUSH_PHYSICS_WORLD_STATE_H_

#include <span>
#include <vector>

#include "clutterpush/physics/geometry.h"

namespace clutterpush::physics {

enum class BodyKind { kEndEffector, kBox };

struct BodySpec {
  Vec2 half_extents;      // m
  double density = 1.0;   // kg/m^2
  double friction = 0.3;  // Coulomb coefficient
  BodyKind kind = BodyKind::kBox;

  double Mass() const { return density * 4.0 * half_extents.x * half_extents.y; }
  // Moment of inertia about the center.
  double Inertia() const {
    const double w = 2.0 * half_extents.x, h = 2.0 * half_extents.y;
    return Mass() * (w * w + h * h) / 12.0;
  }
  // Throws StateValidityError when a field is non-physical.
  void Validate() const;
  bool operator==(const BodySpec&) const = default;
};

// Reference bodies: a 2 cm x 8 cm end-effector paddle and 6 cm square boxes
// of density 1 kg/m^2 and friction 0.3.
BodySpec ReferenceEndEffector();
BodySpec ReferenceBox();
// End-effector followed by `num_boxes` reference boxes.
std::vector<BodySpec> ReferenceSpecs(int num_boxes = 3);

// At-rest planar configuration. Body index 0 is the end-effector; objects
// follow in order, so objects[i] is body i + 1.
struct WorldState {
  Pose2D robot;
  std::vector<Pose2D> objects;
  bool at_rest = true;

  int num_bodies() const { return static_cast<int>(objects.size()) + 1; }
  const Pose2D& body(int i) const { return i == 0 ? robot : objects[i - 1]; }
  Pose2D& body(int i) { return i == 0 ? robot : objects[i - 1]; }
  bool AllFinite() const;
  bool operator==(const WorldState&) const = default;
};

OrientedRect BodyRect(const Pose2D& pose, const BodySpec& spec);

struct Twist {
  Vec2 linear;          // m/s
  double angular = 0.0;  // rad/s
};

// A world in motion: poses plus one twist per body.
struct MovingWorld {
  WorldState state;
  std::vector<Twist> velocities;

  static MovingWorld AtRest(const WorldState& state);
};

}  // namespace clutterpush::physics

#endif  // CLUTTERPUSH_PHYSICS_WORLD_STATE_H_

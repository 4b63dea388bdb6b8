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

#ifndef CLUTTERPUSH_PHYSICS_COLLIDE_H_
#define CLUTTERPUSH_PHYSICS_COLLIDE_H_

#include <optional>
#include <vector>

#include "clutterpush/physics/geometry.h"

namespace clutterpush::physics {

struct ContactPoint {
  Vec2 position;
  Vec2 normal;   // unit, points from body a towards body b
  double depth;  // >= 0
};

struct ContactManifold {
  int body_a = 0;
  int body_b = 1;
  Vec2 normal;               // shared by all points
  double penetration = 0.0;  // minimum overlap over the separating axes
  int num_points = 0;        // 1 or 2
  std::array<ContactPoint, 2> points{};
};

// World-space vertices (counter-clockwise) and outward edge normals of an
// oriented rectangle; normals[i] belongs to edge vertices[i] -> [i + 1].
struct RectPolygon {
  std::array<Vec2, 4> vertices;
  std::array<Vec2, 4> normals;
  Vec2 center;
  double radius = 0.0;  // bounding circle

  static RectPolygon FromRect(const OrientedRect& r);
};

// Separating-axis test between two oriented rectangles with an incident-face
// clipped manifold of at most two points. Returns nullopt iff the rectangles
// do not overlap (touching counts as not overlapping). The normal points from
// `a` to `b`; swapping the arguments flips its sign.
std::optional<ContactManifold> Collide(const OrientedRect& a,
                                       const OrientedRect& b);
std::optional<ContactManifold> Collide(const RectPolygon& a,
                                       const RectPolygon& b);

}  // namespace clutterpush::physics

#endif  // CLUTTERPUSH_PHYSICS_COLLIDE_H_

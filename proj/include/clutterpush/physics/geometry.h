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

#ifndef CLUTTERPUSH_PHYSICS_GEOMETRY_H_
#define CLUTTERPUSH_PHYSICS_GEOMETRY_H_

#include <array>
#include <cmath>
#include <numbers>

namespace clutterpush::physics {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double Dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double Cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
// w x r for a scalar angular velocity w.
constexpr Vec2 Cross(double w, Vec2 r) { return {-w * r.y, w * r.x}; }
inline double Length(Vec2 v) { return std::hypot(v.x, v.y); }

// Maps any finite angle into (-pi, pi].
inline double NormalizeAngle(double theta) {
  double t = std::remainder(theta, 2.0 * std::numbers::pi);
  if (t <= -std::numbers::pi) t += 2.0 * std::numbers::pi;
  return t;
}

// Shortest signed difference a - b, in (-pi, pi].
inline double AngleDiff(double a, double b) { return NormalizeAngle(a - b); }

struct Pose2D {
  double x = 0.0;      // m
  double y = 0.0;      // m
  double theta = 0.0;  // rad, (-pi, pi]

  Vec2 position() const { return {x, y}; }
  bool operator==(const Pose2D&) const = default;
};

// Rectangle of half-sizes `half_extents` centered at `center`, rotated by
// `angle` about its center.
struct OrientedRect {
  Vec2 center;
  double angle = 0.0;
  Vec2 half_extents;

  // Unit local x and y axes in world coordinates.
  std::array<Vec2, 2> Axes() const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {Vec2{c, s}, Vec2{-s, c}};
  }
  // Corners in counter-clockwise order starting at local (+x, -y).
  std::array<Vec2, 4> Corners() const;
  double BoundingRadius() const { return Length(half_extents); }
  // Strict interior test.
  bool Contains(Vec2 p) const;
};

}  // namespace clutterpush::physics

#endif  // CLUTTERPUSH_PHYSICS_GEOMETRY_H_

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

#include "clutterpush/physics/collide.h"

#include <array>
#include <limits>

namespace clutterpush::physics {
namespace {

using Polygon = RectPolygon;

struct FaceQuery {
  int face = 0;
  double separation = -std::numeric_limits<double>::infinity();
};

// Largest separation of `b` from the face planes of `a`. Positive or zero
// means the face is a separating axis.
FaceQuery MaxSeparation(const Polygon& a, const Polygon& b) {
  FaceQuery best;
  for (int i = 0; i < 4; ++i) {
    const Vec2 n = a.normals[i];
    const Vec2 v = a.vertices[i];
    double min_sep = std::numeric_limits<double>::infinity();
    for (const Vec2& w : b.vertices) {
      min_sep = std::min(min_sep, Dot(n, w - v));
    }
    if (min_sep > best.separation) {
      best.separation = min_sep;
      best.face = i;
    }
  }
  return best;
}

struct ClipVertex {
  Vec2 v;
};

// Sutherland-Hodgman clip of a segment against the half-plane
// dot(normal, x) <= offset. Returns the number of output points.
int ClipSegment(std::array<ClipVertex, 2>& out,
                const std::array<ClipVertex, 2>& in, Vec2 normal,
                double offset) {
  int count = 0;
  const double d0 = Dot(normal, in[0].v) - offset;
  const double d1 = Dot(normal, in[1].v) - offset;
  if (d0 <= 0.0) out[count++] = in[0];
  if (d1 <= 0.0) out[count++] = in[1];
  if (d0 * d1 < 0.0 && count < 2) {
    const double t = d0 / (d0 - d1);
    out[count++] = ClipVertex{in[0].v + (in[1].v - in[0].v) * t};
  }
  return count;
}

}  // namespace

RectPolygon RectPolygon::FromRect(const OrientedRect& r) {
  const auto [ux, uy] = r.Axes();
  const Vec2 ex = ux * r.half_extents.x;
  const Vec2 ey = uy * r.half_extents.y;
  const Vec2 c = r.center;
  return RectPolygon{
      .vertices = {c + ex - ey, c + ex + ey, c - ex + ey, c - ex - ey},
      .normals = {ux, uy, -ux, -uy},
      .center = c,
      .radius = r.BoundingRadius()};
}

std::optional<ContactManifold> Collide(const OrientedRect& a,
                                       const OrientedRect& b) {
  const double reach = a.BoundingRadius() + b.BoundingRadius();
  const Vec2 d = b.center - a.center;
  if (Dot(d, d) >= reach * reach) return std::nullopt;
  return Collide(RectPolygon::FromRect(a), RectPolygon::FromRect(b));
}

std::optional<ContactManifold> Collide(const RectPolygon& pa,
                                       const RectPolygon& pb) {
  const double reach = pa.radius + pb.radius;
  const Vec2 d = pb.center - pa.center;
  if (Dot(d, d) >= reach * reach) return std::nullopt;

  const FaceQuery qa = MaxSeparation(pa, pb);
  if (qa.separation >= 0.0) return std::nullopt;
  const FaceQuery qb = MaxSeparation(pb, pa);
  if (qb.separation >= 0.0) return std::nullopt;

  // Prefer `a` as the reference body unless `b` is clearly better, so the
  // choice is stable under tiny perturbations.
  constexpr double kTolerance = 1e-9;
  const bool flip = qb.separation > qa.separation + kTolerance;
  const Polygon& ref = flip ? pb : pa;
  const Polygon& inc = flip ? pa : pb;
  const int ref_face = flip ? qb.face : qa.face;
  const double separation = flip ? qb.separation : qa.separation;

  const Vec2 ref_normal = ref.normals[ref_face];

  // Incident face: the one most anti-parallel to the reference normal.
  int inc_face = 0;
  double min_dot = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    const double dd = Dot(ref_normal, inc.normals[i]);
    if (dd < min_dot) {
      min_dot = dd;
      inc_face = i;
    }
  }
  const std::array<ClipVertex, 2> incident = {
      ClipVertex{inc.vertices[inc_face]},
      ClipVertex{inc.vertices[(inc_face + 1) % 4]}};

  const Vec2 v1 = ref.vertices[ref_face];
  const Vec2 v2 = ref.vertices[(ref_face + 1) % 4];
  Vec2 tangent = v2 - v1;
  tangent = tangent * (1.0 / Length(tangent));

  std::array<ClipVertex, 2> clip1{}, clip2{};
  int n1 = ClipSegment(clip1, incident, -tangent, -Dot(tangent, v1));
  int n2 = n1 == 2 ? ClipSegment(clip2, clip1, tangent, Dot(tangent, v2)) : 0;

  const Vec2 normal = flip ? -ref_normal : ref_normal;
  ContactManifold m;
  m.normal = normal;
  m.penetration = -separation;
  const double face_offset = Dot(ref_normal, v1);
  if (n2 == 2) {
    for (const ClipVertex& cv : clip2) {
      const double sep = Dot(ref_normal, cv.v) - face_offset;
      if (sep < 0.0) {
        m.points[m.num_points++] =
            ContactPoint{.position = cv.v, .normal = normal, .depth = -sep};
      }
    }
  }
  if (m.num_points == 0) {
    // Degenerate clip (corner-on-corner at the face ends): fall back to the
    // deepest incident vertex.
    Vec2 deepest = inc.vertices[0];
    double deepest_sep = std::numeric_limits<double>::infinity();
    for (const Vec2& w : inc.vertices) {
      const double sep = Dot(ref_normal, w) - face_offset;
      if (sep < deepest_sep) {
        deepest_sep = sep;
        deepest = w;
      }
    }
    m.points[m.num_points++] = ContactPoint{
        .position = deepest, .normal = normal,
        .depth = std::max(0.0, -deepest_sep)};
  }
  return m;
}

}  // namespace clutterpush::physics

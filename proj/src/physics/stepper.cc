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

#include "clutterpush/physics/stepper.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "clutterpush/errors.h"

namespace clutterpush::physics {
namespace {

// Mean distance of a uniform square's area from its center is ~0.3826 times
// the side; used for the table friction torque of a sliding box.
constexpr double kMeanRadiusFactor = 0.3826;
constexpr double kPositionBaumgarte = 0.8;
constexpr double kMaxPositionCorrection = 0.02;  // m per iteration
constexpr int kFinalProjectionIterations = 64;

struct Body {
  Vec2 position;
  double angle = 0.0;
  Vec2 velocity;
  double angular_velocity = 0.0;
  double inv_mass = 0.0;
  double inv_inertia = 0.0;
  double friction = 0.0;
  Vec2 half_extents;
  double table_decel = 0.0;      // m/s^2, 0 for the end-effector
  double table_ang_decel = 0.0;  // rad/s^2
  RectPolygon polygon;           // kept in sync with position/angle

  void UpdatePolygon() {
    polygon = RectPolygon::FromRect(OrientedRect{
        .center = position, .angle = angle, .half_extents = half_extents});
  }
  void Translate(Vec2 delta) {
    position += delta;
    for (Vec2& v : polygon.vertices) v += delta;
    polygon.center = position;
  }
};

struct SolverContact {
  int a = 0;
  int b = 0;
  double friction = 0.0;
  Vec2 normal;
  int num_points = 0;
  std::array<Vec2, 2> ra{};
  std::array<Vec2, 2> rb{};
  std::array<double, 2> normal_mass{};
  std::array<double, 2> tangent_mass{};
  std::array<double, 2> normal_impulse{};
  std::array<double, 2> tangent_impulse{};
};

void ValidateInputs(const WorldState& world, std::span<const BodySpec> specs) {
  if (static_cast<int>(specs.size()) != world.num_bodies()) {
    throw StateValidityError("spec count " + std::to_string(specs.size()) +
                             " does not match body count " +
                             std::to_string(world.num_bodies()));
  }
  if (!world.AllFinite()) {
    throw StateValidityError("world state contains non-finite pose values");
  }
  for (const auto& s : specs) s.Validate();
}

std::vector<Body> MakeBodies(const MovingWorld& world,
                             std::span<const BodySpec> specs,
                             const SimConfig& config) {
  std::vector<Body> bodies(specs.size());
  for (size_t i = 0; i < specs.size(); ++i) {
    const BodySpec& s = specs[i];
    const Pose2D& p = world.state.body(static_cast<int>(i));
    Body& b = bodies[i];
    b.position = p.position();
    b.angle = p.theta;
    b.velocity = world.velocities[i].linear;
    b.angular_velocity = world.velocities[i].angular;
    b.inv_mass = 1.0 / s.Mass();
    b.inv_inertia = 1.0 / s.Inertia();
    b.friction = s.friction;
    b.half_extents = s.half_extents;
    b.UpdatePolygon();
    if (s.kind == BodyKind::kBox) {
      b.table_decel = s.friction * config.gravity;
      const double mean_radius =
          kMeanRadiusFactor * (s.half_extents.x + s.half_extents.y);
      b.table_ang_decel =
          b.table_decel * mean_radius * s.Mass() / s.Inertia();
    }
  }
  return bodies;
}

// Coulomb deceleration that stops exactly at zero instead of reversing.
double ClampedDecrease(double magnitude, double decrease) {
  return magnitude <= decrease ? 0.0 : magnitude - decrease;
}

void ApplyDamping(std::vector<Body>& bodies, const SimConfig& config,
                  double q_lin, double q_ang) {
  for (Body& b : bodies) {
    b.velocity = b.velocity * q_lin;
    b.angular_velocity *= q_ang;
    if (b.table_decel > 0.0) {
      const double speed = Length(b.velocity);
      if (speed > 0.0) {
        const double reduced =
            ClampedDecrease(speed, b.table_decel * config.dt);
        b.velocity = b.velocity * (reduced / speed);
      }
      const double w = std::abs(b.angular_velocity);
      if (w > 0.0) {
        const double reduced = ClampedDecrease(w, b.table_ang_decel * config.dt);
        b.angular_velocity = std::copysign(reduced, b.angular_velocity);
      }
    }
  }
}

void BuildContacts(const std::vector<Body>& bodies,
                   std::vector<SolverContact>& contacts) {
  contacts.clear();
  const int n = static_cast<int>(bodies.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Body& a = bodies[i];
      const Body& b = bodies[j];
      auto manifold = Collide(a.polygon, b.polygon);
      if (!manifold) continue;
      SolverContact c;
      c.a = i;
      c.b = j;
      c.friction = std::sqrt(a.friction * b.friction);
      c.normal = manifold->normal;
      c.num_points = manifold->num_points;
      const Vec2 t{c.normal.y, -c.normal.x};
      for (int k = 0; k < c.num_points; ++k) {
        const Vec2 p = manifold->points[k].position;
        c.ra[k] = p - a.position;
        c.rb[k] = p - b.position;
        const double rna = Cross(c.ra[k], c.normal);
        const double rnb = Cross(c.rb[k], c.normal);
        c.normal_mass[k] = 1.0 / (a.inv_mass + b.inv_mass +
                                  a.inv_inertia * rna * rna +
                                  b.inv_inertia * rnb * rnb);
        const double rta = Cross(c.ra[k], t);
        const double rtb = Cross(c.rb[k], t);
        c.tangent_mass[k] = 1.0 / (a.inv_mass + b.inv_mass +
                                   a.inv_inertia * rta * rta +
                                   b.inv_inertia * rtb * rtb);
      }
      contacts.push_back(c);
    }
  }
}

void ApplyImpulse(Body& a, Body& b, Vec2 ra, Vec2 rb, Vec2 impulse) {
  a.velocity -= impulse * a.inv_mass;
  a.angular_velocity -= a.inv_inertia * Cross(ra, impulse);
  b.velocity += impulse * b.inv_mass;
  b.angular_velocity += b.inv_inertia * Cross(rb, impulse);
}

void SolveVelocities(std::vector<Body>& bodies,
                     std::vector<SolverContact>& contacts) {
  for (SolverContact& c : contacts) {
    Body& a = bodies[c.a];
    Body& b = bodies[c.b];
    const Vec2 t{c.normal.y, -c.normal.x};
    for (int k = 0; k < c.num_points; ++k) {
      // Normal: non-penetrating, inelastic.
      Vec2 dv = b.velocity + Cross(b.angular_velocity, c.rb[k]) - a.velocity -
                Cross(a.angular_velocity, c.ra[k]);
      const double vn = Dot(dv, c.normal);
      double lambda = -vn * c.normal_mass[k];
      const double old_n = c.normal_impulse[k];
      c.normal_impulse[k] = std::max(old_n + lambda, 0.0);
      lambda = c.normal_impulse[k] - old_n;
      ApplyImpulse(a, b, c.ra[k], c.rb[k], c.normal * lambda);

      // Friction: Coulomb cone clamp on the accumulated tangent impulse.
      dv = b.velocity + Cross(b.angular_velocity, c.rb[k]) - a.velocity -
           Cross(a.angular_velocity, c.ra[k]);
      const double vt = Dot(dv, t);
      double lambda_t = -vt * c.tangent_mass[k];
      const double max_t = c.friction * c.normal_impulse[k];
      const double old_t = c.tangent_impulse[k];
      c.tangent_impulse[k] = std::clamp(old_t + lambda_t, -max_t, max_t);
      lambda_t = c.tangent_impulse[k] - old_t;
      ApplyImpulse(a, b, c.ra[k], c.rb[k], t * lambda_t);
    }
  }
}

// Linear projection of overlapping pairs along the contact normal, split by
// inverse mass. Returns the largest penetration seen before correction.
double CorrectPositions(std::vector<Body>& bodies, double slop) {
  double max_pen = 0.0;
  const int n = static_cast<int>(bodies.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Body& a = bodies[i];
      Body& b = bodies[j];
      auto manifold = Collide(a.polygon, b.polygon);
      if (!manifold) continue;
      max_pen = std::max(max_pen, manifold->penetration);
      const double c = std::min(
          kPositionBaumgarte * (manifold->penetration - slop),
          kMaxPositionCorrection);
      if (c <= 0.0) continue;
      const double share = c / (a.inv_mass + b.inv_mass);
      a.Translate(manifold->normal * (-share * a.inv_mass));
      b.Translate(manifold->normal * (share * b.inv_mass));
    }
  }
  return max_pen;
}

bool AllAtRest(const std::vector<Body>& bodies, const SimConfig& config) {
  for (const Body& b : bodies) {
    if (Length(b.velocity) >= config.v_rest) return false;
    if (std::abs(b.angular_velocity) >= config.w_rest) return false;
  }
  return true;
}

WorldState ToState(const std::vector<Body>& bodies, size_t num_objects) {
  WorldState s;
  s.objects.resize(num_objects);
  for (size_t i = 0; i < bodies.size(); ++i) {
    Pose2D& p = s.body(static_cast<int>(i));
    p.x = bodies[i].position.x;
    p.y = bodies[i].position.y;
    p.theta = NormalizeAngle(bodies[i].angle);
  }
  s.at_rest = true;
  return s;
}

}  // namespace

WorldState Settle(const MovingWorld& world, std::span<const BodySpec> specs,
                  const SimConfig& config, SettleStats* stats) {
  ValidateInputs(world.state, specs);
  if (world.velocities.size() != specs.size()) {
    throw StateValidityError("velocity count does not match body count");
  }
  for (const Twist& t : world.velocities) {
    if (!std::isfinite(t.linear.x) || !std::isfinite(t.linear.y) ||
        !std::isfinite(t.angular)) {
      throw StateValidityError("non-finite body velocity");
    }
  }

  std::vector<Body> bodies = MakeBodies(world, specs, config);
  const size_t num_objects = world.state.objects.size();
  const double slop = 0.25 * config.penetration_tolerance;
  if (AllAtRest(bodies, config)) {
    WorldState out = world.state;
    out.at_rest = true;
    return out;
  }

  const double q_lin = std::exp(-config.damping_lin * config.dt);
  const double q_ang = std::exp(-config.damping_ang * config.dt);
  std::vector<SolverContact> contacts;
  contacts.reserve(bodies.size() * bodies.size());
  int total_contacts = 0;

  for (int substep = 1; substep <= config.max_substeps; ++substep) {
    ApplyDamping(bodies, config, q_lin, q_ang);
    BuildContacts(bodies, contacts);
    total_contacts += static_cast<int>(contacts.size());
    for (int it = 0; it < config.velocity_iterations && !contacts.empty();
         ++it) {
      SolveVelocities(bodies, contacts);
    }
    for (Body& b : bodies) {
      if (b.velocity.x == 0.0 && b.velocity.y == 0.0 &&
          b.angular_velocity == 0.0) {
        continue;
      }
      b.position += b.velocity * config.dt;
      b.angle += b.angular_velocity * config.dt;
      b.UpdatePolygon();
    }
    for (int it = 0; it < config.position_iterations; ++it) {
      if (CorrectPositions(bodies, slop) <= slop) break;
    }
    if (stats && stats->trace_speeds) {
      double top = 0.0;
      for (const Body& b : bodies) top = std::max(top, Length(b.velocity));
      stats->speeds.push_back(top);
    }
    if (AllAtRest(bodies, config)) {
      for (int it = 0; it < kFinalProjectionIterations; ++it) {
        if (CorrectPositions(bodies, slop) <= slop) break;
      }
      if (stats) {
        stats->substeps = substep;
        stats->contacts = total_contacts;
      }
      return ToState(bodies, num_objects);
    }
  }
  throw SimulationDivergenceError(
      "world did not come to rest within " +
      std::to_string(config.max_substeps) + " substeps");
}

WorldState Step(const WorldState& world, Action action,
                std::span<const BodySpec> specs, const SimConfig& config,
                SettleStats* stats) {
  ValidateInputs(world, specs);
  if (!world.at_rest) {
    throw StateValidityError("Step requires an at-rest world");
  }
  MovingWorld moving = MovingWorld::AtRest(world);
  const BodySpec& effector = specs[0];
  const double dv = config.impulse_lin / effector.Mass();
  const double dw = config.impulse_ang / effector.Inertia();
  Twist& t = moving.velocities[0];
  switch (action) {
    case Action::kPushPosX: t.linear = {dv, 0.0}; break;
    case Action::kPushNegX: t.linear = {-dv, 0.0}; break;
    case Action::kPushPosY: t.linear = {0.0, dv}; break;
    case Action::kPushNegY: t.linear = {0.0, -dv}; break;
    case Action::kRotCw: t.angular = -dw; break;
    case Action::kRotCcw: t.angular = dw; break;
  }
  return Settle(moving, specs, config, stats);
}

double MaxPenetration(const WorldState& world,
                      std::span<const BodySpec> specs) {
  double max_pen = 0.0;
  for (int i = 0; i < world.num_bodies(); ++i) {
    for (int j = i + 1; j < world.num_bodies(); ++j) {
      auto m = Collide(BodyRect(world.body(i), specs[i]),
                       BodyRect(world.body(j), specs[j]));
      if (m) max_pen = std::max(max_pen, m->penetration);
    }
  }
  return max_pen;
}

}  // namespace clutterpush::physics

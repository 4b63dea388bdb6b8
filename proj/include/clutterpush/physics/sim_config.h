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

#ifndef CLUTTERPUSH_PHYSICS_SIM_CONFIG_H_
#define CLUTTERPUSH_PHYSICS_SIM_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "clutterpush/physics/world_state.h"

namespace clutterpush::physics {

// Integrator and solver constants. Serialized as a flat "key = value" text
// block (one key per line, fixed order) which is embedded in run manifests.
struct SimConfig {
  double dt = 1.0 / 240.0;         // s per substep
  double damping_lin = 20.0;       // 1/s, exponential velocity damping
  double damping_ang = 20.0;       // 1/s
  double impulse_lin = 0.0;        // N s applied per push action
  double impulse_ang = 0.0;        // N m s applied per rotate action
  double v_rest = 1e-4;            // m/s
  double w_rest = 1e-3;            // rad/s
  int max_substeps = 10000;
  double penetration_tolerance = 1e-4;  // m
  double gravity = 9.81;           // m/s^2, scales box-table Coulomb friction
  int velocity_iterations = 8;
  int position_iterations = 4;

  std::string ToKeyValue() const;
  // Unknown keys and malformed values raise FormatError; missing keys keep
  // their defaults.
  static SimConfig FromKeyValue(std::string_view text);
  // 16 hex digits of FNV-1a over ToKeyValue().
  std::string Digest() const;
  bool operator==(const SimConfig&) const = default;
};

// Target free-space motion of the end-effector per action.
inline constexpr double kFreeTravel = 0.05;                      // m
inline constexpr double kFreeTurn = 0.5235987755982988;          // rad (30 deg)

// Sets impulse_lin / impulse_ang so that a free `effector` travels
// kFreeTravel per push and turns kFreeTurn per rotation under the
// configured damping and substep.
void CalibrateImpulses(SimConfig& config, const BodySpec& effector);

// Defaults calibrated for ReferenceEndEffector().
SimConfig DefaultSimConfig();

}  // namespace clutterpush::physics

#endif  // CLUTTERPUSH_PHYSICS_SIM_CONFIG_H_

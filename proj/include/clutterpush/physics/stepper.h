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

#ifndef CLUTTERPUSH_PHYSICS_STEPPER_H_
#define CLUTTERPUSH_PHYSICS_STEPPER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "clutterpush/action.h"
#include "clutterpush/physics/collide.h"
#include "clutterpush/physics/sim_config.h"
#include "clutterpush/physics/world_state.h"

namespace clutterpush::physics {

// Counters filled in by Settle; useful for benchmarks and budget checks.
struct SettleStats {
  int substeps = 0;
  int contacts = 0;
  // When set, Settle appends the largest linear speed after each substep.
  bool trace_speeds = false;
  std::vector<double> speeds;
};

// Applies the momentary impulse of `action` to the end-effector of an at-rest
// world and integrates until every body is at rest again.
//
// Pure function: identical inputs give bit-identical outputs.
// Throws StateValidityError on non-finite poses, a body/spec count mismatch,
// invalid specs or a world that is not at rest; SimulationDivergenceError if
// rest is not reached within config.max_substeps.
WorldState Step(const WorldState& world, Action action,
                std::span<const BodySpec> specs, const SimConfig& config,
                SettleStats* stats = nullptr);

// Integrates a moving world with damping, table friction and contact
// resolution until all linear speeds are below v_rest and all angular speeds
// below w_rest. The returned state is marked at rest.
WorldState Settle(const MovingWorld& world, std::span<const BodySpec> specs,
                  const SimConfig& config, SettleStats* stats = nullptr);

// Largest pairwise penetration among all bodies of `world` (0 when nothing
// overlaps).
double MaxPenetration(const WorldState& world, std::span<const BodySpec> specs);

}  // namespace clutterpush::physics

#endif  // CLUTTERPUSH_PHYSICS_STEPPER_H_

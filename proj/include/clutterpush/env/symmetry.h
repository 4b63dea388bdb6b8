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

#ifndef CLUTTERPUSH_ENV_SYMMETRY_H_
#define CLUTTERPUSH_ENV_SYMMETRY_H_

#include <vector>

#include "clutterpush/action.h"
#include "clutterpush/env/task.h"

namespace clutterpush::env {

// The 8 symmetries of the square table about its center. Element g applies
// an optional mirror x -> -x (g >= 4) followed by g % 4 quarter turns
// counter-clockwise. Push directions and poses transform like points; the
// mirror swaps the two rotation actions. Element 0 is the identity.
inline constexpr int kNumSymmetries = 8;

Vec2 Transform(int g, Vec2 p);
Pose2D Transform(int g, const Pose2D& pose);
Action Transform(int g, Action a);
WorldState Transform(int g, const WorldState& state);
std::vector<GoalRegion> Transform(int g, const std::vector<GoalRegion>& goals);

}  // namespace clutterpush::env

#endif  // CLUTTERPUSH_ENV_SYMMETRY_H_

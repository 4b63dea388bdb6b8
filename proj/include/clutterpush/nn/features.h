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

#ifndef CLUTTERPUSH_NN_FEATURES_H_
#define CLUTTERPUSH_NN_FEATURES_H_

#include <span>
#include <vector>

#include "clutterpush/env/task.h"

namespace clutterpush::nn {

// Feature layout for m objects:
//   robot (x, y, sin theta, cos theta),
//   per object (x, y, sin theta, cos theta),
//   per object goal center (x, y),
//   per object offset from the robot (dx, dy) and to its goal (dx, dy).
// Positions are divided by the workspace half-width.
constexpr int FeatureDim(int num_objects) { return 4 + 10 * num_objects; }
inline constexpr int kReferenceFeatureDim = FeatureDim(3);  // 34

void EncodeFeatures(const env::WorldState& state,
                    std::span<const env::GoalRegion> goals,
                    const env::Workspace& workspace, std::span<double> out);

std::vector<double> EncodeFeatures(const env::WorldState& state,
                                   std::span<const env::GoalRegion> goals,
                                   const env::Workspace& workspace);

}  // namespace clutterpush::nn

#endif  // CLUTTERPUSH_NN_FEATURES_H_

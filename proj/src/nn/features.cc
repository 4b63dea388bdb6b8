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

#include "clutterpush/nn/features.h"

#include <cmath>

#include "clutterpush/errors.h"

namespace clutterpush::nn {

void EncodeFeatures(const env::WorldState& state,
                    std::span<const env::GoalRegion> goals,
                    const env::Workspace& workspace, std::span<double> out) {
  const int m = static_cast<int>(state.objects.size());
  if (static_cast<int>(goals.size()) != m ||
      static_cast<int>(out.size()) != FeatureDim(m)) {
    throw ShapeError("feature encoding: body, goal and output sizes disagree");
  }
  const double scale = 1.0 / workspace.half_width;
  int k = 0;
  auto pose = [&](const env::Pose2D& p) {
    out[k++] = p.x * scale;
    out[k++] = p.y * scale;
    out[k++] = std::sin(p.theta);
    out[k++] = std::cos(p.theta);
  };
  pose(state.robot);
  for (const auto& o : state.objects) pose(o);
  for (const auto& g : goals) {
    out[k++] = g.center.x * scale;
    out[k++] = g.center.y * scale;
  }
  for (int i = 0; i < m; ++i) {
    const auto& o = state.objects[i];
    out[k++] = (o.x - state.robot.x) * scale;
    out[k++] = (o.y - state.robot.y) * scale;
    out[k++] = (goals[i].center.x - o.x) * scale;
    out[k++] = (goals[i].center.y - o.y) * scale;
  }
}

std::vector<double> EncodeFeatures(const env::WorldState& state,
                                   std::span<const env::GoalRegion> goals,
                                   const env::Workspace& workspace) {
  std::vector<double> out(FeatureDim(static_cast<int>(state.objects.size())));
  EncodeFeatures(state, goals, workspace, out);
  return out;
}

}  // namespace clutterpush::nn

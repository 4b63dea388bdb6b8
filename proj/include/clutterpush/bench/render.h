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

#ifndef CLUTTERPUSH_BENCH_RENDER_H_
#define CLUTTERPUSH_BENCH_RENDER_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clutterpush/env/mdp.h"
#include "clutterpush/env/serialization.h"
#include "clutterpush/env/task.h"

namespace clutterpush::bench {

// SVG frames map the table square [-w, w]^2 (w = workspace half-width) onto
// a (2w * kPixelsPerMeter)^2 canvas, +y pointing up. A 0.06 m goal radius is
// therefore drawn as a 48 px circle. Target object and its goal are green,
// obstacles and their goals red, the end-effector dark grey.
inline constexpr double kPixelsPerMeter = 800.0;

struct Trajectory {
  env::TaskInstance task;
  std::vector<env::BodySpec> exec_specs;
  std::string policy;
  std::vector<Action> actions;
  std::vector<env::WorldState> states;  // actions.size() + 1 entries
  bool success = false;
  env::EpisodeEnd end = env::EpisodeEnd::kActionCap;
};

Trajectory MakeTrajectory(const env::TaskInstance& task,
                          std::span<const env::BodySpec> exec_specs,
                          const std::string& policy,
                          const env::EpisodeResult& episode);

std::string_view EpisodeEndName(env::EpisodeEnd end);

// {"policy": str, "task": task, "exec_specs": [spec...],
//  "actions": [int...], "states": [state...], "success": bool,
//  "end": "goal" | "action_cap" | "out_of_workspace" | "policy_stopped"}
env::Json TrajectoryToJson(const Trajectory& t);
Trajectory TrajectoryFromJson(const env::Json& j);

std::string RenderFrameSvg(const env::WorldState& state,
                           const env::TaskInstance& task,
                           std::span<const env::BodySpec> specs,
                           const env::Workspace& workspace, int frame,
                           std::optional<Action> last_action);

// Writes frame_000.svg ... one per state; returns the paths.
std::vector<std::filesystem::path> WriteFrames(
    const Trajectory& t, const std::filesystem::path& dir,
    const env::Workspace& workspace = {});

}  // namespace clutterpush::bench

#endif  // CLUTTERPUSH_BENCH_RENDER_H_

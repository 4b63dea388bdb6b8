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

#ifndef CLUTTERPUSH_ENV_SERIALIZATION_H_
#define CLUTTERPUSH_ENV_SERIALIZATION_H_

#include <filesystem>
#include <string>
#include <vector>

#include "clutterpush/env/mdp.h"
#include "clutterpush/env/task.h"
#include "json.hpp"

// Line-delimited JSON records. Lengths are meters, angles radians.
//
//   pose:       {"x": .., "y": .., "theta": ..}
//   state:      {"robot": pose, "objects": [pose, ...], "at_rest": bool}
//   goal:       {"x": .., "y": .., "radius": ..}
//   body spec:  {"kind": "end_effector"|"box", "half_extents": [hx, hy],
//                "density": .., "friction": ..}
//   task:       {"initial": state, "goals": [goal...], "specs": [spec...],
//                "target": int}
//   transition: {"s": state, "a": int 0..5, "r": .., "s_next": state,
//                "terminal": bool, "out_of_bounds": bool, "goals": [goal...]}
namespace clutterpush::env {

using Json = nlohmann::json;

Json ToJson(const Pose2D& p);
Json ToJson(const WorldState& s);
Json ToJson(const GoalRegion& g);
Json ToJson(const BodySpec& b);
Json ToJson(const TaskInstance& t);
Json ToJson(const Transition& t);

// All parsers throw FormatError on missing or mistyped fields.
Pose2D PoseFromJson(const Json& j);
WorldState StateFromJson(const Json& j);
GoalRegion GoalFromJson(const Json& j);
BodySpec SpecFromJson(const Json& j);
TaskInstance TaskFromJson(const Json& j);
Transition TransitionFromJson(const Json& j);

// One compact JSON document per line.
std::vector<Json> ReadJsonLines(const std::filesystem::path& path);
void WriteJsonLines(const std::filesystem::path& path,
                    const std::vector<Json>& records);
void AppendJsonLine(const std::filesystem::path& path, const Json& record);

}  // namespace clutterpush::env

#endif  // CLUTTERPUSH_ENV_SERIALIZATION_H_

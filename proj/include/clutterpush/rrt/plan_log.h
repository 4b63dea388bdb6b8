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

#ifndef CLUTTERPUSH_RRT_PLAN_LOG_H_
#define CLUTTERPUSH_RRT_PLAN_LOG_H_

#include <filesystem>
#include <string>
#include <vector>

#include "clutterpush/env/serialization.h"
#include "clutterpush/rrt/planner.h"

// Plan log: one JSON record per solved task,
//   {"seed": uint, "task": task, "actions": [int...], "states": [state...],
//    "final_state": state, "sim_digest": "16 hex digits"}
namespace clutterpush::rrt {

env::Json PlanToJson(const Plan& plan, const std::string& sim_digest);
Plan PlanFromJson(const env::Json& j);
std::vector<Plan> ReadPlanLog(const std::filesystem::path& path);

// Converts a plan into its transition sequence (reward -1, terminal on the
// last one).
std::vector<env::Transition> PlanTransitions(const Plan& plan);

}  // namespace clutterpush::rrt

#endif  // CLUTTERPUSH_RRT_PLAN_LOG_H_

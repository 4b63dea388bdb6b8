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

#include "clutterpush/rrt/plan_log.h"

#include "clutterpush/errors.h"

namespace clutterpush::rrt {

env::Json PlanToJson(const Plan& plan, const std::string& sim_digest) {
  env::Json actions = env::Json::array(), states = env::Json::array();
  for (Action a : plan.actions) actions.push_back(ActionIndex(a));
  for (const auto& s : plan.states) states.push_back(env::ToJson(s));
  return env::Json{{"seed", plan.seed},
                   {"task", env::ToJson(plan.task)},
                   {"actions", std::move(actions)},
                   {"states", std::move(states)},
                   {"final_state", env::ToJson(plan.final_state)},
                   {"sim_digest", sim_digest}};
}

Plan PlanFromJson(const env::Json& j) {
  try {
    Plan p;
    p.seed = j.at("seed").get<std::uint64_t>();
    p.task = env::TaskFromJson(j.at("task"));
    for (const auto& a : j.at("actions")) {
      const auto action = ActionFromIndex(a.get<int>());
      if (!action) throw FormatError("plan action index out of range");
      p.actions.push_back(*action);
    }
    for (const auto& s : j.at("states")) {
      p.states.push_back(env::StateFromJson(s));
    }
    p.final_state = env::StateFromJson(j.at("final_state"));
    if (p.states.size() != p.actions.size()) {
      throw FormatError("plan states and actions are not aligned");
    }
    return p;
  } catch (const env::Json::exception& e) {
    throw FormatError(std::string("malformed plan record: ") + e.what());
  }
}

std::vector<Plan> ReadPlanLog(const std::filesystem::path& path) {
  std::vector<Plan> plans;
  for (const auto& j : env::ReadJsonLines(path)) {
    plans.push_back(PlanFromJson(j));
  }
  return plans;
}

std::vector<env::Transition> PlanTransitions(const Plan& plan) {
  std::vector<env::Transition> out;
  out.reserve(plan.actions.size());
  for (int l = 0; l < plan.length(); ++l) {
    env::Transition t;
    t.s = plan.states[l];
    t.a = plan.actions[l];
    t.r = env::kStepReward;
    t.s_next = l + 1 < plan.length() ? plan.states[l + 1] : plan.final_state;
    t.terminal = l + 1 == plan.length();
    t.goals = plan.task.goals;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace clutterpush::rrt

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

#include "clutterpush/env/serialization.h"

#include <fstream>
#include <string>

#include "clutterpush/errors.h"

namespace clutterpush::env {
namespace {

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double Number(const Json& j, const char* key) {
  const Json& v = Field(j, key);
  if (!v.is_number()) {
    throw FormatError(std::string("field '") + key + "' is not a number");
  }
  return v.get<double>();
}

template <typename T, typename Fn>
std::vector<T> Array(const Json& j, const char* key, Fn&& parse) {
  const Json& v = Field(j, key);
  if (!v.is_array()) {
    throw FormatError(std::string("field '") + key + "' is not an array");
  }
  std::vector<T> out;
  out.reserve(v.size());
  for (const Json& e : v) out.push_back(parse(e));
  return out;
}

}  // namespace

Json ToJson(const Pose2D& p) {
  return Json{{"x", p.x}, {"y", p.y}, {"theta", p.theta}};
}

Json ToJson(const WorldState& s) {
  Json objects = Json::array();
  for (const auto& o : s.objects) objects.push_back(ToJson(o));
  return Json{{"robot", ToJson(s.robot)},
              {"objects", std::move(objects)},
              {"at_rest", s.at_rest}};
}

Json ToJson(const GoalRegion& g) {
  return Json{{"x", g.center.x}, {"y", g.center.y}, {"radius", g.radius}};
}

Json ToJson(const BodySpec& b) {
  return Json{
      {"kind", b.kind == physics::BodyKind::kBox ? "box" : "end_effector"},
      {"half_extents", Json::array({b.half_extents.x, b.half_extents.y})},
      {"density", b.density},
      {"friction", b.friction}};
}

Json ToJson(const TaskInstance& t) {
  Json goals = Json::array(), specs = Json::array();
  for (const auto& g : t.goals) goals.push_back(ToJson(g));
  for (const auto& s : t.specs) specs.push_back(ToJson(s));
  return Json{{"initial", ToJson(t.initial)},
              {"goals", std::move(goals)},
              {"specs", std::move(specs)},
              {"target", t.target}};
}

Json ToJson(const Transition& t) {
  Json goals = Json::array();
  for (const auto& g : t.goals) goals.push_back(ToJson(g));
  return Json{{"s", ToJson(t.s)},
              {"a", ActionIndex(t.a)},
              {"r", t.r},
              {"s_next", ToJson(t.s_next)},
              {"terminal", t.terminal},
              {"out_of_bounds", t.out_of_bounds},
              {"goals", std::move(goals)}};
}

Pose2D PoseFromJson(const Json& j) {
  return Pose2D{.x = Number(j, "x"), .y = Number(j, "y"),
                .theta = Number(j, "theta")};
}

WorldState StateFromJson(const Json& j) {
  WorldState s;
  s.robot = PoseFromJson(Field(j, "robot"));
  s.objects = Array<Pose2D>(j, "objects", PoseFromJson);
  s.at_rest = j.value("at_rest", true);
  return s;
}

GoalRegion GoalFromJson(const Json& j) {
  return GoalRegion{.center = {Number(j, "x"), Number(j, "y")},
                    .radius = Number(j, "radius")};
}

BodySpec SpecFromJson(const Json& j) {
  BodySpec b;
  const std::string kind = Field(j, "kind").get<std::string>();
  if (kind == "box") {
    b.kind = physics::BodyKind::kBox;
  } else if (kind == "end_effector") {
    b.kind = physics::BodyKind::kEndEffector;
  } else {
    throw FormatError("unknown body kind '" + kind + "'");
  }
  const Json& he = Field(j, "half_extents");
  if (!he.is_array() || he.size() != 2) {
    throw FormatError("half_extents must be a 2-element array");
  }
  b.half_extents = {he[0].get<double>(), he[1].get<double>()};
  b.density = Number(j, "density");
  b.friction = Number(j, "friction");
  return b;
}

TaskInstance TaskFromJson(const Json& j) {
  TaskInstance t;
  t.initial = StateFromJson(Field(j, "initial"));
  t.goals = Array<GoalRegion>(j, "goals", GoalFromJson);
  t.specs = Array<BodySpec>(j, "specs", SpecFromJson);
  t.target = j.value("target", 0);
  if (t.goals.size() != t.initial.objects.size() ||
      t.specs.size() != t.initial.objects.size() + 1) {
    throw FormatError("task record has inconsistent body counts");
  }
  return t;
}

Transition TransitionFromJson(const Json& j) {
  Transition t;
  t.s = StateFromJson(Field(j, "s"));
  const auto a = ActionFromIndex(Field(j, "a").get<int>());
  if (!a) throw FormatError("action index out of range");
  t.a = *a;
  t.r = Number(j, "r");
  t.s_next = StateFromJson(Field(j, "s_next"));
  t.terminal = Field(j, "terminal").get<bool>();
  t.out_of_bounds = j.value("out_of_bounds", false);
  t.goals = Array<GoalRegion>(j, "goals", GoalFromJson);
  return t;
}

std::vector<Json> ReadJsonLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::vector<Json> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return out;
}

void WriteJsonLines(const std::filesystem::path& path,
                    const std::vector<Json>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  for (const Json& r : records) out << r.dump() << '\n';
}

void AppendJsonLine(const std::filesystem::path& path, const Json& record) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << record.dump() << '\n';
}

}  // namespace clutterpush::env

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

#include "clutterpush/bench/render.h"

#include <cstdio>

#include "clutterpush/bench/report.h"
#include "clutterpush/errors.h"

namespace clutterpush::bench {
namespace {

constexpr char kTargetColor[] = "#2e8b3e";
constexpr char kObstacleColor[] = "#c0392b";
constexpr char kEffectorColor[] = "#404040";

struct Canvas {
  double half_width;
  double scale;
  double px(double x) const { return (x + half_width) * scale; }
  double py(double y) const { return (half_width - y) * scale; }
};

std::string Polygon(const Canvas& c, const physics::OrientedRect& rect,
                    const char* fill, double opacity) {
  std::string pts;
  char buf[64];
  for (const auto& p : rect.Corners()) {
    std::snprintf(buf, sizeof(buf), "%s%.2f,%.2f", pts.empty() ? "" : " ",
                  c.px(p.x), c.py(p.y));
    pts += buf;
  }
  char out[512];
  std::snprintf(out, sizeof(out),
                "  <polygon points=\"%s\" fill=\"%s\" fill-opacity=\"%.2f\" "
                "stroke=\"black\" stroke-width=\"1\"/>\n",
                pts.c_str(), fill, opacity);
  return out;
}

}  // namespace

std::string_view EpisodeEndName(env::EpisodeEnd end) {
  switch (end) {
    case env::EpisodeEnd::kGoal: return "goal";
    case env::EpisodeEnd::kActionCap: return "action_cap";
    case env::EpisodeEnd::kOutOfWorkspace: return "out_of_workspace";
    case env::EpisodeEnd::kPolicyStopped: return "policy_stopped";
  }
  return "?";
}

Trajectory MakeTrajectory(const env::TaskInstance& task,
                          std::span<const env::BodySpec> exec_specs,
                          const std::string& policy,
                          const env::EpisodeResult& episode) {
  Trajectory t;
  t.task = task;
  t.exec_specs.assign(exec_specs.begin(), exec_specs.end());
  t.policy = policy;
  t.states.push_back(task.initial);
  for (const auto& tr : episode.transitions) {
    t.actions.push_back(tr.a);
    t.states.push_back(tr.s_next);
  }
  t.success = episode.success;
  t.end = episode.end;
  return t;
}

env::Json TrajectoryToJson(const Trajectory& t) {
  env::Json specs = env::Json::array();
  for (const auto& s : t.exec_specs) specs.push_back(env::ToJson(s));
  env::Json actions = env::Json::array();
  for (Action a : t.actions) actions.push_back(ActionIndex(a));
  env::Json states = env::Json::array();
  for (const auto& s : t.states) states.push_back(env::ToJson(s));
  return env::Json{{"policy", t.policy},
                   {"task", env::ToJson(t.task)},
                   {"exec_specs", std::move(specs)},
                   {"actions", std::move(actions)},
                   {"states", std::move(states)},
                   {"success", t.success},
                   {"end", std::string(EpisodeEndName(t.end))}};
}

Trajectory TrajectoryFromJson(const env::Json& j) {
  try {
    Trajectory t;
    t.policy = j.at("policy").get<std::string>();
    t.task = env::TaskFromJson(j.at("task"));
    for (const auto& s : j.at("exec_specs")) {
      t.exec_specs.push_back(env::SpecFromJson(s));
    }
    for (const auto& a : j.at("actions")) {
      const auto action = ActionFromIndex(a.get<int>());
      if (!action) throw FormatError("trajectory action index out of range");
      t.actions.push_back(*action);
    }
    for (const auto& s : j.at("states")) {
      t.states.push_back(env::StateFromJson(s));
    }
    if (t.states.size() != t.actions.size() + 1) {
      throw FormatError("trajectory needs one more state than actions");
    }
    t.success = j.at("success").get<bool>();
    const auto end = j.at("end").get<std::string>();
    bool known = false;
    for (auto e : {env::EpisodeEnd::kGoal, env::EpisodeEnd::kActionCap,
                   env::EpisodeEnd::kOutOfWorkspace,
                   env::EpisodeEnd::kPolicyStopped}) {
      if (EpisodeEndName(e) == end) {
        t.end = e;
        known = true;
      }
    }
    if (!known) throw FormatError("unknown episode end '" + end + "'");
    return t;
  } catch (const env::Json::exception& e) {
    throw FormatError(std::string("malformed trajectory: ") + e.what());
  }
}

std::string RenderFrameSvg(const env::WorldState& state,
                           const env::TaskInstance& task,
                           std::span<const env::BodySpec> specs,
                           const env::Workspace& workspace, int frame,
                           std::optional<Action> last_action) {
  if (static_cast<int>(specs.size()) != state.num_bodies()) {
    throw StateValidityError("render: one spec per body required");
  }
  const Canvas c{workspace.half_width, kPixelsPerMeter};
  const double size = 2.0 * workspace.half_width * kPixelsPerMeter;
  std::string svg;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
                "width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n"
                "  <rect x=\"0\" y=\"0\" width=\"%.0f\" height=\"%.0f\" "
                "fill=\"#f4f1ea\" stroke=\"black\"/>\n",
                size, size, size, size, size, size);
  svg += buf;
  for (int i = 0; i < static_cast<int>(task.goals.size()); ++i) {
    const auto& g = task.goals[i];
    std::snprintf(buf, sizeof(buf),
                  "  <circle class=\"goal\" cx=\"%.2f\" cy=\"%.2f\" "
                  "r=\"%.2f\" fill=\"%s\" fill-opacity=\"0.25\" "
                  "stroke=\"%s\"/>\n",
                  c.px(g.center.x), c.py(g.center.y), g.radius * c.scale,
                  i == task.target ? kTargetColor : kObstacleColor,
                  i == task.target ? kTargetColor : kObstacleColor);
    svg += buf;
  }
  for (int i = 0; i < static_cast<int>(state.objects.size()); ++i) {
    svg += Polygon(c, physics::BodyRect(state.objects[i], specs[i + 1]),
                   i == task.target ? kTargetColor : kObstacleColor, 0.85);
  }
  svg += Polygon(c, physics::BodyRect(state.robot, specs[0]), kEffectorColor,
                 1.0);
  std::snprintf(buf, sizeof(buf),
                "  <text x=\"8\" y=\"20\" font-family=\"monospace\" "
                "font-size=\"14\">frame %d%s%s</text>\n</svg>\n",
                frame, last_action ? "  " : "",
                last_action ? std::string(ActionName(*last_action)).c_str()
                            : "");
  svg += buf;
  return svg;
}

std::vector<std::filesystem::path> WriteFrames(
    const Trajectory& t, const std::filesystem::path& dir,
    const env::Workspace& workspace) {
  std::filesystem::create_directories(dir);
  const auto& specs = t.exec_specs.empty() ? t.task.specs : t.exec_specs;
  std::vector<std::filesystem::path> paths;
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%03zu.svg", k);
    const std::optional<Action> last =
        k == 0 ? std::nullopt : std::optional<Action>(t.actions[k - 1]);
    paths.push_back(dir / name);
    WriteTextFile(paths.back(),
                  RenderFrameSvg(t.states[k], t.task, specs, workspace,
                                 static_cast<int>(k), last));
  }
  return paths;
}

}  // namespace clutterpush::bench

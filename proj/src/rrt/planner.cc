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

#include "clutterpush/rrt/planner.h"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "clutterpush/physics/stepper.h"

namespace clutterpush::rrt {
namespace {

constexpr int kParallelScanThreshold = 4096;

void Flatten(const WorldState& s, double* out) {
  for (int b = 0; b < s.num_bodies(); ++b) {
    const auto& p = s.body(b);
    out[3 * b] = p.x;
    out[3 * b + 1] = p.y;
    out[3 * b + 2] = p.theta;
  }
}

// Angles are already normalized to (-pi, pi], so the wrapped difference is
// at most one 2*pi correction away.
inline double AbsAngleDiff(double a, double b) {
  const double d = std::abs(a - b);
  return d > std::numbers::pi ? 2.0 * std::numbers::pi - d : d;
}

inline double FlatDistance(const double* a, const double* b, int bodies,
                           const DistanceMetric& m) {
  double sq = 0.0, ang = 0.0;
  const int weighted_body = m.weighted_object >= 0 ? m.weighted_object + 1 : -1;
  for (int i = 0; i < bodies; ++i) {
    double dx = a[3 * i] - b[3 * i];
    double dy = a[3 * i + 1] - b[3 * i + 1];
    if (i == weighted_body) {
      dx *= m.target_weight;
      dy *= m.target_weight;
    }
    sq += dx * dx + dy * dy;
    ang += AbsAngleDiff(a[3 * i + 2], b[3 * i + 2]);
  }
  return std::sqrt(sq) + m.w_theta * ang;
}

WorldState SampleState(const TaskInstance& task, const RrtConfig& config,
                       Rng& rng, bool& goal_biased) {
  WorldState s;
  s.at_rest = true;
  const double h = config.sample_half_width;
  const double hr = h + config.sample_margin;
  auto angle = [&] {
    return physics::NormalizeAngle(
        Uniform(rng, -std::numbers::pi, std::numbers::pi));
  };
  s.robot = {Uniform(rng, -hr, hr), Uniform(rng, -hr, hr), angle()};
  goal_biased = Uniform(rng, 0.0, 1.0) < config.goal_bias;
  s.objects.resize(task.initial.objects.size());
  for (size_t i = 0; i < s.objects.size(); ++i) {
    const env::GoalRegion& g = task.goals[i];
    if (static_cast<int>(i) == task.target) {
      if (goal_biased) {
        s.objects[i] = {g.center.x, g.center.y, angle()};
      } else {
        s.objects[i] = {Uniform(rng, -h, h), Uniform(rng, -h, h), angle()};
      }
    } else {
      // Obstacles are sampled inside their own goal discs.
      const double r = g.radius * std::sqrt(Uniform(rng, 0.0, 1.0));
      const double phi = Uniform(rng, -std::numbers::pi, std::numbers::pi);
      s.objects[i] = {g.center.x + r * std::cos(phi),
                      g.center.y + r * std::sin(phi), angle()};
    }
  }
  return s;
}

}  // namespace

double DistanceMetric::operator()(const WorldState& a,
                                  const WorldState& b) const {
  const int bodies = a.num_bodies();
  std::vector<double> fa(3 * bodies), fb(3 * bodies);
  Flatten(a, fa.data());
  Flatten(b, fb.data());
  return FlatDistance(fa.data(), fb.data(), bodies, *this);
}

Tree::Tree(const WorldState& root) : bodies_(root.num_bodies()) {
  Add(TreeNode{.state = root, .parent = -1, .action_from_parent = {},
               .depth = 0});
}

int Tree::Add(TreeNode node) {
  const int id = size();
  coords_.resize(coords_.size() + 3 * bodies_);
  Flatten(node.state, coords_.data() + 3 * bodies_ * id);
  depths_.push_back(node.depth);
  nodes_.push_back(std::move(node));
  return id;
}

int Tree::Nearest(const WorldState& sample,
                  const DistanceMetric& metric) const {
  return Nearest(sample, metric, std::numeric_limits<int>::max());
}

int Tree::Nearest(const WorldState& sample, const DistanceMetric& metric,
                  int max_depth) const {
  std::vector<double> q(3 * bodies_);
  Flatten(sample, q.data());
  const int n = size();
  const int stride = 3 * bodies_;
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
#pragma omp parallel if (n > kParallelScanThreshold)
  {
    int local = -1;
    double local_d = std::numeric_limits<double>::infinity();
#pragma omp for schedule(static) nowait
    for (int i = 0; i < n; ++i) {
      if (depths_[i] >= max_depth) continue;
      const double d =
          FlatDistance(coords_.data() + stride * i, q.data(), bodies_, metric);
      if (d < local_d) {
        local_d = d;
        local = i;
      }
    }
#pragma omp critical(rrt_nearest_merge)
    {
      if (local >= 0 &&
          (local_d < best_d || (local_d == best_d && local < best))) {
        best_d = local_d;
        best = local;
      }
    }
  }
  return best;
}

std::optional<TreeNode> Extend(const Tree& tree, int from,
                               const WorldState& sample,
                               const env::Model& model, Rng& rng,
                               int n_expand, const DistanceMetric& metric) {
  const TreeNode& parent = tree.node(from);
  std::array<Action, kNumActions> candidates = kAllActions;
  int count = kNumActions;
  if (n_expand < kNumActions) {
    count = std::max(n_expand, 1);
    for (int i = 0; i < count; ++i) {
      std::swap(candidates[i], candidates[UniformInt(rng, i, kNumActions - 1)]);
    }
  }
  std::optional<TreeNode> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    WorldState next = model.Apply(parent.state, candidates[i]);
    if (!env::InWorkspace(next, model.workspace)) continue;
    const double d = metric(next, sample);
    if (d < best_d) {
      best_d = d;
      best = TreeNode{.state = std::move(next),
                      .parent = from,
                      .action_from_parent = candidates[i],
                      .depth = parent.depth + 1};
    }
  }
  return best;
}

PlanResult PlanTask(const TaskInstance& task, const env::Model& model,
                    const RrtConfig& config, std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  PlanResult result;
  Rng rng(seed);
  Tree tree(task.initial);
  auto finish = [&](int goal_id) {
    Plan plan;
    plan.task = task;
    plan.seed = seed;
    plan.final_state = tree.node(goal_id).state;
    for (int id = goal_id; tree.node(id).parent >= 0;
         id = tree.node(id).parent) {
      plan.actions.push_back(*tree.node(id).action_from_parent);
      plan.states.push_back(tree.node(tree.node(id).parent).state);
    }
    std::reverse(plan.actions.begin(), plan.actions.end());
    std::reverse(plan.states.begin(), plan.states.end());
    result.plan = std::move(plan);
  };

  if (env::IsGoal(task.initial, task.goals)) {
    finish(0);
  } else {
    const DistanceMetric plain{.w_theta = config.w_theta};
    const DistanceMetric toward_goal{.w_theta = config.w_theta,
                                     .weighted_object = task.target,
                                     .target_weight = config.target_weight};
    const long max_iterations = 10L * std::max(config.max_nodes, 1);
    for (long iter = 0; tree.size() < config.max_nodes && iter < max_iterations;
         ++iter) {
      if ((iter & 31) == 0 && elapsed() > config.max_seconds) {
        result.timed_out = true;
        break;
      }
      bool goal_biased = false;
      const WorldState sample = SampleState(task, config, rng, goal_biased);
      const DistanceMetric& metric = goal_biased ? toward_goal : plain;
      const int near = tree.Nearest(sample, metric, config.max_depth);
      if (near < 0) break;
      auto child =
          Extend(tree, near, sample, model, rng, config.n_expand, metric);
      if (!child) continue;
      const bool reached = env::IsGoal(child->state, task.goals);
      const int id = tree.Add(std::move(*child));
      if (reached) {
        finish(id);
        break;
      }
    }
  }
  result.nodes = tree.size();
  result.seconds = elapsed();
  return result;
}

std::optional<double> ReplayDeviation(const Plan& plan,
                                      const env::Model& model) {
  WorldState s = plan.task.initial;
  double worst = 0.0;
  auto compare = [&](const WorldState& a, const WorldState& b) {
    if (a.num_bodies() != b.num_bodies()) {
      worst = std::numeric_limits<double>::infinity();
      return;
    }
    for (int i = 0; i < a.num_bodies(); ++i) {
      worst = std::max({worst, std::abs(a.body(i).x - b.body(i).x),
                        std::abs(a.body(i).y - b.body(i).y),
                        std::abs(physics::AngleDiff(a.body(i).theta,
                                                    b.body(i).theta))});
    }
  };
  if (plan.states.size() != plan.actions.size()) return std::nullopt;
  for (int l = 0; l < plan.length(); ++l) {
    compare(s, plan.states[l]);
    s = model.Apply(s, plan.actions[l]);
  }
  compare(s, plan.final_state);
  if (!env::IsGoal(s, plan.task.goals)) return std::nullopt;
  return worst;
}

}  // namespace clutterpush::rrt

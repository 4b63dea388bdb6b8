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

#ifndef CLUTTERPUSH_RRT_PLANNER_H_
#define CLUTTERPUSH_RRT_PLANNER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "clutterpush/action.h"
#include "clutterpush/env/mdp.h"
#include "clutterpush/env/task.h"
#include "clutterpush/random.h"

namespace clutterpush::rrt {

using env::TaskInstance;
using env::WorldState;

struct RrtConfig {
  int max_nodes = 60000;
  double max_seconds = 120.0;
  double goal_bias = 0.2;
  // Actions simulated per extension; 6 evaluates the whole action set.
  int n_expand = 6;
  double w_theta = 0.01;          // m/rad
  double target_weight = 3.0;     // target position weight for goal samples
  // Nodes at this depth are not extended, so plans never exceed it.
  int max_depth = env::kDefaultActionCap;
  // Robot samples extend this far beyond the task's sampling region.
  double sample_margin = 0.1;
  double sample_half_width = 0.25;
};

// Weighted SE(2)^(m+1) distance: Euclidean norm over all body position
// differences (the target object's difference scaled by `target_weight`)
// plus w_theta times the summed absolute angle differences.
struct DistanceMetric {
  double w_theta = 0.01;
  int weighted_object = -1;   // object index, or -1 for none
  double target_weight = 1.0;

  double operator()(const WorldState& a, const WorldState& b) const;
};

struct TreeNode {
  WorldState state;
  int parent = -1;                        // -1 for the root
  std::optional<Action> action_from_parent;
  int depth = 0;
};

// Search tree with a flat coordinate mirror of every node for fast scans.
class Tree {
 public:
  explicit Tree(const WorldState& root);

  int size() const { return static_cast<int>(nodes_.size()); }
  const TreeNode& node(int id) const { return nodes_[id]; }
  std::span<const TreeNode> nodes() const { return nodes_; }
  int Add(TreeNode node);

  // Node id minimizing `metric` to `sample` among nodes with depth <
  // max_depth; ties go to the lowest id. Returns -1 if no node qualifies.
  // The scan is OpenMP-parallel for large trees.
  int Nearest(const WorldState& sample, const DistanceMetric& metric,
              int max_depth) const;
  int Nearest(const WorldState& sample, const DistanceMetric& metric) const;

 private:
  int bodies_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<double> coords_;  // per node: x, y, theta for every body
  std::vector<int> depths_;
};

// Simulates `n_expand` actions from node `from` (all six in index order when
// n_expand >= 6, otherwise n_expand distinct actions drawn from `rng`) and
// returns the child closest to `sample` under `metric`; ties go to the
// earlier candidate. Children that leave the workspace are discarded;
// returns nullopt when every candidate does.
std::optional<TreeNode> Extend(const Tree& tree, int from,
                               const WorldState& sample,
                               const env::Model& model, Rng& rng,
                               int n_expand, const DistanceMetric& metric);

struct Plan {
  TaskInstance task;
  std::vector<Action> actions;
  std::vector<WorldState> states;  // states[l] precedes actions[l]
  WorldState final_state;          // transition of the last pair; a goal
  std::uint64_t seed = 0;

  int length() const { return static_cast<int>(actions.size()); }
};

struct PlanResult {
  std::optional<Plan> plan;  // nullopt: budget exhausted
  int nodes = 0;
  double seconds = 0.0;
  bool timed_out = false;
};

// Kinodynamic RRT over at-rest world states. Deterministic for a fixed seed
// unless the wall-clock limit is what ends the search.
PlanResult PlanTask(const TaskInstance& task, const env::Model& model,
                    const RrtConfig& config, std::uint64_t seed);

// Re-executes the plan from task.initial through `model`. Returns the
// largest per-coordinate deviation from the stored states (including the
// final state), or nullopt when the replay does not end in a goal state.
std::optional<double> ReplayDeviation(const Plan& plan,
                                      const env::Model& model);

}  // namespace clutterpush::rrt

#endif  // CLUTTERPUSH_RRT_PLANNER_H_

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

#ifndef CLUTTERPUSH_RHP_CONTROLLER_H_
#define CLUTTERPUSH_RHP_CONTROLLER_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clutterpush/action.h"
#include "clutterpush/env/mdp.h"
#include "clutterpush/nn/network.h"
#include "clutterpush/random.h"

namespace clutterpush::rhp {

using env::GoalRegion;
using env::WorldState;

// Value used at the end of a roll-out that did not reach the goal.
enum class Bootstrap {
  kMaxAction,      // gamma^h * max_a q(s_h, a)
  kSampledAction,  // gamma^h * q(s_h, a_h), a_h drawn from the softmax
};

struct RhpConfig {
  int n = 6;            // roll-outs per query
  int h = 6;            // roll-out depth; 0 means act greedily
  double tau = 1.0;     // softmax temperature
  double gamma = 0.98;
  Bootstrap bootstrap = Bootstrap::kMaxAction;
  int action_cap = env::kDefaultActionCap;  // sets the failure value at gamma=1

  // Throws std::invalid_argument.
  void Validate() const;
  // Round-trip precision, e.g. "n=6 h=6 tau=1 gamma=0.97999999999999998
  // bootstrap=max".
  std::string ToString() const;
};

// exp(q_a / tau) / sum_i exp(q_i / tau), stabilized by subtracting max q.
std::array<double, kNumActions> SoftmaxPolicy(std::span<const double> q,
                                              double tau);

// Inverse-CDF draw from `probs` with one uniform variate.
Action SampleAction(std::span<const double> probs, Rng& rng);

// argmax with ties resolved to the lowest action index.
Action GreedyAction(std::span<const double> q);

struct RolloutStep {
  WorldState state;  // state the action was taken in
  Action action;
  double reward;
};

struct RolloutResult {
  Action first_action = Action::kPushPosX;
  double return_value = 0.0;
  std::vector<RolloutStep> trajectory;
  std::optional<int> reached_goal_at;  // number of actions to enter the goal
  bool left_workspace = false;
  int transitions = 0;                 // model calls made
  int forward_passes = 0;
};

// One softmax-guided roll-out of at most config.h model transitions.
// Entering the goal ends the roll-out without a bootstrap term; leaving the
// workspace ends it with the discounted failure value.
RolloutResult Rollout(const WorldState& state,
                      std::span<const GoalRegion> goals,
                      const nn::NetParams& net, const env::Model& model,
                      const RhpConfig& config, Rng& rng);

struct QueryStats {
  int transitions = 0;
  int forward_passes = 0;
  std::vector<double> returns;        // per roll-out
  std::vector<Action> first_actions;  // per roll-out
  int best = -1;                      // index of the executed roll-out
};

// Runs config.n roll-outs from `state` and returns the first action of the
// one with the highest return (lowest roll-out index on ties). Each roll-out
// has its own generator seeded from `rng`, so the answer does not depend on
// whether the roll-outs run serially or in parallel.
Action SelectAction(const WorldState& state, std::span<const GoalRegion> goals,
                    const nn::NetParams& net, const env::Model& model,
                    const RhpConfig& config, Rng& rng,
                    QueryStats* stats = nullptr);

// Serial evaluation of the same query, kept as a reference for tests.
Action SelectActionSerial(const WorldState& state,
                          std::span<const GoalRegion> goals,
                          const nn::NetParams& net, const env::Model& model,
                          const RhpConfig& config, Rng& rng,
                          QueryStats* stats = nullptr);

// argmax_a q(s, a).
Action GreedyPolicy(const WorldState& state, std::span<const GoalRegion> goals,
                    const nn::NetParams& net, const env::Workspace& workspace);

// Closed-loop policies for env::RunEpisode. The network snapshot is shared
// read-only.
env::Policy MakeGreedyPolicy(std::shared_ptr<const nn::NetParams> net,
                             std::vector<GoalRegion> goals,
                             env::Workspace workspace);

env::Policy MakeRhpPolicy(std::shared_ptr<const nn::NetParams> net,
                          std::vector<GoalRegion> goals, env::Model model,
                          RhpConfig config, std::uint64_t seed);

}  // namespace clutterpush::rhp

#endif  // CLUTTERPUSH_RHP_CONTROLLER_H_

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

#ifndef CLUTTERPUSH_RL_REFINER_H_
#define CLUTTERPUSH_RL_REFINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "clutterpush/env/mdp.h"
#include "clutterpush/env/task.h"
#include "clutterpush/errors.h"
#include "clutterpush/nn/network.h"
#include "clutterpush/rhp/controller.h"
#include "clutterpush/rl/replay_buffer.h"

namespace clutterpush::rl {

// Linear annealing from `start` to `end` over `decay_steps`, then constant.
struct EpsilonSchedule {
  double start = 0.3;
  double end = 0.05;
  long decay_steps = 20000;

  double At(long step) const;
};

struct RlConfig {
  EpsilonSchedule epsilon;
  std::size_t capacity = 100000;
  int batch_size = 32;           // M
  int target_sync_interval = 1000;  // updates; 1 = no separate target net
  double lr = 1e-5;
  double l2 = 1e-5;
  double gamma = 0.98;
  rhp::RhpConfig rhp;
  int episode_cap = env::kDefaultActionCap;
  long checkpoint_every = 5000;  // steps
  long log_every = 100;          // steps per CSV row
  int success_window = 100;      // episodes in the moving average
  env::TaskSamplerConfig tasks;
  physics::SimConfig sim = physics::DefaultSimConfig();

  void Validate() const;
  std::string ToString() const;
};

// Uniform-random action with probability epsilon, else the RHP action.
// Exactly one uniform variate decides the branch.
Action EpsRhp(const env::WorldState& state,
              std::span<const env::GoalRegion> goals, const nn::NetParams& net,
              const env::Model& model, Rng& rng, double epsilon,
              const rhp::RhpConfig& config, rhp::QueryStats* stats = nullptr);

// r for goal-reaching transitions, r + gamma * failure value for transitions
// leaving the workspace, else r + gamma * max_a' q(s', a'; target).
double DqnTarget(const env::Transition& t, std::span<const double> q_next,
                 double gamma, int action_cap = env::kDefaultActionCap);

// Regression batch whose squared-error loss is the DQN loss of `batch`.
nn::TrainingBatch BuildDqnBatch(const nn::NetParams& target_net,
                                std::span<const env::Transition> batch,
                                double gamma,
                                const env::Workspace& workspace = {},
                                int action_cap = env::kDefaultActionCap);

// sum_i (y_i - q(s_i, a_i; net))^2 + l2 * |net|^2, evaluated sample by
// sample.
double DqnLoss(const nn::NetParams& net, const nn::NetParams& target_net,
               std::span<const env::Transition> batch, double gamma, double l2,
               const env::Workspace& workspace = {},
               int action_cap = env::kDefaultActionCap);

struct DqnStepConfig {
  double gamma = 0.98;
  double l2 = 1e-5;
  nn::AdamConfig adam{.lr = 1e-5};
  int action_cap = env::kDefaultActionCap;
};

// One Adam step on the DQN loss. Returns the loss before the step. Throws
// TrainingDivergenceError (leaving `net` untouched) on a non-finite loss.
double DqnUpdate(nn::NetParams& net, nn::AdamMoments& moments,
                 const nn::NetParams& target_net,
                 std::span<const env::Transition> batch,
                 const DqnStepConfig& config,
                 const env::Workspace& workspace = {});

class RlDivergenceError : public TrainingDivergenceError {
 public:
  RlDivergenceError(const std::string& what, nn::NetParams last_good,
                    long last_good_step)
      : TrainingDivergenceError(what),
        last_good(std::move(last_good)),
        last_good_step(last_good_step) {}

  nn::NetParams last_good;
  long last_good_step;
};

struct RlLogRow {
  long step = 0;
  double loss = 0.0;  // mean over the updates since the previous row
  double epsilon = 0.0;
  double success_ma = 0.0;
};

struct RlResult {
  nn::NetParams params;
  long steps = 0;
  long updates = 0;
  int episodes = 0;
  int successes = 0;
  std::vector<RlLogRow> log;
};

struct RlHooks {
  std::function<void(const RlLogRow&)> on_log;
  // Called every checkpoint_every steps and at the end with a snapshot.
  std::function<void(long step, const nn::NetParams&)> on_checkpoint;
};

// Alternates acting with eps-RHP on sampled tasks (nominal physics), storing
// the transition, and one DQN update on a uniform minibatch. The buffer is
// pre-filled with `seed_transitions`. Throws RlDivergenceError carrying the
// parameters of the last checkpoint when an update diverges.
RlResult TrainRl(const nn::NetParams& initial,
                 std::span<const env::Transition> seed_transitions,
                 const RlConfig& config, std::uint64_t seed, long total_steps,
                 const RlHooks& hooks = {});

// "step,loss,epsilon,success_ma".
void WriteRlLog(std::span<const RlLogRow> rows,
                const std::filesystem::path& path);

}  // namespace clutterpush::rl

#endif  // CLUTTERPUSH_RL_REFINER_H_

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

#include "clutterpush/rl/refiner.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <stdexcept>

#include "clutterpush/env/returns.h"
#include "clutterpush/nn/features.h"

namespace clutterpush::rl {

double EpsilonSchedule::At(long step) const {
  if (decay_steps <= 0 || step >= decay_steps) return end;
  const double f = static_cast<double>(std::max(step, 0L)) / decay_steps;
  return start + (end - start) * f;
}

void RlConfig::Validate() const {
  auto in_unit = [](double e) { return e >= 0.0 && e <= 1.0; };
  if (!in_unit(epsilon.start) || !in_unit(epsilon.end)) {
    throw std::invalid_argument("rl: epsilon must lie in [0, 1]");
  }
  if (batch_size < 1) throw std::invalid_argument("rl: batch size must be >= 1");
  if (capacity == 0) throw std::invalid_argument("rl: capacity must be > 0");
  if (target_sync_interval < 1) {
    throw std::invalid_argument("rl: target sync interval must be >= 1");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("rl: gamma must lie in (0, 1]");
  }
  if (episode_cap < 1) throw std::invalid_argument("rl: episode cap >= 1");
  rhp.Validate();
}

std::string RlConfig::ToString() const {
  char buf[400];
  std::snprintf(buf, sizeof(buf),
                "eps_start=%.17g eps_end=%.17g eps_decay=%ld capacity=%zu M=%d "
                "target_sync=%d lr=%.17g l2=%.17g gamma=%.17g cap=%d rhp={%s}",
                epsilon.start, epsilon.end, epsilon.decay_steps, capacity,
                batch_size, target_sync_interval, lr, l2, gamma, episode_cap,
                rhp.ToString().c_str());
  return buf;
}

Action EpsRhp(const env::WorldState& state,
              std::span<const env::GoalRegion> goals, const nn::NetParams& net,
              const env::Model& model, Rng& rng, double epsilon,
              const rhp::RhpConfig& config, rhp::QueryStats* stats) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("eps-rhp: epsilon must lie in [0, 1]");
  }
  if (Uniform(rng, 0.0, 1.0) < epsilon) {
    if (stats) *stats = rhp::QueryStats{};
    return static_cast<Action>(UniformInt(rng, 0, kNumActions - 1));
  }
  return rhp::SelectAction(state, goals, net, model, config, rng, stats);
}

double DqnTarget(const env::Transition& t, std::span<const double> q_next,
                 double gamma, int action_cap) {
  if (t.terminal) return t.r;
  if (t.out_of_bounds) return t.r + gamma * env::FailureValue(gamma, action_cap);
  return t.r + gamma * *std::max_element(q_next.begin(), q_next.end());
}

nn::TrainingBatch BuildDqnBatch(const nn::NetParams& target_net,
                                std::span<const env::Transition> batch,
                                double gamma, const env::Workspace& workspace,
                                int action_cap) {
  if (batch.empty()) throw std::invalid_argument("dqn: empty batch");
  const int dim = target_net.arch().input_dim;
  const int m = static_cast<int>(batch.size());
  nn::Matrix next(m, dim);
  for (int i = 0; i < m; ++i) {
    nn::EncodeFeatures(batch[i].s_next, batch[i].goals, workspace,
                       {next.row(i), std::size_t(dim)});
  }
  const nn::Matrix q_next = nn::ForwardBatch(target_net, next);
  nn::TrainingBatch out;
  out.Reserve(m, dim, kNumActions);
  for (int i = 0; i < m; ++i) {
    const double y = DqnTarget(
        batch[i], {q_next.row(i), std::size_t(kNumActions)}, gamma, action_cap);
    out.AddIndexed(nn::EncodeFeatures(batch[i].s, batch[i].goals, workspace),
                   ActionIndex(batch[i].a), y, kNumActions);
  }
  return out;
}

double DqnLoss(const nn::NetParams& net, const nn::NetParams& target_net,
               std::span<const env::Transition> batch, double gamma, double l2,
               const env::Workspace& workspace, int action_cap) {
  double loss = 0.0;
  for (const auto& t : batch) {
    const auto q_next =
        nn::Forward(target_net, nn::EncodeFeatures(t.s_next, t.goals, workspace));
    const double y = DqnTarget(t, q_next, gamma, action_cap);
    const auto q = nn::Forward(net, nn::EncodeFeatures(t.s, t.goals, workspace));
    const double d = y - q[ActionIndex(t.a)];
    loss += d * d;
  }
  return loss + l2 * net.SquaredNorm();
}

double DqnUpdate(nn::NetParams& net, nn::AdamMoments& moments,
                 const nn::NetParams& target_net,
                 std::span<const env::Transition> batch,
                 const DqnStepConfig& config,
                 const env::Workspace& workspace) {
  const nn::TrainingBatch tb = BuildDqnBatch(target_net, batch, config.gamma,
                                             workspace, config.action_cap);
  nn::LossAndGrad lg = nn::Grad(net, tb, config.l2);
  if (!std::isfinite(lg.loss) || !lg.grad.AllFinite()) {
    throw TrainingDivergenceError("dqn update produced a non-finite loss");
  }
  nn::AdamStep(net, lg.grad, moments, config.adam);
  return lg.loss;
}

RlResult TrainRl(const nn::NetParams& initial,
                 std::span<const env::Transition> seed_transitions,
                 const RlConfig& config, std::uint64_t seed, long total_steps,
                 const RlHooks& hooks) {
  config.Validate();
  RlResult result;
  result.params = initial;
  if (total_steps <= 0) return result;

  nn::NetParams& net = result.params;
  nn::NetParams target = initial;
  nn::NetParams last_good = initial;
  long last_good_step = 0;
  nn::AdamMoments moments = nn::AdamMoments::ZerosLike(net);
  const DqnStepConfig step_config{.gamma = config.gamma,
                                  .l2 = config.l2,
                                  .adam = {.lr = config.lr},
                                  .action_cap = config.episode_cap};

  ReplayBuffer buffer(config.capacity);
  for (const auto& t : seed_transitions) buffer.Add(t);

  Rng act_rng(DeriveSeed(seed, "rl-act"));
  Rng batch_rng(DeriveSeed(seed, "rl-batch"));
  const env::Workspace& workspace = config.tasks.workspace;

  env::TaskInstance task;
  env::Model model;
  env::WorldState state;
  int episode_steps = 0;
  bool need_task = true;
  std::deque<int> window;
  int window_sum = 0;
  double loss_sum = 0.0;
  long loss_count = 0;

  for (long step = 0; step < total_steps; ++step) {
    while (need_task) {
      Rng task_rng(DeriveSeed(seed, "rl-task", result.episodes));
      task = env::SampleTask(task_rng, config.tasks);
      if (env::IsGoal(task.initial, task.goals)) {
        ++result.episodes;
        continue;
      }
      model = env::Model{task.specs, config.sim, workspace};
      state = task.initial;
      episode_steps = 0;
      need_task = false;
    }

    const double eps = config.epsilon.At(step);
    const Action a = EpsRhp(state, task.goals, net, model, act_rng, eps,
                            config.rhp);
    env::Transition t;
    t.s = state;
    t.a = a;
    t.r = env::kStepReward;
    t.s_next = model.Apply(state, a);
    t.out_of_bounds = !env::InWorkspace(t.s_next, workspace);
    t.terminal = !t.out_of_bounds && env::IsGoal(t.s_next, task.goals);
    t.goals = task.goals;
    const bool done = t.terminal || t.out_of_bounds ||
                      ++episode_steps >= config.episode_cap;
    const bool success = t.terminal;
    state = t.s_next;
    buffer.Add(std::move(t));

    if (buffer.size() >= static_cast<std::size_t>(config.batch_size)) {
      const auto batch = buffer.Sample(config.batch_size, batch_rng);
      try {
        loss_sum += DqnUpdate(net, moments, target, batch, step_config,
                              workspace);
        ++loss_count;
      } catch (const TrainingDivergenceError& e) {
        throw RlDivergenceError(
            std::string(e.what()) + " at step " + std::to_string(step) +
                "; last good checkpoint at step " +
                std::to_string(last_good_step),
            last_good, last_good_step);
      }
      if (++result.updates % config.target_sync_interval == 0) target = net;
    }

    if (done) {
      ++result.episodes;
      result.successes += success;
      window.push_back(success);
      window_sum += success;
      if (static_cast<int>(window.size()) > config.success_window) {
        window_sum -= window.front();
        window.pop_front();
      }
      need_task = true;
    }
    result.steps = step + 1;

    if (config.log_every > 0 && result.steps % config.log_every == 0) {
      RlLogRow row{.step = result.steps,
                   .loss = loss_count ? loss_sum / loss_count : 0.0,
                   .epsilon = eps,
                   .success_ma = window.empty()
                                     ? 0.0
                                     : double(window_sum) / window.size()};
      result.log.push_back(row);
      if (hooks.on_log) hooks.on_log(row);
      loss_sum = 0.0;
      loss_count = 0;
    }
    if (config.checkpoint_every > 0 &&
        result.steps % config.checkpoint_every == 0) {
      last_good = net;
      last_good_step = result.steps;
      if (hooks.on_checkpoint) hooks.on_checkpoint(result.steps, net);
    }
  }
  if (hooks.on_checkpoint && last_good_step != result.steps) {
    hooks.on_checkpoint(result.steps, net);
  }
  return result;
}

void WriteRlLog(std::span<const RlLogRow> rows,
                const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw FormatError("cannot write '" + path.string() + "'");
  os << "step,loss,epsilon,success_ma\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g\n", r.step, r.loss,
                  r.epsilon, r.success_ma);
    os << buf;
  }
}

}  // namespace clutterpush::rl

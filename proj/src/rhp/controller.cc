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

#include "clutterpush/rhp/controller.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>

#include "clutterpush/env/returns.h"
#include "clutterpush/errors.h"
#include "clutterpush/nn/features.h"

namespace clutterpush::rhp {
namespace {

std::vector<double> Values(const WorldState& s,
                           std::span<const GoalRegion> goals,
                           const nn::NetParams& net,
                           const env::Workspace& workspace) {
  return nn::Forward(net, nn::EncodeFeatures(s, goals, workspace));
}

Action RunQuery(const WorldState& state, std::span<const GoalRegion> goals,
                const nn::NetParams& net, const env::Model& model,
                const RhpConfig& config, Rng& rng, QueryStats* stats,
                bool parallel) {
  config.Validate();
  if (config.h == 0) {
    if (stats) {
      *stats = QueryStats{};
      stats->forward_passes = 1;
    }
    return GreedyPolicy(state, goals, net, model.workspace);
  }
  const int n = config.n;
  std::vector<std::uint64_t> seeds(n);
  for (auto& s : seeds) s = rng();

  std::vector<RolloutResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](int i) {
    try {
      Rng local(seeds[i]);
      results[i] = Rollout(state, goals, net, model, config, local);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) run(i);
  } else {
    for (int i = 0; i < n; ++i) run(i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (results[i].return_value > results[best].return_value) best = i;
  }
  if (stats) {
    *stats = QueryStats{};
    stats->best = best;
    for (const auto& r : results) {
      stats->transitions += r.transitions;
      stats->forward_passes += r.forward_passes;
      stats->returns.push_back(r.return_value);
      stats->first_actions.push_back(r.first_action);
    }
  }
  return results[best].first_action;
}

}  // namespace

void RhpConfig::Validate() const {
  if (n < 1) throw std::invalid_argument("rhp: n must be >= 1");
  if (h < 0) throw std::invalid_argument("rhp: h must be >= 0");
  if (!(tau > 0.0)) throw std::invalid_argument("rhp: tau must be > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("rhp: gamma must lie in (0, 1]");
  }
}

std::string RhpConfig::ToString() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "n=%d h=%d tau=%.17g gamma=%.17g bootstrap=%s",
                n, h, tau, gamma,
                bootstrap == Bootstrap::kMaxAction ? "max" : "sampled");
  return buf;
}

std::array<double, kNumActions> SoftmaxPolicy(std::span<const double> q,
                                              double tau) {
  if (q.size() != kNumActions) throw ShapeError("softmax expects 6 values");
  if (!(tau > 0.0)) throw std::invalid_argument("softmax: tau must be > 0");
  const double top = *std::max_element(q.begin(), q.end());
  std::array<double, kNumActions> p{};
  double sum = 0.0;
  for (int a = 0; a < kNumActions; ++a) {
    p[a] = std::exp((q[a] - top) / tau);
    sum += p[a];
  }
  for (double& v : p) v /= sum;
  return p;
}

Action SampleAction(std::span<const double> probs, Rng& rng) {
  const double u = Uniform(rng, 0.0, 1.0);
  double acc = 0.0;
  int last = 0;
  for (int a = 0; a < kNumActions; ++a) {
    if (probs[a] <= 0.0) continue;
    last = a;
    acc += probs[a];
    if (u < acc) return static_cast<Action>(a);
  }
  return static_cast<Action>(last);
}

Action GreedyAction(std::span<const double> q) {
  if (q.size() != kNumActions) throw ShapeError("greedy expects 6 values");
  int best = 0;
  for (int a = 1; a < kNumActions; ++a) {
    if (q[a] > q[best]) best = a;
  }
  return static_cast<Action>(best);
}

RolloutResult Rollout(const WorldState& state,
                      std::span<const GoalRegion> goals,
                      const nn::NetParams& net, const env::Model& model,
                      const RhpConfig& config, Rng& rng) {
  config.Validate();
  RolloutResult result;
  result.trajectory.reserve(config.h);
  WorldState s = state;
  double discount = 1.0;
  for (int t = 0; t < config.h; ++t) {
    const auto q = Values(s, goals, net, model.workspace);
    ++result.forward_passes;
    const Action a = SampleAction(SoftmaxPolicy(q, config.tau), rng);
    if (t == 0) result.first_action = a;
    WorldState next = model.Apply(s, a);
    ++result.transitions;
    result.trajectory.push_back({std::move(s), a, env::kStepReward});
    result.return_value += discount * env::kStepReward;
    discount *= config.gamma;
    s = std::move(next);
    if (!env::InWorkspace(s, model.workspace)) {
      result.left_workspace = true;
      result.return_value +=
          discount * env::FailureValue(config.gamma, config.action_cap);
      return result;
    }
    if (env::IsGoal(s, goals)) {
      result.reached_goal_at = t + 1;
      return result;
    }
  }
  const auto q = Values(s, goals, net, model.workspace);
  ++result.forward_passes;
  double tail;
  if (config.bootstrap == Bootstrap::kMaxAction) {
    tail = *std::max_element(q.begin(), q.end());
  } else {
    tail = q[ActionIndex(SampleAction(SoftmaxPolicy(q, config.tau), rng))];
  }
  result.return_value += discount * tail;
  return result;
}

Action SelectAction(const WorldState& state, std::span<const GoalRegion> goals,
                    const nn::NetParams& net, const env::Model& model,
                    const RhpConfig& config, Rng& rng, QueryStats* stats) {
  return RunQuery(state, goals, net, model, config, rng, stats, true);
}

Action SelectActionSerial(const WorldState& state,
                          std::span<const GoalRegion> goals,
                          const nn::NetParams& net, const env::Model& model,
                          const RhpConfig& config, Rng& rng,
                          QueryStats* stats) {
  return RunQuery(state, goals, net, model, config, rng, stats, false);
}

Action GreedyPolicy(const WorldState& state, std::span<const GoalRegion> goals,
                    const nn::NetParams& net, const env::Workspace& workspace) {
  return GreedyAction(Values(state, goals, net, workspace));
}

env::Policy MakeGreedyPolicy(std::shared_ptr<const nn::NetParams> net,
                             std::vector<GoalRegion> goals,
                             env::Workspace workspace) {
  return [net = std::move(net), goals = std::move(goals),
          workspace](const WorldState& s) -> std::optional<Action> {
    return GreedyPolicy(s, goals, *net, workspace);
  };
}

env::Policy MakeRhpPolicy(std::shared_ptr<const nn::NetParams> net,
                          std::vector<GoalRegion> goals, env::Model model,
                          RhpConfig config, std::uint64_t seed) {
  config.Validate();
  auto rng = std::make_shared<Rng>(seed);
  return [net = std::move(net), goals = std::move(goals),
          model = std::move(model), config,
          rng](const WorldState& s) -> std::optional<Action> {
    return SelectAction(s, goals, *net, model, config, *rng);
  };
}

}  // namespace clutterpush::rhp

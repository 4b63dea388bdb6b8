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

#include "clutterpush/bench/evaluate.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <tuple>

#include "clutterpush/random.h"

namespace clutterpush::bench {
namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void CheckOptions(const EvalOptions& o,
                  const std::shared_ptr<const nn::NetParams>& net) {
  if (o.instances < 0) throw std::invalid_argument("instances must be >= 0");
  if (o.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (o.cap < 1) throw std::invalid_argument("action cap must be >= 1");
  if (o.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (o.policy.learned() && !net) {
    throw std::invalid_argument("policy " + o.policy.Name() +
                                " needs network weights");
  }
  if (o.policy.kind == PolicyKind::kRhp) o.RhpSettings().Validate();
}

void RunInstance(const EvalOptions& o,
                 const std::shared_ptr<const nn::NetParams>& net, int i,
                 std::span<EpisodeRecord> out) {
  const env::TaskInstance task = EvalTask(o, i);
  const env::Model nominal{task.specs, o.sim, o.tasks.workspace};
  const bool timed = o.timing == TimingMode::kWall;

  std::optional<rrt::Plan> plan;
  double plan_seconds = 0.0;
  if (o.policy.kind == PolicyKind::kKdp) {
    bool cached = false;
    if (o.kdp_cache) {
      std::lock_guard lock(o.kdp_cache->mu);
      if (auto it = o.kdp_cache->plans.find(i); it != o.kdp_cache->plans.end()) {
        std::tie(plan, plan_seconds) = it->second;
        cached = true;
      }
    }
    if (!cached) {
      const auto t0 = Clock::now();
      plan = rrt::PlanTask(task, nominal, o.rrt,
                           DeriveSeed(o.seed, "eval-kdp", i))
                 .plan;
      plan_seconds = Since(t0);
      if (o.kdp_cache) {
        std::lock_guard lock(o.kdp_cache->mu);
        o.kdp_cache->plans.emplace(i, std::make_pair(plan, plan_seconds));
      }
    }
  }

  for (int j = 0; j < o.trials; ++j) {
    EpisodeRecord& rec = out[j];
    rec.instance = i;
    rec.trial = j;
    const auto exec = EvalExecSpecs(o, task, i, j);

    env::Policy policy;
    switch (o.policy.kind) {
      case PolicyKind::kKdp: {
        if (!plan) {
          rec.end = env::EpisodeEnd::kPolicyStopped;
          rec.seconds = timed ? plan_seconds : 0.0;
          continue;
        }
        auto next = std::make_shared<std::size_t>(0);
        policy = [&actions = plan->actions,
                  next](const env::WorldState&) -> std::optional<Action> {
          if (*next >= actions.size()) return std::nullopt;
          return actions[(*next)++];
        };
        break;
      }
      case PolicyKind::kGreedy:
        policy = rhp::MakeGreedyPolicy(net, task.goals, o.tasks.workspace);
        break;
      case PolicyKind::kRhp:
        policy = rhp::MakeRhpPolicy(net, task.goals, nominal, o.RhpSettings(),
                                    DeriveSeed(o.seed, "eval-rhp", i, j));
        break;
    }
    const auto t0 = Clock::now();
    const env::EpisodeResult ep =
        env::RunEpisode(policy, task, exec, o.sim, o.tasks.workspace, o.cap);
    rec.seconds = timed ? Since(t0) + plan_seconds : 0.0;
    rec.success = ep.success;
    rec.steps = ep.steps;
    rec.end = ep.end;
  }
}

EvalResult Run(const EvalOptions& o, std::shared_ptr<const nn::NetParams> net,
               bool parallel) {
  CheckOptions(o, net);
  EvalResult result;
  result.episodes.resize(std::size_t(o.instances) * o.trials);
  std::vector<std::exception_ptr> errors(o.instances);
  auto body = [&](int i) {
    try {
      RunInstance(o, net, i,
                  std::span(result.episodes)
                      .subspan(std::size_t(i) * o.trials, o.trials));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < o.instances; ++i) body(i);
  } else {
    for (int i = 0; i < o.instances; ++i) body(i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::tie(result.success_rate, result.ci) =
      SuccessWithConfidence(result.episodes, o.batch_size);
  double seconds = 0.0;
  int successes = 0;
  for (const auto& e : result.episodes) {
    result.max_steps = std::max(result.max_steps, e.steps);
    if (!e.success) continue;
    ++successes;
    seconds += e.seconds;
  }
  if (o.timing == TimingMode::kWall && successes > 0) {
    result.avg_seconds = seconds / successes;
  }
  return result;
}

}  // namespace

PolicySpec PolicySpec::Parse(const std::string& text) {
  if (text == "KDP") return {PolicyKind::kKdp, 0, 0};
  if (text == "GP") return {PolicyKind::kGreedy, 1, 0};
  const std::string prefix = "RHP-";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    int n = 0, h = 0;
    const auto x = rest.find('x');
    try {
      if (x != std::string::npos) {
        std::size_t used_n = 0, used_h = 0;
        n = std::stoi(rest.substr(0, x), &used_n);
        h = std::stoi(rest.substr(x + 1), &used_h);
        if (used_n != x || used_h != rest.size() - x - 1) n = 0;
      } else if (rest.size() == 2 && std::isdigit(rest[0]) &&
                 std::isdigit(rest[1])) {
        n = rest[0] - '0';
        h = rest[1] - '0';
      }
    } catch (const std::exception&) {
      n = 0;
    }
    if (n >= 1 && h >= 1) return {PolicyKind::kRhp, n, h};
  }
  throw std::invalid_argument("unknown policy '" + text +
                              "' (expected KDP, GP, RHP-66, RHP-12x6, ...)");
}

std::string PolicySpec::Name() const {
  switch (kind) {
    case PolicyKind::kKdp: return "KDP";
    case PolicyKind::kGreedy: return "GP";
    case PolicyKind::kRhp:
      if (n < 10 && h < 10) {
        return "RHP-" + std::to_string(n) + std::to_string(h);
      }
      return "RHP-" + std::to_string(n) + "x" + std::to_string(h);
  }
  return "?";
}

rhp::RhpConfig EvalOptions::RhpSettings() const {
  return rhp::RhpConfig{.n = policy.n,
                        .h = policy.h,
                        .tau = tau,
                        .gamma = gamma,
                        .bootstrap = bootstrap,
                        .action_cap = cap};
}

env::TaskInstance EvalTask(const EvalOptions& options, int instance) {
  Rng rng(DeriveSeed(options.seed, "eval-task", instance));
  return env::SampleTask(rng, options.tasks);
}

std::vector<env::BodySpec> EvalExecSpecs(const EvalOptions& options,
                                         const env::TaskInstance& task,
                                         int instance, int trial) {
  Rng rng(DeriveSeed(options.seed, "eval-perturb", instance, trial));
  return env::PerturbParams(task.specs, options.level, rng);
}

EvalResult Evaluate(const EvalOptions& options,
                    std::shared_ptr<const nn::NetParams> net) {
  return Run(options, std::move(net), true);
}

EvalResult EvaluateSerial(const EvalOptions& options,
                          std::shared_ptr<const nn::NetParams> net) {
  return Run(options, std::move(net), false);
}

std::pair<double, double> SuccessWithConfidence(
    std::span<const EpisodeRecord> episodes, int batch_size) {
  if (episodes.empty()) return {0.0, 0.0};
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  std::vector<std::pair<int, int>> batches;  // (successes, episodes)
  int successes = 0;
  for (const auto& e : episodes) {
    const std::size_t b = e.instance / batch_size;
    if (batches.size() <= b) batches.resize(b + 1);
    batches[b].first += e.success;
    batches[b].second += 1;
    successes += e.success;
  }
  const double mean = double(successes) / episodes.size();
  std::vector<double> rates;
  for (const auto& [s, n] : batches) {
    if (n > 0) rates.push_back(double(s) / n);
  }
  if (rates.size() < 2) return {mean, 0.0};
  double avg = 0.0;
  for (double r : rates) avg += r;
  avg /= rates.size();
  double var = 0.0;
  for (double r : rates) var += (r - avg) * (r - avg);
  var /= rates.size() - 1;
  return {mean, std::sqrt(var / rates.size())};
}

}  // namespace clutterpush::bench

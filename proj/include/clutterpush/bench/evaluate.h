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

#ifndef CLUTTERPUSH_BENCH_EVALUATE_H_
#define CLUTTERPUSH_BENCH_EVALUATE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clutterpush/env/mdp.h"
#include "clutterpush/env/task.h"
#include "clutterpush/nn/network.h"
#include "clutterpush/rhp/controller.h"
#include "clutterpush/rrt/planner.h"

namespace clutterpush::bench {

enum class PolicyKind { kKdp, kGreedy, kRhp };

// "KDP", "GP", or "RHP-<n><h>" (single digits, e.g. RHP-66) or
// "RHP-<n>x<h>" (e.g. RHP-12x6).
struct PolicySpec {
  PolicyKind kind = PolicyKind::kGreedy;
  int n = 1;
  int h = 0;

  static PolicySpec Parse(const std::string& text);  // std::invalid_argument
  std::string Name() const;
  bool learned() const { return kind != PolicyKind::kKdp; }
};

enum class TimingMode { kWall, kNone };

// KDP plans keyed by instance, with their planning seconds. Shared between
// evaluations that use the same seed, task sampler and planner budget so
// each instance is planned once.
struct KdpPlanCache {
  std::mutex mu;
  std::map<int, std::pair<std::optional<rrt::Plan>, double>> plans;
};

struct EvalOptions {
  PolicySpec policy;
  env::UncertaintyLevel level = env::UncertaintyLevel::kNone;
  int instances = 100;
  int trials = 1;
  std::uint64_t seed = 0;
  int cap = env::kDefaultActionCap;
  TimingMode timing = TimingMode::kWall;
  double tau = 1.0;
  double gamma = 0.98;
  rhp::Bootstrap bootstrap = rhp::Bootstrap::kMaxAction;
  rrt::RrtConfig rrt;
  env::TaskSamplerConfig tasks;
  physics::SimConfig sim = physics::DefaultSimConfig();
  int batch_size = 20;  // instances per confidence batch
  std::shared_ptr<KdpPlanCache> kdp_cache;

  rhp::RhpConfig RhpSettings() const;
};

struct EpisodeRecord {
  int instance = 0;
  int trial = 0;
  bool success = false;
  int steps = 0;
  env::EpisodeEnd end = env::EpisodeEnd::kActionCap;
  double seconds = 0.0;  // decision making plus physics; KDP adds planning
};

struct EvalResult {
  std::vector<EpisodeRecord> episodes;  // instance-major, then trial
  double success_rate = 0.0;
  double ci = 0.0;  // standard error of per-batch success rates
  std::optional<double> avg_seconds;  // over successes; unset without timing
  int max_steps = 0;
};

// Instance i uses task seed DeriveSeed(seed, "eval-task", i); trial j of it
// perturbs the execution specs with DeriveSeed(seed, "eval-perturb", i, j).
// The same (seed, i, j) therefore sees the same world under every policy.
env::TaskInstance EvalTask(const EvalOptions& options, int instance);
std::vector<env::BodySpec> EvalExecSpecs(const EvalOptions& options,
                                         const env::TaskInstance& task,
                                         int instance, int trial);

// Instances run in parallel; results do not depend on the thread count.
// `net` is required for learned policies.
EvalResult Evaluate(const EvalOptions& options,
                    std::shared_ptr<const nn::NetParams> net);

// Single-threaded reference of Evaluate.
EvalResult EvaluateSerial(const EvalOptions& options,
                          std::shared_ptr<const nn::NetParams> net);

// Pools the episodes of consecutive `batch_size`-instance batches into
// per-batch success rates and returns (mean rate over all episodes,
// sample standard deviation of batch rates / sqrt(batches)).
std::pair<double, double> SuccessWithConfidence(
    std::span<const EpisodeRecord> episodes, int batch_size);

}  // namespace clutterpush::bench

#endif  // CLUTTERPUSH_BENCH_EVALUATE_H_

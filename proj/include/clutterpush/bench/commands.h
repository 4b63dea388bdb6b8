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

#ifndef CLUTTERPUSH_BENCH_COMMANDS_H_
#define CLUTTERPUSH_BENCH_COMMANDS_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "clutterpush/bench/evaluate.h"
#include "clutterpush/bench/report.h"
#include "clutterpush/imitation/trainer.h"
#include "clutterpush/rl/refiner.h"
#include "clutterpush/rrt/planner.h"

// Library form of the command-line subcommands. Each writes its outputs and
// a "<output>.manifest.json" that Rerun() accepts.
namespace clutterpush::bench {

using Progress = std::function<void(const std::string&)>;

struct GeneratePlansArgs {
  int count = 10;
  std::uint64_t seed = 0;
  std::string out;
  int max_nodes = 60000;
  double max_seconds = 120.0;
};

struct GeneratePlansSummary {
  int attempted = 0;
  int solved = 0;
  double mean_length = 0.0;
  double median_length = 0.0;
  std::vector<rrt::Plan> plans;  // solved, in task order

  double solve_rate() const {
    return attempted ? double(solved) / attempted : 0.0;
  }
};

// Task i is SampleTask(DeriveSeed(seed, "task", i)); its plan is searched
// with DeriveSeed(seed, "plan", i). Solved plans are written to `out`.
GeneratePlansSummary GeneratePlans(const GeneratePlansArgs& args,
                                   const Progress& progress = {});

struct TrainImitationArgs {
  std::string plans;
  int limit = 0;  // use the first `limit` plans; 0 = all
  std::string out;
  std::string curve;  // loss CSV; empty: "<out>.loss.csv"
  std::uint64_t seed = 0;
  imitation::ImitationConfig config;
};

imitation::ImitationResult TrainImitationCommand(
    const TrainImitationArgs& args, const Progress& progress = {});

struct TrainRlArgs {
  std::string init;     // imitation weights
  std::string plans;    // plan log whose transitions seed the buffer
  std::string out;
  std::string log;      // CSV; empty: "<out>.log.csv"
  std::string checkpoint_dir;  // empty: no checkpoint files
  long steps = 50000;
  std::uint64_t seed = 0;
  rl::RlConfig config;
};

rl::RlResult TrainRlCommand(const TrainRlArgs& args,
                            const Progress& progress = {});

struct EvaluateArgs {
  std::vector<std::string> policies = {"RHP-66"};
  std::string variant = "il";  // "il" or "rl"; "rl" labels rows "+RL"
  std::string weights;
  std::vector<std::string> levels = {"none"};
  int instances = 100;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string timing = "wall";  // "wall" or "none"
  double tau = 1.0;
  double gamma = 0.98;
  std::string bootstrap = "max";  // "max" or "sampled"
  int max_nodes = 60000;
  double max_seconds = 120.0;
  int cap = env::kDefaultActionCap;
  std::string out;  // report CSV
};

struct EvaluateOutput {
  std::vector<ReportRow> rows;
  std::vector<EvalResult> results;  // row-aligned
  std::string csv;
};

// Rows are policies x levels, policy-major. KDP plans are cached across
// levels and trials.
EvaluateOutput EvaluateCommand(const EvaluateArgs& args,
                               const Progress& progress = {});

std::string PolicyLabel(const PolicySpec& spec, const std::string& variant);

struct SweepArgs {
  std::string plans;
  std::vector<int> sizes = {50, 200, 800, 2000};
  int instances = 500;
  std::uint64_t seed = 0;
  std::string out;       // CSV: size,success_rate,ci,instances,best_epoch,seed
  std::string nets_dir;  // optional: weights per size
  imitation::ImitationConfig config;
};

struct SweepRow {
  int size = 0;
  double success_rate = 0.0;
  double ci = 0.0;
  int instances = 0;
  int best_epoch = 0;
  std::uint64_t seed = 0;
};

std::vector<SweepRow> SweepCommand(const SweepArgs& args,
                                   const Progress& progress = {});
std::string FormatSweepCsv(const std::vector<SweepRow>& rows);

struct RolloutArgs {
  std::string task;          // task JSON line file; empty: sample from seed
  std::uint64_t task_seed = 0;
  std::string policy = "RHP-66";
  std::string weights;
  std::string level = "none";
  std::uint64_t seed = 0;
  double tau = 1.0;
  double gamma = 0.98;
  int max_nodes = 60000;
  double max_seconds = 120.0;
  std::string out;         // trajectory JSON line
  std::string frames_dir;  // SVG frames; empty: none
};

struct RolloutOutput {
  bool success = false;
  int steps = 0;
  int frames = 0;
};

RolloutOutput RolloutCommand(const RolloutArgs& args);

// Renders every trajectory record of `trajectory` into frames_dir (one
// subdirectory per record when there are several). Returns frame count.
int RenderCommand(const std::string& trajectory, const std::string& frames_dir);

struct RerunResult {
  std::string command;
  std::string output;
  std::string expected_digest;  // recorded in the manifest
  std::string actual_digest;
  bool identical() const { return expected_digest == actual_digest; }
};

// Re-executes the run described by a manifest, writing the primary output
// to `out`. Inputs must still match their recorded digests.
RerunResult Rerun(const std::string& manifest, const std::string& out,
                  const Progress& progress = {});

}  // namespace clutterpush::bench

#endif  // CLUTTERPUSH_BENCH_COMMANDS_H_

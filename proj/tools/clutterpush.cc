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

// clutterpush: plan generation, training, evaluation and rendering.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "clutterpush/bench/commands.h"
#include "clutterpush/errors.h"
#include "json.hpp"

namespace {

using namespace clutterpush;

void Say(const std::string& msg) { std::cerr << msg << std::endl; }

int Fail(const std::string& type, const std::string& what) {
  std::cerr << nlohmann::json{{"error", what}, {"type", type}}.dump()
            << std::endl;
  return 1;
}

void AddImitationFlags(CLI::App* app, imitation::ImitationConfig& c) {
  app->add_option("--epochs", c.epochs, "Maximum epochs")->capture_default_str();
  app->add_option("--batch-size", c.batch_size)->capture_default_str();
  app->add_option("--lr", c.lr, "Adam step size")->capture_default_str();
  app->add_option("--l2", c.l2)->capture_default_str();
  app->add_option("--gamma", c.gamma)->capture_default_str();
  app->add_option("--k", c.k, "Value margin (extra steps)")
      ->capture_default_str();
  app->add_option("--val-fraction", c.val_fraction)->capture_default_str();
  app->add_option("--patience", c.patience)->capture_default_str();
  app->add_flag("--symmetry,!--no-symmetry", c.symmetry_augment,
                "Train on mirrored and rotated copies of every plan");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned heuristics for receding-horizon pushing in clutter"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "No progress output");

  bench::GeneratePlansArgs gen;
  auto* gen_cmd = app.add_subcommand("generate-plans",
                                     "Solve random tasks with the RRT planner");
  gen_cmd->add_option("--count", gen.count)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Plan log (JSON lines)")
      ->required()
      ->envname("CLUTTERPUSH_PLANS");
  gen_cmd->add_option("--max-nodes", gen.max_nodes)->capture_default_str();
  gen_cmd->add_option("--max-seconds", gen.max_seconds)->capture_default_str();

  bench::TrainImitationArgs il;
  auto* il_cmd = app.add_subcommand("train-imitation",
                                    "Fit the value network to plans");
  il_cmd->add_option("--plans", il.plans)
      ->required()
      ->envname("CLUTTERPUSH_PLANS");
  il_cmd->add_option("--limit", il.limit, "Use only the first N plans");
  il_cmd->add_option("--out", il.out, "Weight file")->required();
  il_cmd->add_option("--curve", il.curve, "Loss curve CSV");
  il_cmd->add_option("--seed", il.seed)->capture_default_str();
  AddImitationFlags(il_cmd, il.config);

  bench::TrainRlArgs rla;
  auto* rl_cmd = app.add_subcommand("train-rl",
                                    "Refine a network with eps-RHP DQN");
  rl_cmd->add_option("--init", rla.init, "Starting weights")
      ->required()
      ->envname("CLUTTERPUSH_WEIGHTS");
  rl_cmd->add_option("--plans", rla.plans, "Plan log seeding the buffer")
      ->envname("CLUTTERPUSH_PLANS");
  rl_cmd->add_option("--out", rla.out)->required();
  rl_cmd->add_option("--log", rla.log, "Training log CSV");
  rl_cmd->add_option("--checkpoint-dir", rla.checkpoint_dir);
  rl_cmd->add_option("--steps", rla.steps)->capture_default_str();
  rl_cmd->add_option("--seed", rla.seed)->capture_default_str();
  rl_cmd->add_option("--eps-start", rla.config.epsilon.start)
      ->capture_default_str();
  rl_cmd->add_option("--eps-end", rla.config.epsilon.end)
      ->capture_default_str();
  rl_cmd->add_option("--eps-decay-steps", rla.config.epsilon.decay_steps)
      ->capture_default_str();
  rl_cmd->add_option("--capacity", rla.config.capacity)->capture_default_str();
  rl_cmd->add_option("--batch-size", rla.config.batch_size)
      ->capture_default_str();
  rl_cmd->add_option("--target-sync", rla.config.target_sync_interval)
      ->capture_default_str();
  rl_cmd->add_option("--lr", rla.config.lr)->capture_default_str();
  rl_cmd->add_option("--l2", rla.config.l2)->capture_default_str();
  rl_cmd->add_option("--gamma", rla.config.gamma)->capture_default_str();
  rl_cmd->add_option("--rollouts", rla.config.rhp.n, "RHP roll-outs (n)")
      ->capture_default_str();
  rl_cmd->add_option("--depth", rla.config.rhp.h, "RHP depth (h)")
      ->capture_default_str();
  rl_cmd->add_option("--tau", rla.config.rhp.tau)->capture_default_str();
  rl_cmd->add_option("--checkpoint-every", rla.config.checkpoint_every)
      ->capture_default_str();

  bench::EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate",
                                    "Success rates under injected uncertainty");
  ev_cmd->add_option("--policy", ev.policies, "KDP, GP, RHP-33, RHP-66, ...")
      ->delimiter(',')
      ->capture_default_str();
  ev_cmd->add_option("--variant", ev.variant, "il or rl (row label)")
      ->capture_default_str();
  ev_cmd->add_option("--weights", ev.weights)->envname("CLUTTERPUSH_WEIGHTS");
  ev_cmd->add_option("--uncertainty", ev.levels, "none, low, med, high")
      ->delimiter(',')
      ->capture_default_str();
  ev_cmd->add_option("--instances", ev.instances)->capture_default_str();
  ev_cmd->add_option("--trials", ev.trials)->capture_default_str();
  ev_cmd->add_option("--seed", ev.seed)->capture_default_str();
  ev_cmd->add_option("--timing", ev.timing, "wall or none")
      ->capture_default_str();
  ev_cmd->add_option("--tau", ev.tau)->capture_default_str();
  ev_cmd->add_option("--gamma", ev.gamma)->capture_default_str();
  ev_cmd->add_option("--bootstrap", ev.bootstrap, "max or sampled")
      ->capture_default_str();
  ev_cmd->add_option("--max-nodes", ev.max_nodes)->capture_default_str();
  ev_cmd->add_option("--max-seconds", ev.max_seconds)->capture_default_str();
  ev_cmd->add_option("--cap", ev.cap, "Actions per episode")
      ->capture_default_str();
  ev_cmd->add_option("--out", ev.out, "Report CSV");

  bench::SweepArgs sw;
  auto* sw_cmd = app.add_subcommand("sweep",
                                    "Greedy success versus number of plans");
  sw_cmd->add_option("--plans", sw.plans)
      ->required()
      ->envname("CLUTTERPUSH_PLANS");
  sw_cmd->add_option("--sizes", sw.sizes)->delimiter(',')->capture_default_str();
  sw_cmd->add_option("--instances", sw.instances)->capture_default_str();
  sw_cmd->add_option("--seed", sw.seed)->capture_default_str();
  sw_cmd->add_option("--out", sw.out, "Sweep CSV");
  sw_cmd->add_option("--nets-dir", sw.nets_dir);
  AddImitationFlags(sw_cmd, sw.config);

  bench::RolloutArgs ro;
  auto* ro_cmd = app.add_subcommand("rollout",
                                    "Run one episode and save its trajectory");
  ro_cmd->add_option("--task", ro.task, "Task or plan JSON-lines file");
  ro_cmd->add_option("--task-seed", ro.task_seed)->capture_default_str();
  ro_cmd->add_option("--policy", ro.policy)->capture_default_str();
  ro_cmd->add_option("--weights", ro.weights)->envname("CLUTTERPUSH_WEIGHTS");
  ro_cmd->add_option("--uncertainty", ro.level)->capture_default_str();
  ro_cmd->add_option("--seed", ro.seed)->capture_default_str();
  ro_cmd->add_option("--tau", ro.tau)->capture_default_str();
  ro_cmd->add_option("--out", ro.out, "Trajectory JSON lines");
  ro_cmd->add_option("--frames", ro.frames_dir, "SVG frame directory");

  std::string render_in, render_dir;
  auto* re_cmd = app.add_subcommand("render", "Trajectory file to SVG frames");
  re_cmd->add_option("--trajectory", render_in)->required();
  re_cmd->add_option("--frames", render_dir)->required();

  std::string manifest, rerun_out;
  auto* rr_cmd = app.add_subcommand("rerun",
                                    "Reproduce an output from its manifest");
  rr_cmd->add_option("--manifest", manifest)->required();
  rr_cmd->add_option("--out", rerun_out)->required();

  CLI11_PARSE(app, argc, argv);
  const bench::Progress progress =
      quiet ? bench::Progress{} : bench::Progress{Say};

  try {
    if (*gen_cmd) {
      const auto s = bench::GeneratePlans(gen, progress);
      std::printf("attempted %d solved %d solve_rate %.3f mean_length %.2f "
                  "median_length %.1f\n",
                  s.attempted, s.solved, s.solve_rate(), s.mean_length,
                  s.median_length);
    } else if (*il_cmd) {
      const auto r = bench::TrainImitationCommand(il, progress);
      std::printf("epochs %zu best_epoch %d train_plans %d val_plans %d\n",
                  r.curve.size(), r.best_epoch, r.train_plans, r.val_plans);
    } else if (*rl_cmd) {
      const auto r = bench::TrainRlCommand(rla, progress);
      std::printf("steps %ld updates %ld episodes %d successes %d\n", r.steps,
                  r.updates, r.episodes, r.successes);
    } else if (*ev_cmd) {
      const auto r = bench::EvaluateCommand(ev, progress);
      std::fputs(r.csv.c_str(), stdout);
    } else if (*sw_cmd) {
      std::fputs(bench::FormatSweepCsv(bench::SweepCommand(sw, progress)).c_str(),
                 stdout);
    } else if (*ro_cmd) {
      const auto r = bench::RolloutCommand(ro);
      std::printf("success %d steps %d frames %d\n", r.success, r.steps,
                  r.frames);
    } else if (*re_cmd) {
      std::printf("frames %d\n", bench::RenderCommand(render_in, render_dir));
    } else if (*rr_cmd) {
      const auto r = bench::Rerun(manifest, rerun_out, progress);
      std::printf("%s -> %s: %s (manifest %s, rerun %s)\n", r.command.c_str(),
                  r.output.c_str(), r.identical() ? "identical" : "DIFFERENT",
                  r.expected_digest.c_str(), r.actual_digest.c_str());
      return r.identical() ? 0 : 2;
    }
  } catch (const FormatError& e) {
    return Fail("format", e.what());
  } catch (const TrainingDivergenceError& e) {
    return Fail("divergence", e.what());
  } catch (const Error& e) {
    return Fail("runtime", e.what());
  } catch (const std::invalid_argument& e) {
    return Fail("usage", e.what());
  } catch (const std::exception& e) {
    return Fail("internal", e.what());
  }
  return 0;
}

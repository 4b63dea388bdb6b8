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

#include "clutterpush/bench/commands.h"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "clutterpush/bench/render.h"
#include "clutterpush/env/serialization.h"
#include "clutterpush/errors.h"
#include "clutterpush/random.h"
#include "clutterpush/rrt/plan_log.h"

namespace clutterpush {
namespace imitation {
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ImitationConfig, epochs,
                                                batch_size, lr, l2, gamma, k,
                                                val_fraction, patience, hidden,
                                                symmetry_augment)
}  // namespace imitation

namespace bench {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GeneratePlansArgs, count, seed,
                                                out, max_nodes, max_seconds)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TrainImitationArgs, plans,
                                                limit, out, curve, seed,
                                                config)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(EvaluateArgs, policies, variant,
                                                weights, levels, instances,
                                                trials, seed, timing, tau,
                                                gamma, bootstrap, max_nodes,
                                                max_seconds, cap, out)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SweepArgs, plans, sizes,
                                                instances, seed, out, nets_dir,
                                                config)

namespace {

using env::Json;

void Report(const Progress& progress, const std::string& msg) {
  if (progress) progress(msg);
}

std::string Fmt(const char* fmt, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

Json RlConfigToJson(const rl::RlConfig& c) {
  return Json{{"eps_start", c.epsilon.start},
              {"eps_end", c.epsilon.end},
              {"eps_decay_steps", c.epsilon.decay_steps},
              {"capacity", c.capacity},
              {"batch_size", c.batch_size},
              {"target_sync_interval", c.target_sync_interval},
              {"lr", c.lr},
              {"l2", c.l2},
              {"gamma", c.gamma},
              {"rhp_n", c.rhp.n},
              {"rhp_h", c.rhp.h},
              {"rhp_tau", c.rhp.tau},
              {"episode_cap", c.episode_cap},
              {"checkpoint_every", c.checkpoint_every},
              {"log_every", c.log_every}};
}

rl::RlConfig RlConfigFromJson(const Json& j) {
  rl::RlConfig c;
  c.epsilon.start = j.value("eps_start", c.epsilon.start);
  c.epsilon.end = j.value("eps_end", c.epsilon.end);
  c.epsilon.decay_steps = j.value("eps_decay_steps", c.epsilon.decay_steps);
  c.capacity = j.value("capacity", c.capacity);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.target_sync_interval =
      j.value("target_sync_interval", c.target_sync_interval);
  c.lr = j.value("lr", c.lr);
  c.l2 = j.value("l2", c.l2);
  c.gamma = j.value("gamma", c.gamma);
  c.rhp.n = j.value("rhp_n", c.rhp.n);
  c.rhp.h = j.value("rhp_h", c.rhp.h);
  c.rhp.tau = j.value("rhp_tau", c.rhp.tau);
  c.rhp.gamma = c.gamma;
  c.episode_cap = j.value("episode_cap", c.episode_cap);
  c.rhp.action_cap = c.episode_cap;
  c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
  c.log_every = j.value("log_every", c.log_every);
  return c;
}

Json TrainRlArgsToJson(const TrainRlArgs& a) {
  return Json{{"init", a.init},         {"plans", a.plans},
              {"out", a.out},           {"log", a.log},
              {"checkpoint_dir", a.checkpoint_dir},
              {"steps", a.steps},       {"seed", a.seed},
              {"config", RlConfigToJson(a.config)}};
}

TrainRlArgs TrainRlArgsFromJson(const Json& j) {
  TrainRlArgs a;
  a.init = j.value("init", a.init);
  a.plans = j.value("plans", a.plans);
  a.out = j.value("out", a.out);
  a.log = j.value("log", a.log);
  a.checkpoint_dir = j.value("checkpoint_dir", a.checkpoint_dir);
  a.steps = j.value("steps", a.steps);
  a.seed = j.value("seed", a.seed);
  a.config = RlConfigFromJson(j.value("config", Json::object()));
  return a;
}

Json BaseManifest(const std::string& command, std::uint64_t seed, Json args) {
  Json m = MakeManifest(command, seed, std::move(args));
  m["digests"]["sim"] = physics::DefaultSimConfig().Digest();
  return m;
}

void FinishManifest(Json& m, const std::string& role,
                    const std::filesystem::path& output) {
  AddManifestFile(m, "outputs", role, output);
  WriteManifest(m, ManifestPath(output));
}

rrt::RrtConfig Budget(int max_nodes, double max_seconds) {
  rrt::RrtConfig c;
  c.max_nodes = max_nodes;
  c.max_seconds = max_seconds;
  return c;
}

std::vector<rrt::Plan> LoadPlans(const std::string& path, int limit) {
  std::vector<rrt::Plan> plans = rrt::ReadPlanLog(path);
  if (limit > 0) {
    if (static_cast<int>(plans.size()) < limit) {
      throw std::invalid_argument(
          "plan log '" + path + "' holds " + std::to_string(plans.size()) +
          " plans, " + std::to_string(limit) + " requested");
    }
    plans.resize(limit);
  }
  return plans;
}

TimingMode ParseTiming(const std::string& s) {
  if (s == "wall") return TimingMode::kWall;
  if (s == "none") return TimingMode::kNone;
  throw std::invalid_argument("timing must be 'wall' or 'none'");
}

rhp::Bootstrap ParseBootstrap(const std::string& s) {
  if (s == "max") return rhp::Bootstrap::kMaxAction;
  if (s == "sampled") return rhp::Bootstrap::kSampledAction;
  throw std::invalid_argument("bootstrap must be 'max' or 'sampled'");
}

env::UncertaintyLevel ParseLevel(const std::string& s) {
  const auto level = env::ParseUncertainty(s);
  if (!level) throw std::invalid_argument("unknown uncertainty level '" + s + "'");
  return *level;
}

void CheckInputs(const Json& manifest) {
  if (manifest.value("version", "") != kToolVersion) {
    throw FormatError("manifest was written by version " +
                      manifest.value("version", "?") + ", this is " +
                      kToolVersion);
  }
  const auto sim = manifest.at("digests").value("sim", "");
  if (sim != physics::DefaultSimConfig().Digest()) {
    throw FormatError("physics configuration changed since the run (" + sim +
                      ")");
  }
  for (const auto& [role, file] : manifest.at("inputs").items()) {
    const std::string path = file.at("path");
    const std::string want = file.at("digest");
    const std::string have = FileDigest(path);
    if (have != want) {
      throw FormatError("input '" + role + "' (" + path + ") changed: digest " +
                        have + ", manifest " + want);
    }
  }
}

}  // namespace

GeneratePlansSummary GeneratePlans(const GeneratePlansArgs& args,
                                   const Progress& progress) {
  if (args.count < 0) throw std::invalid_argument("count must be >= 0");
  const rrt::RrtConfig budget = Budget(args.max_nodes, args.max_seconds);
  const physics::SimConfig sim = physics::DefaultSimConfig();
  std::vector<std::optional<rrt::Plan>> found(args.count);
  std::vector<std::exception_ptr> errors(args.count);
  int done = 0;

#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < args.count; ++i) {
    try {
      Rng rng(DeriveSeed(args.seed, "task", i));
      const env::TaskInstance task = env::SampleTask(rng);
      const env::Model model{task.specs, sim, {}};
      found[i] =
          rrt::PlanTask(task, model, budget, DeriveSeed(args.seed, "plan", i))
              .plan;
    } catch (...) {
      errors[i] = std::current_exception();
    }
#pragma omp critical(generate_plans_progress)
    {
      ++done;
      if (done % 50 == 0 || done == args.count) {
        Report(progress, "planned " + std::to_string(done) + "/" +
                             std::to_string(args.count));
      }
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  GeneratePlansSummary summary;
  summary.attempted = args.count;
  std::vector<Json> records;
  std::vector<int> lengths;
  for (auto& p : found) {
    if (!p) continue;
    records.push_back(rrt::PlanToJson(*p, sim.Digest()));
    lengths.push_back(p->length());
    summary.plans.push_back(std::move(*p));
  }
  summary.solved = static_cast<int>(summary.plans.size());
  if (!lengths.empty()) {
    summary.mean_length =
        std::accumulate(lengths.begin(), lengths.end(), 0.0) / lengths.size();
    std::sort(lengths.begin(), lengths.end());
    const std::size_t n = lengths.size();
    summary.median_length =
        n % 2 ? lengths[n / 2] : 0.5 * (lengths[n / 2 - 1] + lengths[n / 2]);
  }
  if (!args.out.empty()) {
    if (std::filesystem::path(args.out).has_parent_path()) {
      std::filesystem::create_directories(
          std::filesystem::path(args.out).parent_path());
    }
    env::WriteJsonLines(args.out, records);
    Json m = BaseManifest("generate-plans", args.seed, args);
    m["digests"]["rrt"] = TextDigest(Fmt("max_nodes=%.17g max_seconds=%.17g",
                                         budget.max_nodes, budget.max_seconds));
    FinishManifest(m, "plans", args.out);
  }
  return summary;
}

imitation::ImitationResult TrainImitationCommand(const TrainImitationArgs& args,
                                                 const Progress& progress) {
  const auto plans = LoadPlans(args.plans, args.limit);
  auto result = imitation::TrainImitation(
      plans, args.config, args.seed, nullptr,
      [&](const imitation::EpochLog& e) {
        Report(progress, Fmt("epoch %.0f train %.5f val %.5f", e.epoch,
                             e.train_loss, e.val_loss));
      });
  if (!args.out.empty()) {
    nn::SaveParams(result.params, args.out);
    const std::string curve =
        args.curve.empty() ? args.out + ".loss.csv" : args.curve;
    imitation::WriteLossCurve(result.curve, curve);
    Json m = BaseManifest("train-imitation", args.seed, args);
    m["digests"]["imitation"] = TextDigest(args.config.ToString());
    AddManifestFile(m, "inputs", "plans", args.plans);
    AddManifestFile(m, "outputs", "loss_curve", curve);
    FinishManifest(m, "weights", args.out);
  }
  return result;
}

rl::RlResult TrainRlCommand(const TrainRlArgs& args, const Progress& progress) {
  const nn::NetParams init = nn::LoadParams(args.init);
  std::vector<env::Transition> seed_transitions;
  if (!args.plans.empty()) {
    for (const auto& plan : rrt::ReadPlanLog(args.plans)) {
      auto ts = rrt::PlanTransitions(plan);
      seed_transitions.insert(seed_transitions.end(),
                              std::make_move_iterator(ts.begin()),
                              std::make_move_iterator(ts.end()));
    }
  }
  rl::RlConfig config = args.config;
  config.rhp.gamma = config.gamma;
  config.rhp.action_cap = config.episode_cap;
  rl::RlHooks hooks;
  hooks.on_log = [&](const rl::RlLogRow& r) {
    if (r.step % 1000 == 0) {
      Report(progress, Fmt("step %.0f loss %.5f eps %.3f success %.3f", r.step,
                           r.loss, r.epsilon, r.success_ma));
    }
  };
  if (!args.checkpoint_dir.empty()) {
    std::filesystem::create_directories(args.checkpoint_dir);
    hooks.on_checkpoint = [&](long step, const nn::NetParams& p) {
      char name[64];
      std::snprintf(name, sizeof(name), "rl_step_%07ld.qnet", step);
      nn::SaveParams(p, std::filesystem::path(args.checkpoint_dir) / name);
    };
  }
  rl::RlResult result;
  try {
    result = rl::TrainRl(init, seed_transitions, config, args.seed, args.steps,
                         hooks);
  } catch (const rl::RlDivergenceError& e) {
    if (!args.out.empty()) nn::SaveParams(e.last_good, args.out + ".last_good");
    throw;
  }
  if (!args.out.empty()) {
    nn::SaveParams(result.params, args.out);
    const std::string log = args.log.empty() ? args.out + ".log.csv" : args.log;
    rl::WriteRlLog(result.log, log);
    Json m = BaseManifest("train-rl", args.seed, TrainRlArgsToJson(args));
    m["digests"]["rl"] = TextDigest(config.ToString());
    AddManifestFile(m, "inputs", "init", args.init);
    if (!args.plans.empty()) AddManifestFile(m, "inputs", "plans", args.plans);
    AddManifestFile(m, "outputs", "log", log);
    FinishManifest(m, "weights", args.out);
  }
  return result;
}

std::string PolicyLabel(const PolicySpec& spec, const std::string& variant) {
  if (variant == "il" || !spec.learned()) return spec.Name();
  if (variant == "rl") return spec.Name() + "+RL";
  throw std::invalid_argument("variant must be 'il' or 'rl'");
}

EvaluateOutput EvaluateCommand(const EvaluateArgs& args,
                               const Progress& progress) {
  std::vector<PolicySpec> specs;
  for (const auto& p : args.policies) specs.push_back(PolicySpec::Parse(p));
  std::vector<env::UncertaintyLevel> levels;
  for (const auto& l : args.levels) levels.push_back(ParseLevel(l));
  if (args.variant != "il" && args.variant != "rl") {
    throw std::invalid_argument("variant must be 'il' or 'rl'");
  }
  std::shared_ptr<const nn::NetParams> net;
  const bool learned = std::any_of(specs.begin(), specs.end(),
                                   [](const auto& s) { return s.learned(); });
  if (learned) {
    if (args.weights.empty()) {
      throw std::invalid_argument("learned policies need --weights");
    }
    if (!std::filesystem::exists(args.weights)) {
      throw std::invalid_argument("missing weights file '" + args.weights +
                                  "'");
    }
    net = std::make_shared<nn::NetParams>(nn::LoadParams(args.weights));
  }

  EvaluateOutput out;
  auto kdp_cache = std::make_shared<KdpPlanCache>();
  for (const auto& spec : specs) {
    for (auto level : levels) {
      EvalOptions o;
      o.policy = spec;
      o.level = level;
      o.instances = args.instances;
      o.trials = args.trials;
      o.seed = args.seed;
      o.cap = args.cap;
      o.timing = ParseTiming(args.timing);
      o.tau = args.tau;
      o.gamma = args.gamma;
      o.bootstrap = ParseBootstrap(args.bootstrap);
      o.rrt = Budget(args.max_nodes, args.max_seconds);
      o.kdp_cache = kdp_cache;
      EvalResult r = Evaluate(o, net);
      const std::string label = PolicyLabel(spec, args.variant);
      out.rows.push_back(MakeReportRow(label, o, r));
      Report(progress, label + " " + std::string(env::UncertaintyName(level)) +
                           Fmt(": success %.3f +- %.3f (max steps %.0f)",
                               r.success_rate, r.ci, r.max_steps));
      out.results.push_back(std::move(r));
    }
  }
  out.csv = FormatReportCsv(out.rows);
  if (!args.out.empty()) {
    WriteTextFile(args.out, out.csv);
    Json m = BaseManifest("evaluate", args.seed, args);
    if (net) AddManifestFile(m, "inputs", "weights", args.weights);
    FinishManifest(m, "report", args.out);
  }
  return out;
}

std::string FormatSweepCsv(const std::vector<SweepRow>& rows) {
  std::string out = "size,success_rate,ci,instances,best_epoch,seed\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%d,%d,%llu\n", r.size,
                  r.success_rate, r.ci, r.instances, r.best_epoch,
                  static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

std::vector<SweepRow> SweepCommand(const SweepArgs& args,
                                   const Progress& progress) {
  if (args.sizes.empty()) throw std::invalid_argument("sweep needs sizes");
  const int largest = *std::max_element(args.sizes.begin(), args.sizes.end());
  const auto all = LoadPlans(args.plans, largest);
  if (!args.nets_dir.empty()) std::filesystem::create_directories(args.nets_dir);

  std::vector<SweepRow> rows;
  for (int size : args.sizes) {
    if (size < 1) throw std::invalid_argument("sweep sizes must be >= 1");
    const std::span<const rrt::Plan> subset(all.data(), size);
    const auto trained = imitation::TrainImitation(
        subset, args.config, DeriveSeed(args.seed, "sweep-train", size));
    if (!args.nets_dir.empty()) {
      nn::SaveParams(trained.params, std::filesystem::path(args.nets_dir) /
                                         ("sweep_" + std::to_string(size) +
                                          ".qnet"));
    }
    EvalOptions o;
    o.policy = PolicySpec::Parse("GP");
    o.instances = args.instances;
    o.seed = args.seed;
    o.timing = TimingMode::kNone;
    const EvalResult r =
        Evaluate(o, std::make_shared<nn::NetParams>(trained.params));
    rows.push_back(SweepRow{.size = size,
                            .success_rate = r.success_rate,
                            .ci = r.ci,
                            .instances = args.instances,
                            .best_epoch = trained.best_epoch,
                            .seed = args.seed});
    Report(progress, Fmt("size %.0f: greedy success %.3f +- %.3f (epoch %.0f)",
                         size, r.success_rate, r.ci, trained.best_epoch));
  }
  if (!args.out.empty()) {
    WriteTextFile(args.out, FormatSweepCsv(rows));
    Json m = BaseManifest("sweep", args.seed, args);
    m["digests"]["imitation"] = TextDigest(args.config.ToString());
    AddManifestFile(m, "inputs", "plans", args.plans);
    FinishManifest(m, "sweep", args.out);
  }
  return rows;
}

RolloutOutput RolloutCommand(const RolloutArgs& args) {
  env::TaskInstance task;
  if (!args.task.empty()) {
    const auto records = env::ReadJsonLines(args.task);
    if (records.empty()) throw FormatError("task file is empty");
    task = records.front().contains("task")
               ? env::TaskFromJson(records.front().at("task"))
               : env::TaskFromJson(records.front());
  } else {
    Rng rng(DeriveSeed(args.task_seed, "task", 0));
    task = env::SampleTask(rng);
  }
  const PolicySpec spec = PolicySpec::Parse(args.policy);
  const physics::SimConfig sim = physics::DefaultSimConfig();
  const env::Model nominal{task.specs, sim, {}};
  Rng perturb(DeriveSeed(args.seed, "rollout-perturb"));
  const auto exec = env::PerturbParams(task.specs, ParseLevel(args.level),
                                       perturb);
  env::Policy policy;
  std::optional<rrt::Plan> plan;
  if (spec.kind == PolicyKind::kKdp) {
    plan = rrt::PlanTask(task, nominal, Budget(args.max_nodes, args.max_seconds),
                         DeriveSeed(args.seed, "rollout-kdp"))
               .plan;
    auto next = std::make_shared<std::size_t>(0);
    policy = [&plan, next](const env::WorldState&) -> std::optional<Action> {
      if (!plan || *next >= plan->actions.size()) return std::nullopt;
      return plan->actions[(*next)++];
    };
  } else {
    if (args.weights.empty()) {
      throw std::invalid_argument("learned policies need --weights");
    }
    auto net = std::make_shared<const nn::NetParams>(
        nn::LoadParams(args.weights));
    if (spec.kind == PolicyKind::kGreedy) {
      policy = rhp::MakeGreedyPolicy(net, task.goals, {});
    } else {
      policy = rhp::MakeRhpPolicy(
          net, task.goals, nominal,
          rhp::RhpConfig{.n = spec.n, .h = spec.h, .tau = args.tau,
                         .gamma = args.gamma},
          DeriveSeed(args.seed, "rollout-rhp"));
    }
  }
  const auto episode = env::RunEpisode(policy, task, exec, sim, {});
  const Trajectory t = MakeTrajectory(task, exec, spec.Name(), episode);
  if (!args.out.empty()) env::WriteJsonLines(args.out, {TrajectoryToJson(t)});
  RolloutOutput out{.success = episode.success, .steps = episode.steps};
  if (!args.frames_dir.empty()) {
    out.frames = static_cast<int>(WriteFrames(t, args.frames_dir).size());
  }
  return out;
}

int RenderCommand(const std::string& trajectory, const std::string& frames_dir) {
  const auto records = env::ReadJsonLines(trajectory);
  int frames = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::filesystem::path dir =
        records.size() == 1
            ? std::filesystem::path(frames_dir)
            : std::filesystem::path(frames_dir) / ("episode_" + std::to_string(i));
    frames += static_cast<int>(
        WriteFrames(TrajectoryFromJson(records[i]), dir).size());
  }
  return frames;
}

RerunResult Rerun(const std::string& manifest_path, const std::string& out,
                  const Progress& progress) {
  const Json m = ReadManifest(manifest_path);
  CheckInputs(m);
  RerunResult r;
  r.command = m.at("command");
  r.output = out;
  const Json& args = m.at("args");
  std::string role;
  try {
    if (r.command == "evaluate") {
      auto a = args.get<EvaluateArgs>();
      a.out = out;
      EvaluateCommand(a, progress);
      role = "report";
    } else if (r.command == "sweep") {
      auto a = args.get<SweepArgs>();
      a.out = out;
      a.nets_dir.clear();
      SweepCommand(a, progress);
      role = "sweep";
    } else if (r.command == "generate-plans") {
      auto a = args.get<GeneratePlansArgs>();
      a.out = out;
      GeneratePlans(a, progress);
      role = "plans";
    } else if (r.command == "train-imitation") {
      auto a = args.get<TrainImitationArgs>();
      a.out = out;
      a.curve.clear();
      TrainImitationCommand(a, progress);
      role = "weights";
    } else if (r.command == "train-rl") {
      auto a = TrainRlArgsFromJson(args);
      a.out = out;
      a.log.clear();
      a.checkpoint_dir.clear();
      TrainRlCommand(a, progress);
      role = "weights";
    } else {
      throw FormatError("manifest command '" + r.command +
                        "' cannot be rerun");
    }
  } catch (const Json::exception& e) {
    throw FormatError(std::string("manifest arguments: ") + e.what());
  }
  r.expected_digest = m.at("outputs").at(role).at("digest");
  r.actual_digest = FileDigest(out);
  return r;
}

}  // namespace bench
}  // namespace clutterpush

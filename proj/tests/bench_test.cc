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

#include <cmath>
#include <filesystem>
#include <memory>
#include <regex>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <omp.h>

#include "clutterpush/bench/commands.h"
#include "clutterpush/bench/evaluate.h"
#include "clutterpush/bench/render.h"
#include "clutterpush/bench/report.h"
#include "clutterpush/errors.h"
#include "clutterpush/nn/features.h"
#include "clutterpush/nn/network.h"
#include "clutterpush/physics/stepper.h"
#include "clutterpush/rrt/plan_log.h"

namespace clutterpush::bench {
namespace {

namespace fs = std::filesystem;

std::shared_ptr<const nn::NetParams> SmallNet(std::uint64_t seed) {
  return std::make_shared<const nn::NetParams>(nn::NetParams::HeUniform(
      nn::NetArchitecture{nn::kReferenceFeatureDim, {16, 8}, 6}, seed));
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cp_bench_" +
            std::string(::testing::UnitTest::GetInstance()
                            ->current_test_info()
                            ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }
  fs::path dir_;
};

TEST(PolicySpecTest, ParseAndName) {
  const PolicySpec r = PolicySpec::Parse("RHP-66");
  EXPECT_EQ(r.kind, PolicyKind::kRhp);
  EXPECT_EQ(r.n, 6);
  EXPECT_EQ(r.h, 6);
  EXPECT_EQ(r.Name(), "RHP-66");
  const PolicySpec big = PolicySpec::Parse("RHP-12x6");
  EXPECT_EQ(big.n, 12);
  EXPECT_EQ(big.h, 6);
  EXPECT_EQ(big.Name(), "RHP-12x6");
  EXPECT_EQ(PolicySpec::Parse("GP").kind, PolicyKind::kGreedy);
  EXPECT_EQ(PolicySpec::Parse("KDP").kind, PolicyKind::kKdp);
  EXPECT_FALSE(PolicySpec::Parse("KDP").learned());
  for (const char* bad : {"RHP-6", "RHP-06", "RHP-x6", "RHP-3x", "rhp-66",
                          "MCTS", "RHP-6x6x6"}) {
    EXPECT_THROW(PolicySpec::Parse(bad), std::invalid_argument) << bad;
  }
  EXPECT_EQ(PolicyLabel(r, "il"), "RHP-66");
  EXPECT_EQ(PolicyLabel(r, "rl"), "RHP-66+RL");
}

std::vector<EpisodeRecord> Episodes(const std::vector<int>& successes,
                                    int per_batch, int trials) {
  std::vector<EpisodeRecord> out;
  int instance = 0;
  for (int s : successes) {
    int left = s;
    for (int i = 0; i < per_batch; ++i, ++instance) {
      for (int j = 0; j < trials; ++j) {
        out.push_back({.instance = instance, .trial = j, .success = left > 0});
        left -= left > 0;
      }
    }
  }
  return out;
}

TEST(ConfidenceTest, StandardErrorOfBatchRates) {
  // Batch rates 0.5 and 0.7: sample sd 0.1414..., over sqrt(2) gives 0.1.
  const auto [rate, ci] = SuccessWithConfidence(Episodes({10, 14}, 20, 1), 20);
  EXPECT_NEAR(rate, 0.6, 1e-15);
  EXPECT_NEAR(ci, 0.1, 1e-15);

  const auto [r1, c1] = SuccessWithConfidence(Episodes({7}, 20, 1), 20);
  EXPECT_NEAR(r1, 0.35, 1e-15);
  EXPECT_EQ(c1, 0.0);

  // Five batches, rates 0.2 0.4 0.4 0.6 0.9.
  const auto [r5, c5] =
      SuccessWithConfidence(Episodes({12, 24, 24, 36, 54}, 20, 3), 20);
  const std::vector<double> rates = {0.2, 0.4, 0.4, 0.6, 0.9};
  double mean = 0.0;
  for (double v : rates) mean += v / 5;
  double ss = 0.0;
  for (double v : rates) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(r5, mean, 1e-12);
  EXPECT_NEAR(c5, std::sqrt(ss / 4) / std::sqrt(5.0), 1e-12);
  EXPECT_EQ(SuccessWithConfidence({}, 20).first, 0.0);
}

EvalOptions SmallOptions(const std::string& policy) {
  EvalOptions o;
  o.policy = PolicySpec::Parse(policy);
  o.instances = 6;
  o.trials = 2;
  o.seed = 5;
  o.cap = 8;
  o.timing = TimingMode::kNone;
  o.batch_size = 3;
  o.level = env::UncertaintyLevel::kMed;
  o.rrt.max_nodes = 1500;
  return o;
}

TEST(EvaluateTest, SameWorldUnderEveryPolicy) {
  const EvalOptions a = SmallOptions("GP"), b = SmallOptions("RHP-66");
  for (int i = 0; i < 4; ++i) {
    const env::TaskInstance ta = EvalTask(a, i), tb = EvalTask(b, i);
    EXPECT_EQ(ta, tb);
    EXPECT_EQ(EvalExecSpecs(a, ta, i, 1), EvalExecSpecs(b, tb, i, 1));
    EXPECT_NE(EvalExecSpecs(a, ta, i, 0), EvalExecSpecs(a, ta, i, 1));
  }
  EvalOptions none = a;
  none.level = env::UncertaintyLevel::kNone;
  const env::TaskInstance t = EvalTask(none, 0);
  EXPECT_EQ(EvalExecSpecs(none, t, 0, 0), t.specs);
}

TEST(EvaluateTest, ParallelMatchesSerialAndRespectsCap) {
  const auto net = SmallNet(1);
  omp_set_num_threads(3);
  for (const char* policy : {"GP", "RHP-22", "KDP"}) {
    const EvalOptions o = SmallOptions(policy);
    const EvalResult par = Evaluate(o, net);
    const EvalResult ser = EvaluateSerial(o, net);
    ASSERT_EQ(par.episodes.size(), 12u) << policy;
    ASSERT_EQ(ser.episodes.size(), 12u);
    for (size_t k = 0; k < par.episodes.size(); ++k) {
      EXPECT_EQ(par.episodes[k].instance, ser.episodes[k].instance);
      EXPECT_EQ(par.episodes[k].trial, ser.episodes[k].trial);
      EXPECT_EQ(par.episodes[k].success, ser.episodes[k].success);
      EXPECT_EQ(par.episodes[k].steps, ser.episodes[k].steps);
      EXPECT_LE(par.episodes[k].steps, o.cap);
    }
    EXPECT_EQ(par.success_rate, ser.success_rate);
    EXPECT_EQ(par.ci, ser.ci);
    EXPECT_LE(par.max_steps, o.cap);
    EXPECT_FALSE(par.avg_seconds.has_value());
  }
  omp_set_num_threads(1);
  EXPECT_THROW(Evaluate(SmallOptions("GP"), nullptr), std::invalid_argument);
}

TEST(EvaluateTest, KdpPlansAreCachedAcrossLevels) {
  EvalOptions o = SmallOptions("KDP");
  o.instances = 3;
  o.trials = 1;
  o.timing = TimingMode::kWall;
  o.cap = 40;
  o.kdp_cache = std::make_shared<KdpPlanCache>();
  const EvalResult first = Evaluate(o, nullptr);
  EXPECT_EQ(o.kdp_cache->plans.size(), 3u);
  o.level = env::UncertaintyLevel::kNone;
  const EvalResult second = Evaluate(o, nullptr);
  EXPECT_EQ(o.kdp_cache->plans.size(), 3u);
  for (const auto& [i, entry] : o.kdp_cache->plans) {
    const auto& record = second.episodes[i];
    if (!entry.first) {
      EXPECT_FALSE(record.success);
      EXPECT_EQ(record.steps, 0);
    } else {
      EXPECT_LE(record.steps, entry.first->length());
      // Unperturbed execution of a valid plan reaches the goal.
      EXPECT_TRUE(record.success);
    }
  }
  if (second.success_rate > 0) {
    EXPECT_TRUE(second.avg_seconds.has_value());
  }
  (void)first;
}

TEST(ReportTest, FormatParseRoundTrip) {
  std::vector<ReportRow> rows = {
      {"KDP", "none", 0, 0, 0.57, 0.041, 12.5, 3},
      {"GP", "high", 1, 0, 0.123456789, 0.0, std::nullopt, 3},
      {"RHP-66+RL", "med", 6, 6, 1.0, 0.01, 0.25, 18446744073709551615ull}};
  const std::string csv = FormatReportCsv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kReportHeader);
  EXPECT_NE(csv.find("GP,high,1,0,0.123457,0.000000,,3\n"), std::string::npos);
  EXPECT_NE(csv.find("KDP,none,0,0,0.570000,0.041000,12.500000,3\n"),
            std::string::npos);
  const auto back = ParseReportCsv(csv);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[2].policy, "RHP-66+RL");
  EXPECT_EQ(back[2].seed, 18446744073709551615ull);
  EXPECT_FALSE(back[1].avg_time_s.has_value());
  EXPECT_NEAR(*back[0].avg_time_s, 12.5, 1e-12);
  EXPECT_EQ(FormatReportCsv(back), csv);
  EXPECT_THROW(ParseReportCsv("policy,x\n"), FormatError);
}

TEST(ReportTest, RowsCarryPolicyShape) {
  EvalResult r;
  r.success_rate = 0.5;
  EvalOptions gp = SmallOptions("GP");
  EXPECT_EQ(MakeReportRow("GP", gp, r).n, 1);
  EXPECT_EQ(MakeReportRow("GP", gp, r).h, 0);
  EXPECT_EQ(MakeReportRow("GP", gp, r).uncertainty, "med");
  EvalOptions kdp = SmallOptions("KDP");
  EXPECT_EQ(MakeReportRow("KDP", kdp, r).n, 0);
  EvalOptions rhp = SmallOptions("RHP-33");
  EXPECT_EQ(MakeReportRow("RHP-33", rhp, r).h, 3);
}

TEST(DigestTest, Fnv1aKnownValues) {
  EXPECT_EQ(TextDigest(""), "cbf29ce484222325");
  EXPECT_EQ(TextDigest("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(TextDigest("foobar"), "85944171f73967e8");
  EXPECT_EQ(ManifestPath("out/report.csv").string(),
            "out/report.csv.manifest.json");
}

TEST_F(TempDir, SvgFramesFollowTheEpisode) {
  Rng rng(3);
  const env::TaskInstance task = env::SampleTask(rng);
  const env::Policy p = [](const env::WorldState&) { return Action::kRotCw; };
  const auto episode = env::RunEpisode(p, task, task.specs,
                                       physics::DefaultSimConfig(), {}, 3);
  const Trajectory t = MakeTrajectory(task, task.specs, "test", episode);
  ASSERT_EQ(t.states.size(), 4u);
  const auto frames = WriteFrames(t, dir_ / "frames");
  ASSERT_EQ(frames.size(), 4u);
  EXPECT_EQ(frames[0].filename(), "frame_000.svg");
  EXPECT_EQ(frames[3].filename(), "frame_003.svg");

  const std::string svg = ReadTextFile(frames[0]);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("version=\"1.1\""), std::string::npos);
  EXPECT_NE(svg.find("width=\"800\""), std::string::npos);
  const std::regex goal(R"re(<circle[^>]*class="goal"[^>]*r="([0-9.]+)")re");
  int goals = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), goal);
       it != std::sregex_iterator(); ++it) {
    EXPECT_NEAR(std::stod((*it)[1]), 0.06 * kPixelsPerMeter, 1e-9);
    ++goals;
  }
  EXPECT_EQ(goals, 3);
  EXPECT_NE(svg.find("#2e8b3e"), std::string::npos);
  EXPECT_NE(svg.find("#c0392b"), std::string::npos);

  const Trajectory back = TrajectoryFromJson(TrajectoryToJson(t));
  EXPECT_EQ(back.states, t.states);
  EXPECT_EQ(back.actions, t.actions);
  EXPECT_EQ(back.end, t.end);
  EXPECT_EQ(back.task, t.task);
}

TEST_F(TempDir, ZeroStepEpisodeGivesOneFrame) {
  Rng rng(4);
  env::TaskInstance task = env::SampleTask(rng);
  for (size_t i = 0; i < task.goals.size(); ++i) {
    task.goals[i].center = task.initial.objects[i].position();
  }
  const env::Policy p = [](const env::WorldState&) { return Action::kRotCw; };
  const auto episode = env::RunEpisode(p, task, task.specs,
                                       physics::DefaultSimConfig(), {});
  const Trajectory t = MakeTrajectory(task, task.specs, "GP", episode);
  EXPECT_EQ(WriteFrames(t, dir_).size(), 1u);
  EXPECT_EQ(EpisodeEndName(t.end), "goal");
}

TEST_F(TempDir, PipelineWritesManifestsAndReruns) {
  GeneratePlansArgs g;
  g.count = 3;
  g.seed = 2;
  g.max_nodes = 8000;
  g.out = Path("plans.jsonl");
  const GeneratePlansSummary plans = GeneratePlans(g);
  EXPECT_EQ(plans.attempted, 3);
  ASSERT_GE(plans.solved, 1);
  EXPECT_EQ(static_cast<int>(rrt::ReadPlanLog(g.out).size()), plans.solved);
  ASSERT_TRUE(fs::exists(ManifestPath(g.out)));
  const auto plan_manifest = ReadManifest(ManifestPath(g.out));
  EXPECT_EQ(plan_manifest.at("command"), "generate-plans");
  EXPECT_EQ(plan_manifest.at("digests").at("sim"),
            physics::DefaultSimConfig().Digest());
  EXPECT_EQ(plan_manifest.at("outputs").at("plans").at("digest"),
            FileDigest(g.out));

  TrainImitationArgs ti;
  ti.plans = g.out;
  ti.out = Path("net.bin");
  ti.seed = 3;
  ti.config.epochs = 3;
  ti.config.hidden = {16, 8};
  const auto trained = TrainImitationCommand(ti);
  EXPECT_EQ(static_cast<int>(trained.curve.size()), 3);
  EXPECT_TRUE(fs::exists(Path("net.bin.loss.csv")));

  EvaluateArgs ev;
  ev.policies = {"GP", "RHP-22"};
  ev.levels = {"none", "high"};
  ev.weights = ti.out;
  ev.instances = 4;
  ev.trials = 1;
  ev.seed = 9;
  ev.timing = "none";
  ev.cap = 6;
  ev.out = Path("report.csv");
  const EvaluateOutput out = EvaluateCommand(ev);
  ASSERT_EQ(out.rows.size(), 4u);
  EXPECT_EQ(out.rows[0].policy, "GP");
  EXPECT_EQ(out.rows[1].uncertainty, "high");
  EXPECT_EQ(out.rows[2].policy, "RHP-22");
  EXPECT_EQ(ReadTextFile(ev.out), out.csv);

  for (const char* produced : {"report.csv", "net.bin"}) {
    const RerunResult rerun = Rerun(
        ManifestPath(Path(produced)).string(), Path(std::string("again_") +
                                                    produced));
    EXPECT_TRUE(rerun.identical()) << produced;
  }
  EXPECT_EQ(ReadTextFile(Path("again_report.csv")), out.csv);

  // A changed input is refused.
  WriteTextFile(Path("net.bin"), "corrupt");
  EXPECT_THROW(Rerun(ManifestPath(Path("report.csv")).string(),
                     Path("third.csv")),
               FormatError);
}

TEST_F(TempDir, SweepAndRollout) {
  GeneratePlansArgs g;
  g.count = 2;
  g.seed = 4;
  g.max_nodes = 8000;
  g.out = Path("plans.jsonl");
  ASSERT_GE(GeneratePlans(g).solved, 1);

  SweepArgs s;
  s.plans = g.out;
  s.sizes = {1};
  s.instances = 3;
  s.seed = 1;
  s.out = Path("sweep.csv");
  s.config.epochs = 2;
  s.config.hidden = {8};
  const auto rows = SweepCommand(s);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].size, 1);
  EXPECT_EQ(rows[0].instances, 3);
  const std::string csv = ReadTextFile(s.out);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "size,success_rate,ci,instances,best_epoch,seed");
  EXPECT_EQ(csv, FormatSweepCsv(rows));
  EXPECT_TRUE(Rerun(ManifestPath(s.out).string(), Path("sweep2.csv"))
                  .identical());

  nn::SaveParams(*SmallNet(2), dir_ / "w.bin");
  RolloutArgs r;
  r.policy = "RHP-22";
  r.weights = Path("w.bin");
  r.task_seed = 6;
  r.out = Path("traj.jsonl");
  r.frames_dir = Path("frames");
  const RolloutOutput ro = RolloutCommand(r);
  EXPECT_EQ(ro.frames, ro.steps + 1);
  EXPECT_EQ(RenderCommand(r.out, Path("rendered")), ro.steps + 1);
  EXPECT_TRUE(fs::exists(dir_ / "rendered" / "frame_000.svg"));
}

}  // namespace
}  // namespace clutterpush::bench

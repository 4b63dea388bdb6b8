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

// OpenMP kernels against their serial references. Thread counts are passed
// as the last benchmark argument; on a single core both sides should match.

#include <memory>
#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "clutterpush/bench/evaluate.h"
#include "clutterpush/env/mdp.h"
#include "clutterpush/env/task.h"
#include "clutterpush/nn/features.h"
#include "clutterpush/nn/kernels.h"
#include "clutterpush/nn/network.h"
#include "clutterpush/physics/sim_config.h"
#include "clutterpush/rhp/controller.h"
#include "clutterpush/rrt/planner.h"

namespace clutterpush {
namespace {

struct DenseCase {
  int in = 330, out = 180;
  std::vector<double> w, b, x, y, dy, dw, db, dx;

  explicit DenseCase(int rows) {
    Rng rng(1);
    auto fill = [&](std::vector<double>& v, std::size_t n) {
      v.resize(n);
      for (double& e : v) e = Uniform(rng, -1, 1);
    };
    fill(w, std::size_t(in) * out);
    fill(b, out);
    fill(x, std::size_t(rows) * in);
    fill(dy, std::size_t(rows) * out);
    y.resize(std::size_t(rows) * out);
    dw.resize(w.size());
    db.resize(out);
    dx.resize(x.size());
  }
};

void BM_DenseForwardKernel(benchmark::State& state) {
  const int rows = state.range(0);
  omp_set_num_threads(state.range(1));
  DenseCase c(rows);
  for (auto _ : state) {
    nn::kernels::DenseForward(c.w.data(), c.b.data(), c.in, c.out, c.x.data(),
                              rows, c.y.data(), true);
    benchmark::DoNotOptimize(c.y.data());
  }
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_DenseForwardKernel)->Args({256, 1})->Args({256, 4});

void BM_DenseForwardReference(benchmark::State& state) {
  const int rows = state.range(0);
  DenseCase c(rows);
  for (auto _ : state) {
    nn::reference::DenseForward(c.w.data(), c.b.data(), c.in, c.out,
                                c.x.data(), rows, c.y.data(), true);
    benchmark::DoNotOptimize(c.y.data());
  }
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_DenseForwardReference)->Arg(256);

void BM_DenseBackwardKernel(benchmark::State& state) {
  const int rows = state.range(0);
  omp_set_num_threads(state.range(1));
  DenseCase c(rows);
  for (auto _ : state) {
    nn::kernels::DenseBackward(c.w.data(), c.in, c.out, c.x.data(),
                               c.dy.data(), rows, c.dw.data(), c.db.data(),
                               c.dx.data());
    benchmark::DoNotOptimize(c.dw.data());
  }
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_DenseBackwardKernel)->Args({256, 1})->Args({256, 4});

void BM_DenseBackwardReference(benchmark::State& state) {
  const int rows = state.range(0);
  DenseCase c(rows);
  for (auto _ : state) {
    nn::reference::DenseBackward(c.w.data(), c.in, c.out, c.x.data(),
                                 c.dy.data(), rows, c.dw.data(), c.db.data(),
                                 c.dx.data());
    benchmark::DoNotOptimize(c.dw.data());
  }
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_DenseBackwardReference)->Arg(256);

// Tree of random states; above the scan threshold the search is parallel.
void BM_TreeNearest(benchmark::State& state) {
  const int nodes = state.range(0);
  omp_set_num_threads(state.range(1));
  Rng rng(2);
  const env::TaskInstance task = env::SampleTask(rng);
  rrt::Tree tree(task.initial);
  auto random_state = [&] {
    physics::WorldState s = task.initial;
    for (int b = 0; b < s.num_bodies(); ++b) {
      auto& p = b == 0 ? s.robot : s.objects[b - 1];
      p.x = Uniform(rng, -0.3, 0.3);
      p.y = Uniform(rng, -0.3, 0.3);
      p.theta = Uniform(rng, -3.14, 3.14);
    }
    return s;
  };
  while (tree.size() < nodes) {
    tree.Add(rrt::TreeNode{.state = random_state(), .parent = 0, .depth = 1});
  }
  const rrt::DistanceMetric metric{.w_theta = 0.01};
  const physics::WorldState query = random_state();
  for (auto _ : state) benchmark::DoNotOptimize(tree.Nearest(query, metric));
}
BENCHMARK(BM_TreeNearest)
    ->Args({2000, 1})
    ->Args({20000, 1})
    ->Args({20000, 4});

std::shared_ptr<const nn::NetParams> ReferenceNet() {
  return std::make_shared<const nn::NetParams>(nn::NetParams::HeUniform(
      nn::NetArchitecture::Reference(nn::kReferenceFeatureDim), 3));
}

void BM_SelectAction(benchmark::State& state) {
  const bool serial = state.range(0) == 0;
  omp_set_num_threads(state.range(1));
  Rng rng(4);
  const env::TaskInstance task = env::SampleTask(rng);
  const env::Model model{task.specs, physics::DefaultSimConfig(), {}};
  const auto net = ReferenceNet();
  const rhp::RhpConfig config;
  for (auto _ : state) {
    const Action a =
        serial ? rhp::SelectActionSerial(task.initial, task.goals, *net, model,
                                         config, rng)
               : rhp::SelectAction(task.initial, task.goals, *net, model,
                                   config, rng);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_SelectAction)
    ->Args({0, 1})
    ->Args({1, 1})
    ->Args({1, 4})
    ->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const bool serial = state.range(0) == 0;
  omp_set_num_threads(state.range(1));
  bench::EvalOptions o;
  o.policy = bench::PolicySpec::Parse("RHP-33");
  o.instances = 8;
  o.cap = 10;
  o.timing = bench::TimingMode::kNone;
  const auto net = ReferenceNet();
  for (auto _ : state) {
    const auto r = serial ? bench::EvaluateSerial(o, net)
                          : bench::Evaluate(o, net);
    benchmark::DoNotOptimize(r.success_rate);
  }
}
BENCHMARK(BM_Evaluate)
    ->Args({0, 1})
    ->Args({1, 1})
    ->Args({1, 4})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace clutterpush

BENCHMARK_MAIN();

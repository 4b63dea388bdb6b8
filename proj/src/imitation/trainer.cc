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

#include "clutterpush/imitation/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "clutterpush/env/returns.h"
#include "clutterpush/env/symmetry.h"
#include "clutterpush/errors.h"
#include "clutterpush/imitation/targets.h"
#include "clutterpush/nn/features.h"
#include "clutterpush/random.h"

namespace clutterpush::imitation {
namespace {

constexpr int kForwardChunk = 2048;

// Plan steps flattened into rows with the fixed parts of their targets.
struct RowSet {
  nn::Matrix features;
  std::vector<int> chosen;
  std::vector<double> chosen_target;
  std::vector<double> margin_target;  // L - l + k step return

  int size() const { return features.rows; }
};

RowSet Flatten(std::span<const rrt::Plan> plans, std::span<const int> which,
               int dim, const ImitationConfig& c) {
  const int images = c.symmetry_augment ? env::kNumSymmetries : 1;
  int total = 0;
  for (int p : which) total += plans[p].length();
  RowSet rows;
  rows.features = nn::Matrix(total * images, dim);
  int r = 0;
  const env::Workspace workspace;
  for (int p : which) {
    const rrt::Plan& plan = plans[p];
    const int L = plan.length();
    for (int g = 0; g < images; ++g) {
      const auto goals = env::Transform(g, plan.task.goals);
      for (int l = 0; l < L; ++l, ++r) {
        nn::EncodeFeatures(env::Transform(g, plan.states[l]), goals, workspace,
                           {rows.features.row(r), std::size_t(dim)});
        rows.chosen.push_back(ActionIndex(env::Transform(g, plan.actions[l])));
        rows.chosen_target.push_back(ChosenTarget(l, L, c.gamma));
        rows.margin_target.push_back(
            env::ConstantRewardReturn(L - l + c.k, c.gamma));
      }
    }
  }
  return rows;
}

nn::Matrix Predict(const nn::NetParams& params, const nn::Matrix& x) {
  nn::Matrix out(x.rows, params.arch().output_dim);
  for (int start = 0; start < x.rows; start += kForwardChunk) {
    const int n = std::min(kForwardChunk, x.rows - start);
    nn::Matrix chunk(n, x.cols);
    std::copy(x.row(start), x.row(start) + std::size_t(n) * x.cols,
              chunk.data.begin());
    const nn::Matrix q = nn::ForwardBatch(params, chunk);
    std::copy(q.data.begin(), q.data.end(), out.row(start));
  }
  return out;
}

// Targets and mask for every row given the network's current predictions.
struct Grounded {
  nn::Matrix targets;
  std::vector<std::uint8_t> mask;
};

Grounded Ground(const RowSet& rows, const nn::Matrix& q) {
  Grounded g{nn::Matrix(rows.size(), kNumActions),
             std::vector<std::uint8_t>(std::size_t(rows.size()) * kNumActions)};
  for (int r = 0; r < rows.size(); ++r) {
    for (int a = 0; a < kNumActions; ++a) {
      const std::size_t k = std::size_t(r) * kNumActions + a;
      if (a == rows.chosen[r]) {
        g.targets.data[k] = rows.chosen_target[r];
        g.mask[k] = 1;
      } else if (q(r, a) >= rows.chosen_target[r]) {
        g.targets.data[k] = rows.margin_target[r];
        g.mask[k] = 1;
      }
    }
  }
  return g;
}

double MaskedSquaredError(const nn::Matrix& q, const Grounded& g) {
  double s = 0.0;
  for (std::size_t k = 0; k < q.data.size(); ++k) {
    if (!g.mask[k]) continue;
    const double d = q.data[k] - g.targets.data[k];
    s += d * d;
  }
  return s;
}

double ValidationLoss(const nn::NetParams& params, const RowSet& rows) {
  const nn::Matrix q = Predict(params, rows.features);
  return MaskedSquaredError(q, Ground(rows, q)) / rows.size();
}

}  // namespace

std::string ImitationConfig::ToString() const {
  std::string hs;
  for (int h : hidden) hs += (hs.empty() ? "" : "-") + std::to_string(h);
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "epochs=%d batch_size=%d lr=%.17g l2=%.17g gamma=%.17g k=%d "
                "val_fraction=%.17g patience=%d hidden=%s symmetry=%d",
                epochs, batch_size, lr, l2, gamma, k, val_fraction, patience,
                hs.c_str(), symmetry_augment ? 1 : 0);
  return buf;
}

ImitationResult TrainImitation(std::span<const rrt::Plan> plans,
                               const ImitationConfig& config,
                               std::uint64_t seed, const nn::NetParams* init,
                               const EpochCallback& on_epoch) {
  if (plans.empty()) throw std::invalid_argument("imitation: no plans");
  if (config.epochs < 0 || config.batch_size < 1 || config.k < 1 ||
      config.patience < 1) {
    throw std::invalid_argument("imitation: invalid configuration");
  }
  const int dim = nn::FeatureDim(
      static_cast<int>(plans.front().task.initial.objects.size()));
  const nn::NetArchitecture arch{
      .input_dim = dim, .hidden = config.hidden, .output_dim = kNumActions};

  ImitationResult result;
  result.params = init ? *init
                       : nn::NetParams::HeUniform(
                             arch, DeriveSeed(seed, "imitation-init"));
  if (result.params.arch().input_dim != dim ||
      result.params.arch().output_dim != kNumActions) {
    throw ShapeError("imitation: initial network does not fit the plans");
  }
  if (config.epochs == 0) return result;

  std::vector<int> order(plans.size());
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(DeriveSeed(seed, "imitation-split"));
  std::shuffle(order.begin(), order.end(), split_rng);
  int num_val = 0;
  if (plans.size() >= 2 && config.val_fraction > 0.0) {
    num_val = std::clamp(
        static_cast<int>(std::lround(config.val_fraction * plans.size())), 1,
        static_cast<int>(plans.size()) - 1);
  }
  const std::span<const int> val_ids(order.data(), num_val);
  const std::span<const int> train_ids(order.data() + num_val,
                                       order.size() - num_val);
  result.val_plans = num_val;
  result.train_plans = static_cast<int>(train_ids.size());

  const RowSet train = Flatten(plans, train_ids, dim, config);
  const RowSet val = Flatten(plans, val_ids, dim, config);
  if (train.size() == 0) {
    throw std::invalid_argument("imitation: training plans have no steps");
  }

  nn::NetParams params = result.params;
  nn::AdamMoments moments = nn::AdamMoments::ZerosLike(params);
  const nn::AdamConfig adam{.lr = config.lr};
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  std::vector<int> rows(train.size());
  std::iota(rows.begin(), rows.end(), 0);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const Grounded g = Ground(train, Predict(params, train.features));
    Rng rng(DeriveSeed(seed, "imitation-epoch", epoch));
    std::shuffle(rows.begin(), rows.end(), rng);

    double data_loss = 0.0;
    for (int start = 0; start < train.size(); start += config.batch_size) {
      const int end = std::min(train.size(), start + config.batch_size);
      nn::TrainingBatch batch;
      batch.Reserve(end - start, dim, kNumActions);
      for (int i = start; i < end; ++i) {
        const int r = rows[i];
        const std::size_t off = std::size_t(r) * kNumActions;
        batch.AddMasked({train.features.row(r), std::size_t(dim)},
                        {g.targets.row(r), std::size_t(kNumActions)},
                        {g.mask.data() + off, std::size_t(kNumActions)});
      }
      const double reg = config.l2 * params.SquaredNorm();
      nn::LossAndGrad lg = nn::Grad(params, batch, config.l2);
      if (!std::isfinite(lg.loss)) {
        char msg[200];
        std::snprintf(msg, sizeof(msg),
                      "imitation diverged: epoch %d, rows %d-%d, loss %g, "
                      "|theta|^2 %g",
                      epoch, start, end - 1, lg.loss, params.SquaredNorm());
        throw TrainingDivergenceError(msg);
      }
      data_loss += lg.loss - reg;
      nn::AdamStep(params, lg.grad, moments, adam);
    }

    EpochLog log{.epoch = epoch,
                 .train_loss = data_loss / train.size(),
                 .val_loss = std::numeric_limits<double>::quiet_NaN()};
    double score = log.train_loss;
    if (val.size() > 0) {
      log.val_loss = ValidationLoss(params, val);
      score = log.val_loss;
    }
    if (!std::isfinite(score)) {
      throw TrainingDivergenceError("imitation diverged: epoch " +
                                    std::to_string(epoch) +
                                    " produced a non-finite loss");
    }
    result.curve.push_back(log);
    if (on_epoch) on_epoch(log);

    if (val.size() == 0 || score < best) {
      best = score;
      since_best = 0;
      result.params = params;
      result.best_epoch = epoch;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

void WriteLossCurve(std::span<const EpochLog> curve,
                    const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw FormatError("cannot write '" + path.string() + "'");
  os << "epoch,train_loss,val_loss\n";
  char buf[96];
  for (const auto& e : curve) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", e.epoch, e.train_loss,
                  e.val_loss);
    os << buf;
  }
}

}  // namespace clutterpush::imitation

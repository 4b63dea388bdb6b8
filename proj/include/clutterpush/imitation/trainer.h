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

#ifndef CLUTTERPUSH_IMITATION_TRAINER_H_
#define CLUTTERPUSH_IMITATION_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clutterpush/nn/network.h"
#include "clutterpush/rrt/planner.h"

namespace clutterpush::imitation {

struct ImitationConfig {
  int epochs = 400;             // upper bound; early stopping usually ends sooner
  int batch_size = 64;
  double lr = 1e-4;             // Adam step size
  double l2 = 1e-5;
  double gamma = 0.98;
  int k = 4;                    // value margin in extra steps
  double val_fraction = 0.1;    // share of plans held out
  int patience = 20;            // epochs without validation improvement
  std::vector<int> hidden = {330, 180, 80, 64};
  // Also train on the 7 mirror/rotation images of every plan.
  bool symmetry_augment = true;

  std::string ToString() const;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;  // mean per-row masked squared error
  double val_loss = 0.0;    // same on held-out plans; NaN without a split
};

struct ImitationResult {
  nn::NetParams params;  // parameters of the best validation epoch
  std::vector<EpochLog> curve;
  int best_epoch = 0;    // 0: the initial parameters
  int train_plans = 0;
  int val_plans = 0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Minibatch Adam on chosen/unchosen targets, refreshing the unchosen
// grounding from the current network at the start of every epoch. Starts
// from `init` when given, else from He-uniform weights seeded by `seed`.
// Throws TrainingDivergenceError if the loss becomes non-finite.
ImitationResult TrainImitation(std::span<const rrt::Plan> plans,
                               const ImitationConfig& config,
                               std::uint64_t seed,
                               const nn::NetParams* init = nullptr,
                               const EpochCallback& on_epoch = {});

// "epoch,train_loss,val_loss" with one row per epoch.
void WriteLossCurve(std::span<const EpochLog> curve,
                    const std::filesystem::path& path);

}  // namespace clutterpush::imitation

#endif  // CLUTTERPUSH_IMITATION_TRAINER_H_

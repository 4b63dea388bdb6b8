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

#ifndef CLUTTERPUSH_IMITATION_TARGETS_H_
#define CLUTTERPUSH_IMITATION_TARGETS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "clutterpush/action.h"
#include "clutterpush/env/mdp.h"
#include "clutterpush/nn/network.h"
#include "clutterpush/rrt/planner.h"

namespace clutterpush::imitation {

// Target for the demonstrated action at step l of a plan of length L:
// the discounted return of the L - l remaining -1 rewards.
double ChosenTarget(int l, int L, double gamma,
                    double r = env::kStepReward);

// Target for a non-demonstrated action: the return of L - l + k remaining
// steps when the network currently rates that action at least as high as
// the chosen target; nullopt (no loss term) otherwise.
std::optional<double> UnchosenTarget(int l, int L, int k, double gamma,
                                     double predicted, double chosen,
                                     double r = env::kStepReward);

struct TargetRow {
  std::vector<double> features;
  std::array<double, kNumActions> target{};
  std::array<std::uint8_t, kNumActions> mask{};  // 1 = contributes to loss
  int chosen = 0;
};

// One row per (plan, step). Unchosen entries are grounded against the
// predictions of `params`.
std::vector<TargetRow> BuildDataset(std::span<const rrt::Plan> plans,
                                    const nn::NetParams& params, double gamma,
                                    int k, const env::Workspace& workspace = {});

// The same rows from precomputed features and predictions. `features` and
// `predictions` are row-aligned with the concatenated plan steps.
std::vector<TargetRow> BuildDatasetFromPredictions(
    std::span<const rrt::Plan> plans, const nn::Matrix& features,
    const nn::Matrix& predictions, double gamma, int k);

}  // namespace clutterpush::imitation

#endif  // CLUTTERPUSH_IMITATION_TARGETS_H_

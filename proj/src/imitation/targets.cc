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

#include "clutterpush/imitation/targets.h"

#include <stdexcept>

#include "clutterpush/env/returns.h"
#include "clutterpush/errors.h"
#include "clutterpush/nn/features.h"

namespace clutterpush::imitation {

double ChosenTarget(int l, int L, double gamma, double r) {
  if (l < 0 || l >= L) throw std::invalid_argument("chosen target: 0 <= l < L");
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("chosen target: gamma must lie in (0, 1]");
  }
  return env::ConstantRewardReturn(L - l, gamma, r);
}

std::optional<double> UnchosenTarget(int l, int L, int k, double gamma,
                                     double predicted, double chosen,
                                     double r) {
  if (k < 1) throw std::invalid_argument("unchosen target: k must be >= 1");
  if (l < 0 || l >= L) {
    throw std::invalid_argument("unchosen target: 0 <= l < L");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("unchosen target: gamma must lie in (0, 1]");
  }
  if (!(predicted >= chosen)) return std::nullopt;
  return env::ConstantRewardReturn(L - l + k, gamma, r);
}

std::vector<TargetRow> BuildDatasetFromPredictions(
    std::span<const rrt::Plan> plans, const nn::Matrix& features,
    const nn::Matrix& predictions, double gamma, int k) {
  std::vector<TargetRow> rows;
  int row = 0;
  for (const auto& plan : plans) {
    const int L = plan.length();
    for (int l = 0; l < L; ++l, ++row) {
      if (row >= features.rows || row >= predictions.rows) {
        throw ShapeError("dataset: fewer feature rows than plan steps");
      }
      TargetRow t;
      t.features.assign(features.row(row), features.row(row) + features.cols);
      t.chosen = ActionIndex(plan.actions[l]);
      const double chosen = ChosenTarget(l, L, gamma);
      for (int a = 0; a < kNumActions; ++a) {
        if (a == t.chosen) {
          t.target[a] = chosen;
          t.mask[a] = 1;
        } else if (auto u = UnchosenTarget(l, L, k, gamma,
                                           predictions(row, a), chosen)) {
          t.target[a] = *u;
          t.mask[a] = 1;
        }
      }
      rows.push_back(std::move(t));
    }
  }
  return rows;
}

std::vector<TargetRow> BuildDataset(std::span<const rrt::Plan> plans,
                                    const nn::NetParams& params, double gamma,
                                    int k, const env::Workspace& workspace) {
  int total = 0;
  for (const auto& p : plans) total += p.length();
  const int dim = params.arch().input_dim;
  nn::Matrix features(total, dim);
  int row = 0;
  for (const auto& plan : plans) {
    for (const auto& s : plan.states) {
      nn::EncodeFeatures(s, plan.task.goals, workspace,
                         {features.row(row), std::size_t(dim)});
      ++row;
    }
  }
  return BuildDatasetFromPredictions(plans, features,
                                     nn::ForwardBatch(params, features), gamma,
                                     k);
}

}  // namespace clutterpush::imitation

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

#ifndef CLUTTERPUSH_ENV_RETURNS_H_
#define CLUTTERPUSH_ENV_RETURNS_H_

#include <cmath>

#include "clutterpush/env/mdp.h"

namespace clutterpush::env {

// r * (1 + gamma + ... + gamma^(n-1)), i.e. r * (1 - gamma^n) / (1 - gamma),
// and r * n for gamma = 1. Evaluated with expm1/log1p so that values for
// gamma close to 1 approach the undiscounted limit smoothly.
inline double ConstantRewardReturn(int n, double gamma,
                                   double r = kStepReward) {
  if (n <= 0) return 0.0;
  if (gamma == 1.0) return r * n;
  const double d = gamma - 1.0;
  return r * std::expm1(n * std::log1p(d)) / d;
}

// Value of a state from which the task can no longer be completed (a body
// left the table): the -1 reward continues forever. For gamma = 1 the
// stream is cut at the episode action cap.
inline double FailureValue(double gamma, int cap = kDefaultActionCap) {
  if (gamma < 1.0) return kStepReward / (1.0 - gamma);
  return kStepReward * cap;
}

}  // namespace clutterpush::env

#endif  // CLUTTERPUSH_ENV_RETURNS_H_

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

#ifndef CLUTTERPUSH_ACTION_H_
#define CLUTTERPUSH_ACTION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace clutterpush {

// The discrete action set. The integer values are part of every file format
// (plan logs, transitions, network output order) and must never change.
enum class Action : std::uint8_t {
  kPushPosX = 0,
  kPushNegX = 1,
  kPushPosY = 2,
  kPushNegY = 3,
  kRotCw = 4,
  kRotCcw = 5,
};

inline constexpr int kNumActions = 6;

inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::kPushPosX, Action::kPushNegX, Action::kPushPosY,
    Action::kPushNegY, Action::kRotCw,    Action::kRotCcw};

constexpr int ActionIndex(Action a) { return static_cast<int>(a); }

// Returns nullopt for indices outside 0..5.
constexpr std::optional<Action> ActionFromIndex(int index) {
  if (index < 0 || index >= kNumActions) return std::nullopt;
  return static_cast<Action>(index);
}

constexpr std::string_view ActionName(Action a) {
  switch (a) {
    case Action::kPushPosX: return "PUSH_POS_X";
    case Action::kPushNegX: return "PUSH_NEG_X";
    case Action::kPushPosY: return "PUSH_POS_Y";
    case Action::kPushNegY: return "PUSH_NEG_Y";
    case Action::kRotCw: return "ROT_CW";
    case Action::kRotCcw: return "ROT_CCW";
  }
  return "?";
}

}  // namespace clutterpush

#endif  // CLUTTERPUSH_ACTION_H_

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

#ifndef CLUTTERPUSH_RL_REPLAY_BUFFER_H_
#define CLUTTERPUSH_RL_REPLAY_BUFFER_H_

#include <cstddef>
#include <mutex>
#include <vector>

#include "clutterpush/env/mdp.h"
#include "clutterpush/random.h"

namespace clutterpush::rl {

// Fixed-capacity FIFO of transitions. Once full, each insertion overwrites
// the oldest record. Insertion and sampling are mutually excluded, so actor
// threads may add while the learner samples.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void Add(env::Transition t);
  // `m` records drawn uniformly with replacement. Requires size() > 0.
  std::vector<env::Transition> Sample(int m, Rng& rng) const;
  // Oldest first.
  std::vector<env::Transition> Contents() const;

  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }
  std::size_t total_inserted() const;

 private:
  std::size_t capacity_;
  std::vector<env::Transition> ring_;
  std::size_t cursor_ = 0;  // next slot to write
  std::size_t inserted_ = 0;
  mutable std::mutex mu_;
};

}  // namespace clutterpush::rl

#endif  // CLUTTERPUSH_RL_REPLAY_BUFFER_H_

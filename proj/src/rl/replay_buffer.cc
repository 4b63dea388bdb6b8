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

#include "clutterpush/rl/replay_buffer.h"

#include <stdexcept>

namespace clutterpush::rl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be > 0");
}

void ReplayBuffer::Add(env::Transition t) {
  std::lock_guard lock(mu_);
  if (ring_.size() < capacity_) {
    ring_.push_back(std::move(t));
  } else {
    ring_[cursor_] = std::move(t);
  }
  cursor_ = (cursor_ + 1) % capacity_;
  ++inserted_;
}

std::vector<env::Transition> ReplayBuffer::Sample(int m, Rng& rng) const {
  std::lock_guard lock(mu_);
  if (ring_.empty()) throw std::logic_error("sampling an empty replay buffer");
  std::vector<env::Transition> out;
  out.reserve(m);
  const int last = static_cast<int>(ring_.size()) - 1;
  for (int i = 0; i < m; ++i) out.push_back(ring_[UniformInt(rng, 0, last)]);
  return out;
}

std::vector<env::Transition> ReplayBuffer::Contents() const {
  std::lock_guard lock(mu_);
  if (ring_.size() < capacity_) return ring_;
  std::vector<env::Transition> out;
  out.reserve(capacity_);
  for (std::size_t i = 0; i < capacity_; ++i) {
    out.push_back(ring_[(cursor_ + i) % capacity_]);
  }
  return out;
}

std::size_t ReplayBuffer::size() const {
  std::lock_guard lock(mu_);
  return ring_.size();
}

std::size_t ReplayBuffer::total_inserted() const {
  std::lock_guard lock(mu_);
  return inserted_;
}

}  // namespace clutterpush::rl

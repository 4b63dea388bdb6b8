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

#ifndef CLUTTERPUSH_ERRORS_H_
#define CLUTTERPUSH_ERRORS_H_

#include <stdexcept>
#include <string>

namespace clutterpush {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input world state is malformed (non-finite pose, wrong body count, not at
// rest where rest is required).
class StateValidityError : public Error {
 public:
  using Error::Error;
};

// The physics stepper failed to bring the world to rest within its substep
// budget.
class SimulationDivergenceError : public Error {
 public:
  using Error::Error;
};

// Rejection sampling ran out of attempts.
class SamplingError : public Error {
 public:
  using Error::Error;
};

// Malformed file contents (bad magic, unknown version, truncated data,
// unparsable record).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Tensor or vector dimensions do not agree with the network architecture.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Training produced a non-finite loss or target.
class TrainingDivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace clutterpush

#endif  // CLUTTERPUSH_ERRORS_H_

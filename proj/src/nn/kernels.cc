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

#include "clutterpush/nn/kernels.h"

#include <omp.h>

#include <algorithm>
#include <cstddef>

namespace clutterpush::nn {
namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr long kParallelWork = 1L << 16;

inline void ForwardRow(const double* w, const double* bias, int in, int out,
                       const double* xr, double* yr, bool relu) {
  std::copy(bias, bias + out, yr);
  for (int i = 0; i < in; ++i) {
    const double xi = xr[i];
    if (xi == 0.0) continue;
    const double* wi = w + std::size_t(i) * out;
    for (int o = 0; o < out; ++o) yr[o] += xi * wi[o];
  }
  if (relu) {
    for (int o = 0; o < out; ++o) yr[o] = yr[o] > 0.0 ? yr[o] : 0.0;
  }
}

}  // namespace

namespace kernels {

void DenseForward(const double* w, const double* bias, int in, int out,
                  const double* x, int rows, double* y, bool relu) {
  const long work = long(rows) * in * out;
  if (rows == 1 || work < kParallelWork) {
    for (int r = 0; r < rows; ++r) {
      ForwardRow(w, bias, in, out, x + std::size_t(r) * in,
                 y + std::size_t(r) * out, relu);
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    ForwardRow(w, bias, in, out, x + std::size_t(r) * in,
               y + std::size_t(r) * out, relu);
  }
}

void DenseBackward(const double* w, int in, int out, const double* x,
                   const double* dy, int rows, double* dw, double* db,
                   double* dx) {
  const bool parallel = long(rows) * in * out >= kParallelWork;
  // Each dW row is owned by one thread and sums over rows in order.
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < in; ++i) {
    double* dwi = dw + std::size_t(i) * out;
    for (int r = 0; r < rows; ++r) {
      const double xi = x[std::size_t(r) * in + i];
      if (xi == 0.0) continue;
      const double* dyr = dy + std::size_t(r) * out;
      for (int o = 0; o < out; ++o) dwi[o] += xi * dyr[o];
    }
  }
  for (int r = 0; r < rows; ++r) {
    const double* dyr = dy + std::size_t(r) * out;
    for (int o = 0; o < out; ++o) db[o] += dyr[o];
  }
  if (dx == nullptr) return;
#pragma omp parallel for schedule(static) if (parallel)
  for (int r = 0; r < rows; ++r) {
    const double* dyr = dy + std::size_t(r) * out;
    double* dxr = dx + std::size_t(r) * in;
    for (int i = 0; i < in; ++i) {
      const double* wi = w + std::size_t(i) * out;
      double s = 0.0;
      for (int o = 0; o < out; ++o) s += dyr[o] * wi[o];
      dxr[i] = s;
    }
  }
}

}  // namespace kernels

namespace reference {

void DenseForward(const double* w, const double* bias, int in, int out,
                  const double* x, int rows, double* y, bool relu) {
  for (int r = 0; r < rows; ++r) {
    for (int o = 0; o < out; ++o) {
      double s = bias[o];
      for (int i = 0; i < in; ++i) {
        s += x[std::size_t(r) * in + i] * w[std::size_t(i) * out + o];
      }
      y[std::size_t(r) * out + o] = relu ? std::max(s, 0.0) : s;
    }
  }
}

void DenseBackward(const double* w, int in, int out, const double* x,
                   const double* dy, int rows, double* dw, double* db,
                   double* dx) {
  for (int i = 0; i < in; ++i) {
    for (int o = 0; o < out; ++o) {
      double s = dw[std::size_t(i) * out + o];
      for (int r = 0; r < rows; ++r) {
        s += x[std::size_t(r) * in + i] * dy[std::size_t(r) * out + o];
      }
      dw[std::size_t(i) * out + o] = s;
    }
  }
  for (int o = 0; o < out; ++o) {
    double s = db[o];
    for (int r = 0; r < rows; ++r) s += dy[std::size_t(r) * out + o];
    db[o] = s;
  }
  if (dx == nullptr) return;
  for (int r = 0; r < rows; ++r) {
    for (int i = 0; i < in; ++i) {
      double s = 0.0;
      for (int o = 0; o < out; ++o) {
        s += dy[std::size_t(r) * out + o] * w[std::size_t(i) * out + o];
      }
      dx[std::size_t(r) * in + i] = s;
    }
  }
}

}  // namespace reference

}  // namespace clutterpush::nn

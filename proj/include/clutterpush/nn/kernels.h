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

#ifndef CLUTTERPUSH_NN_KERNELS_H_
#define CLUTTERPUSH_NN_KERNELS_H_

// Dense-layer kernels. The default namespace holds the OpenMP versions used
// by training and batched inference; `reference` holds plain serial loops
// kept for tests and benchmarks. Both accumulate every output element in the
// same order, so their results are bit-identical for any thread count.
//
// Layout: x is rows x in, y / dy are rows x out, w is in x out (input-major),
// all row-major.
namespace clutterpush::nn {

namespace kernels {

void DenseForward(const double* w, const double* bias, int in, int out,
                  const double* x, int rows, double* y, bool relu);

// dw (in x out) and db (out) are accumulated into; dx (rows x in) is
// overwritten when non-null.
void DenseBackward(const double* w, int in, int out, const double* x,
                   const double* dy, int rows, double* dw, double* db,
                   double* dx);

}  // namespace kernels

namespace reference {

void DenseForward(const double* w, const double* bias, int in, int out,
                  const double* x, int rows, double* y, bool relu);

void DenseBackward(const double* w, int in, int out, const double* x,
                   const double* dy, int rows, double* dw, double* db,
                   double* dx);

}  // namespace reference

}  // namespace clutterpush::nn

#endif  // CLUTTERPUSH_NN_KERNELS_H_

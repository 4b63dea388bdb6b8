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

#ifndef CLUTTERPUSH_NN_NETWORK_H_
#define CLUTTERPUSH_NN_NETWORK_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace clutterpush::nn {

// Fully connected net: ReLU on every hidden layer, linear output.
struct NetArchitecture {
  int input_dim = 0;
  std::vector<int> hidden;
  int output_dim = 0;

  // 330-180-80-64 hidden units, 6 outputs.
  static NetArchitecture Reference(int input_dim);

  int num_layers() const { return static_cast<int>(hidden.size()) + 1; }
  int layer_in(int l) const { return l == 0 ? input_dim : hidden[l - 1]; }
  int layer_out(int l) const {
    return l == num_layers() - 1 ? output_dim : hidden[l];
  }
  std::size_t num_params() const;
  bool operator==(const NetArchitecture&) const = default;
};

// Row-major dense matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(std::size_t(r) * c, 0.0) {}
  double* row(int r) { return data.data() + std::size_t(r) * cols; }
  const double* row(int r) const { return data.data() + std::size_t(r) * cols; }
  double& operator()(int r, int c) { return data[std::size_t(r) * cols + c]; }
  double operator()(int r, int c) const {
    return data[std::size_t(r) * cols + c];
  }
};

// All weights and biases in one contiguous buffer, layer by layer: W_0, b_0,
// W_1, b_1, ... Each W_l is stored input-major (layer_in rows of layer_out
// values), so output o of layer l is b_l[o] + sum_i x[i] * W_l[i][o].
// Gradients and optimizer moments use the same type.
class NetParams {
 public:
  NetParams() = default;
  // Zero-initialized.
  explicit NetParams(NetArchitecture arch);
  // He-uniform weights U(-sqrt(6 / fan_in), +sqrt(6 / fan_in)), zero biases.
  static NetParams HeUniform(NetArchitecture arch, std::uint64_t seed);

  const NetArchitecture& arch() const { return arch_; }
  int num_layers() const { return arch_.num_layers(); }
  std::uint64_t init_seed() const { return init_seed_; }
  void set_init_seed(std::uint64_t s) { init_seed_ = s; }

  std::span<double> weights(int layer);
  std::span<const double> weights(int layer) const;
  std::span<double> bias(int layer);
  std::span<const double> bias(int layer) const;
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double SquaredNorm() const;
  bool AllFinite() const;
  bool SameShape(const NetParams& o) const { return arch_ == o.arch_; }
  void SetZero();
  bool operator==(const NetParams& o) const {
    return arch_ == o.arch_ && data_ == o.data_ && init_seed_ == o.init_seed_;
  }

 private:
  NetArchitecture arch_;
  std::vector<std::size_t> offsets_;  // start of W_l; b_l follows it
  std::vector<double> data_;
  std::uint64_t init_seed_ = 0;
};

// Single-input forward pass. Pure; safe for concurrent callers.
// Throws ShapeError if x.size() != input_dim.
std::vector<double> Forward(const NetParams& params, std::span<const double> x);

// Row-wise forward pass over a batch.
Matrix ForwardBatch(const NetParams& params, const Matrix& inputs);

// Supervised batch: each row has a target per output and a mask saying
// which outputs contribute to the loss.
struct TrainingBatch {
  Matrix inputs;
  Matrix targets;
  std::vector<std::uint8_t> mask;  // rows x output_dim

  int size() const { return inputs.rows; }
  void Reserve(int rows, int input_dim, int output_dim);
  // One row whose loss only involves output `index`.
  void AddIndexed(std::span<const double> x, int index, double target,
                  int output_dim);
  void AddMasked(std::span<const double> x, std::span<const double> targets,
                 std::span<const std::uint8_t> mask);
};

struct LossAndGrad {
  double loss = 0.0;
  NetParams grad;
};

// loss = sum over rows and unmasked outputs of (target - q)^2
//        + l2 * ||theta||^2, with the exact gradient by backpropagation.
// Throws ShapeError on dimension mismatch, TrainingDivergenceError on a
// non-finite target, and std::invalid_argument on an empty batch.
LossAndGrad Grad(const NetParams& params, const TrainingBatch& batch,
                 double l2);

// Loss only (same definition as Grad).
double Loss(const NetParams& params, const TrainingBatch& batch, double l2);

// params - lr * grad.
NetParams SgdStep(const NetParams& params, const NetParams& grad, double lr);

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamMoments {
  NetParams m;
  NetParams v;
  long step = 0;

  static AdamMoments ZerosLike(const NetParams& params);
};

// Bias-corrected Adam update, in place.
void AdamStep(NetParams& params, const NetParams& grad, AdamMoments& moments,
              const AdamConfig& config);

// Binary weight file, all integers and floats little-endian:
//   char[8]  magic "CPQVNET\0"
//   u32      format version (1)
//   u32      input_dim
//   u32      output_dim
//   u32      hidden layer count H, then H x u32 widths
//   u32      hidden activation (1 = ReLU), u32 output activation (0 = linear)
//   u64      init seed
//   per layer l: f64[in_l * out_l] W_l (input-major), f64[out_l] b_l
void SaveParams(const NetParams& params, const std::filesystem::path& path);
// Throws FormatError on bad magic, unknown version or truncated/oversized
// payload.
NetParams LoadParams(const std::filesystem::path& path);

}  // namespace clutterpush::nn

#endif  // CLUTTERPUSH_NN_NETWORK_H_

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

#include "clutterpush/nn/network.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <stdexcept>
#include <string>

#include "clutterpush/errors.h"
#include "clutterpush/nn/kernels.h"

namespace clutterpush::nn {
namespace {

constexpr std::array<char, 8> kMagic = {'C', 'P', 'Q', 'V', 'N', 'E', 'T', '\0'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kActivationLinear = 0;
constexpr std::uint32_t kActivationRelu = 1;

void CheckArchitecture(const NetArchitecture& a) {
  if (a.input_dim <= 0 || a.output_dim <= 0) {
    throw ShapeError("network input and output sizes must be positive");
  }
  for (int h : a.hidden) {
    if (h <= 0) throw ShapeError("hidden layer widths must be positive");
  }
}

struct Activations {
  std::vector<Matrix> layers;  // layers[0] = input, layers[L] = output
};

Activations RunForward(const NetParams& p, const Matrix& inputs) {
  if (inputs.cols != p.arch().input_dim) {
    throw ShapeError("batch width " + std::to_string(inputs.cols) +
                     " != network input " +
                     std::to_string(p.arch().input_dim));
  }
  Activations a;
  a.layers.reserve(p.num_layers() + 1);
  a.layers.push_back(inputs);
  for (int l = 0; l < p.num_layers(); ++l) {
    const int in = p.arch().layer_in(l), out = p.arch().layer_out(l);
    Matrix y(inputs.rows, out);
    kernels::DenseForward(p.weights(l).data(), p.bias(l).data(), in, out,
                          a.layers.back().data.data(), inputs.rows,
                          y.data.data(), l + 1 < p.num_layers());
    a.layers.push_back(std::move(y));
  }
  return a;
}

void CheckBatch(const NetParams& p, const TrainingBatch& batch) {
  if (batch.size() == 0) throw std::invalid_argument("empty training batch");
  if (batch.targets.rows != batch.inputs.rows ||
      batch.targets.cols != p.arch().output_dim ||
      batch.mask.size() != batch.targets.data.size()) {
    throw ShapeError("training batch targets do not match the network");
  }
  for (std::size_t k = 0; k < batch.mask.size(); ++k) {
    if (batch.mask[k] && !std::isfinite(batch.targets.data[k])) {
      throw TrainingDivergenceError("non-finite training target");
    }
  }
}

// Little-endian primitive IO.
template <typename T>
void PutLe(std::ostream& os, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  char buf[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  }
  os.write(buf, sizeof(U));
}

template <typename T>
T GetLe(std::istream& is) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  unsigned char buf[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(U))) {
    throw FormatError("weight file is truncated");
  }
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= U(buf[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

NetArchitecture NetArchitecture::Reference(int input_dim) {
  return NetArchitecture{
      .input_dim = input_dim, .hidden = {330, 180, 80, 64}, .output_dim = 6};
}

std::size_t NetArchitecture::num_params() const {
  std::size_t n = 0;
  for (int l = 0; l < num_layers(); ++l) {
    n += std::size_t(layer_in(l)) * layer_out(l) + layer_out(l);
  }
  return n;
}

NetParams::NetParams(NetArchitecture arch) : arch_(std::move(arch)) {
  CheckArchitecture(arch_);
  std::size_t offset = 0;
  for (int l = 0; l < arch_.num_layers(); ++l) {
    offsets_.push_back(offset);
    offset += std::size_t(arch_.layer_in(l)) * arch_.layer_out(l) +
              arch_.layer_out(l);
  }
  data_.assign(offset, 0.0);
}

NetParams NetParams::HeUniform(NetArchitecture arch, std::uint64_t seed) {
  NetParams p(std::move(arch));
  p.init_seed_ = seed;
  std::mt19937_64 rng(seed);
  for (int l = 0; l < p.num_layers(); ++l) {
    const double limit = std::sqrt(6.0 / p.arch_.layer_in(l));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& w : p.weights(l)) w = dist(rng);
  }
  return p;
}

std::span<double> NetParams::weights(int l) {
  return {data_.data() + offsets_[l],
          std::size_t(arch_.layer_in(l)) * arch_.layer_out(l)};
}
std::span<const double> NetParams::weights(int l) const {
  return {data_.data() + offsets_[l],
          std::size_t(arch_.layer_in(l)) * arch_.layer_out(l)};
}
std::span<double> NetParams::bias(int l) {
  return {data_.data() + offsets_[l] +
              std::size_t(arch_.layer_in(l)) * arch_.layer_out(l),
          std::size_t(arch_.layer_out(l))};
}
std::span<const double> NetParams::bias(int l) const {
  return {data_.data() + offsets_[l] +
              std::size_t(arch_.layer_in(l)) * arch_.layer_out(l),
          std::size_t(arch_.layer_out(l))};
}

double NetParams::SquaredNorm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return s;
}

bool NetParams::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void NetParams::SetZero() { std::fill(data_.begin(), data_.end(), 0.0); }

std::vector<double> Forward(const NetParams& params,
                            std::span<const double> x) {
  const auto& arch = params.arch();
  if (static_cast<int>(x.size()) != arch.input_dim) {
    throw ShapeError("input size " + std::to_string(x.size()) +
                     " != network input " + std::to_string(arch.input_dim));
  }
  std::vector<double> cur(x.begin(), x.end()), next;
  for (int l = 0; l < params.num_layers(); ++l) {
    next.assign(arch.layer_out(l), 0.0);
    kernels::DenseForward(params.weights(l).data(), params.bias(l).data(),
                          arch.layer_in(l), arch.layer_out(l), cur.data(), 1,
                          next.data(), l + 1 < params.num_layers());
    cur.swap(next);
  }
  return cur;
}

Matrix ForwardBatch(const NetParams& params, const Matrix& inputs) {
  return std::move(RunForward(params, inputs).layers.back());
}

void TrainingBatch::Reserve(int rows, int input_dim, int output_dim) {
  inputs.cols = input_dim;
  targets.cols = output_dim;
  inputs.data.reserve(std::size_t(rows) * input_dim);
  targets.data.reserve(std::size_t(rows) * output_dim);
  mask.reserve(std::size_t(rows) * output_dim);
}

void TrainingBatch::AddIndexed(std::span<const double> x, int index,
                               double target, int output_dim) {
  if (index < 0 || index >= output_dim) {
    throw ShapeError("target index out of range");
  }
  std::vector<double> t(output_dim, 0.0);
  std::vector<std::uint8_t> m(output_dim, 0);
  t[index] = target;
  m[index] = 1;
  AddMasked(x, t, m);
}

void TrainingBatch::AddMasked(std::span<const double> x,
                              std::span<const double> t,
                              std::span<const std::uint8_t> m) {
  if (inputs.rows == 0) {
    inputs.cols = static_cast<int>(x.size());
    targets.cols = static_cast<int>(t.size());
  }
  if (static_cast<int>(x.size()) != inputs.cols ||
      static_cast<int>(t.size()) != targets.cols || m.size() != t.size()) {
    throw ShapeError("training row has inconsistent width");
  }
  inputs.data.insert(inputs.data.end(), x.begin(), x.end());
  targets.data.insert(targets.data.end(), t.begin(), t.end());
  mask.insert(mask.end(), m.begin(), m.end());
  ++inputs.rows;
  ++targets.rows;
}

LossAndGrad Grad(const NetParams& params, const TrainingBatch& batch,
                 double l2) {
  CheckBatch(params, batch);
  const Activations acts = RunForward(params, batch.inputs);
  const Matrix& q = acts.layers.back();
  const int rows = batch.size();
  const int outputs = params.arch().output_dim;

  LossAndGrad result{.loss = 0.0, .grad = NetParams(params.arch())};
  Matrix dz(rows, outputs);
  for (std::size_t k = 0; k < q.data.size(); ++k) {
    if (!batch.mask[k]) continue;
    const double diff = q.data[k] - batch.targets.data[k];
    result.loss += diff * diff;
    dz.data[k] = 2.0 * diff;
  }

  for (int l = params.num_layers() - 1; l >= 0; --l) {
    const int in = params.arch().layer_in(l), out = params.arch().layer_out(l);
    Matrix dx;
    if (l > 0) dx = Matrix(rows, in);
    kernels::DenseBackward(params.weights(l).data(), in, out,
                           acts.layers[l].data.data(), dz.data.data(), rows,
                           result.grad.weights(l).data(),
                           result.grad.bias(l).data(),
                           l > 0 ? dx.data.data() : nullptr);
    if (l > 0) {
      const Matrix& a = acts.layers[l];
      for (std::size_t k = 0; k < dx.data.size(); ++k) {
        if (!(a.data[k] > 0.0)) dx.data[k] = 0.0;
      }
      dz = std::move(dx);
    }
  }

  if (l2 != 0.0) {
    auto g = result.grad.data();
    auto p = params.data();
    double norm = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      norm += p[k] * p[k];
      g[k] += 2.0 * l2 * p[k];
    }
    result.loss += l2 * norm;
  }
  return result;
}

double Loss(const NetParams& params, const TrainingBatch& batch, double l2) {
  CheckBatch(params, batch);
  const Matrix q = ForwardBatch(params, batch.inputs);
  double loss = 0.0;
  for (std::size_t k = 0; k < q.data.size(); ++k) {
    if (!batch.mask[k]) continue;
    const double diff = q.data[k] - batch.targets.data[k];
    loss += diff * diff;
  }
  if (l2 != 0.0) loss += l2 * params.SquaredNorm();
  return loss;
}

NetParams SgdStep(const NetParams& params, const NetParams& grad, double lr) {
  if (!params.SameShape(grad)) throw ShapeError("gradient shape mismatch");
  NetParams out = params;
  auto o = out.data();
  auto g = grad.data();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] -= lr * g[k];
  return out;
}

AdamMoments AdamMoments::ZerosLike(const NetParams& params) {
  return AdamMoments{.m = NetParams(params.arch()),
                     .v = NetParams(params.arch()),
                     .step = 0};
}

void AdamStep(NetParams& params, const NetParams& grad, AdamMoments& moments,
              const AdamConfig& c) {
  if (!params.SameShape(grad) || !params.SameShape(moments.m) ||
      !params.SameShape(moments.v)) {
    throw ShapeError("adam: parameter, gradient and moment shapes differ");
  }
  ++moments.step;
  const double bc1 = 1.0 - std::pow(c.beta1, double(moments.step));
  const double bc2 = 1.0 - std::pow(c.beta2, double(moments.step));
  auto p = params.data();
  auto g = grad.data();
  auto m = moments.m.data();
  auto v = moments.v.data();
  for (std::size_t k = 0; k < p.size(); ++k) {
    m[k] = c.beta1 * m[k] + (1.0 - c.beta1) * g[k];
    v[k] = c.beta2 * v[k] + (1.0 - c.beta2) * g[k] * g[k];
    const double mhat = m[k] / bc1;
    const double vhat = v[k] / bc2;
    p[k] -= c.lr * mhat / (std::sqrt(vhat) + c.epsilon);
  }
}

void SaveParams(const NetParams& params, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FormatError("cannot write '" + path.string() + "'");
  const auto& a = params.arch();
  os.write(kMagic.data(), kMagic.size());
  PutLe<std::uint32_t>(os, kFormatVersion);
  PutLe<std::uint32_t>(os, a.input_dim);
  PutLe<std::uint32_t>(os, a.output_dim);
  PutLe<std::uint32_t>(os, static_cast<std::uint32_t>(a.hidden.size()));
  for (int h : a.hidden) PutLe<std::uint32_t>(os, h);
  PutLe<std::uint32_t>(os, kActivationRelu);
  PutLe<std::uint32_t>(os, kActivationLinear);
  PutLe<std::uint64_t>(os, params.init_seed());
  for (double v : params.data()) PutLe<double>(os, v);
  if (!os) throw FormatError("failed writing '" + path.string() + "'");
}

NetParams LoadParams(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open '" + path.string() + "'");
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError("'" + path.string() + "' is not a value-net file");
  }
  const auto version = GetLe<std::uint32_t>(is);
  if (version != kFormatVersion) {
    throw FormatError("unsupported weight format version " +
                      std::to_string(version));
  }
  NetArchitecture arch;
  arch.input_dim = static_cast<int>(GetLe<std::uint32_t>(is));
  arch.output_dim = static_cast<int>(GetLe<std::uint32_t>(is));
  const auto num_hidden = GetLe<std::uint32_t>(is);
  if (num_hidden > 64) throw FormatError("implausible hidden layer count");
  for (std::uint32_t i = 0; i < num_hidden; ++i) {
    arch.hidden.push_back(static_cast<int>(GetLe<std::uint32_t>(is)));
  }
  if (GetLe<std::uint32_t>(is) != kActivationRelu ||
      GetLe<std::uint32_t>(is) != kActivationLinear) {
    throw FormatError("unsupported activation functions");
  }
  NetParams params;
  try {
    params = NetParams(arch);
  } catch (const ShapeError& e) {
    throw FormatError(std::string("bad architecture block: ") + e.what());
  }
  params.set_init_seed(GetLe<std::uint64_t>(is));
  for (double& v : params.data()) v = GetLe<double>(is);
  if (is.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after weight payload");
  }
  return params;
}

}  // namespace clutterpush::nn

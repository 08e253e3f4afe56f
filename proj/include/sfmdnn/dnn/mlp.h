// sfmdnn/include/sfmdnn/dnn/mlp.h

// Copyright 2026  The sfmdnn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SFMDNN_DNN_MLP_H_
#define SFMDNN_DNN_MLP_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sfmdnn/base/errors.h"
#include "sfmdnn/base/seeds.h"

namespace sfm {

enum class OutputActivation { kSigmoid = 0, kLinear = 1 };

const char *OutputActivationName(OutputActivation a);
OutputActivation ParseOutputActivation(const std::string &name);

// Fully connected network with sigmoid hidden layers. Weights are stored
// out x in; a batch is N x in with one example per row. Scalar is float for
// real models and double for gradient checks.
template <typename Scalar>
struct MlpNet {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<int> dims;  // {input, hidden..., output}
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  OutputActivation output_activation = OutputActivation::kSigmoid;

  int NumLayers() const { return static_cast<int>(weights.size()); }
  int InputDim() const { return dims.front(); }
  int OutputDim() const { return dims.back(); }

  bool operator==(const MlpNet &o) const {
    if (dims != o.dims || output_activation != o.output_activation) return false;
    for (int l = 0; l < NumLayers(); ++l)
      if (weights[l] != o.weights[l] || biases[l] != o.biases[l]) return false;
    return true;
  }
};

// Glorot-uniform weights in +-sqrt(6/(fan_in+fan_out)), zero biases.
template <typename Scalar>
MlpNet<Scalar> InitMlp(const std::vector<int> &dims, OutputActivation act,
                       uint64_t seed) {
  if (dims.size() < 2) throw ConfigError("mlp: need at least input and output dims");
  for (int d : dims)
    if (d < 1) throw ConfigError("mlp: layer dimensions must be positive");
  MlpNet<Scalar> net;
  net.dims = dims;
  net.output_activation = act;
  Rng rng(seed);
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l], fan_out = dims[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    typename MlpNet<Scalar>::Matrix w(fan_out, fan_in);
    // Row-major draw order so the stream does not depend on storage order.
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c)
        w(r, c) = static_cast<Scalar>(rng.Uniform(-limit, limit));
    net.weights.push_back(std::move(w));
    net.biases.push_back(MlpNet<Scalar>::Vector::Zero(fan_out));
  }
  return net;
}

template <typename Scalar>
Scalar Sigmoid(Scalar z) {
  // Clamped to the open interval (0, 1).
  constexpr Scalar lo = std::numeric_limits<Scalar>::min();
  constexpr Scalar hi = Scalar(1) - std::numeric_limits<Scalar>::epsilon() / 2;
  return std::clamp(Scalar(1) / (Scalar(1) + std::exp(-z)), lo, hi);
}

// Activations of one forward pass. post[0] is the input batch; post[l+1]
// the (masked) output of layer l; pre[l] its pre-activation.
template <typename Scalar>
struct ForwardCache {
  std::vector<typename MlpNet<Scalar>::Matrix> pre;
  std::vector<typename MlpNet<Scalar>::Matrix> post;

  const typename MlpNet<Scalar>::Matrix &Output() const { return post.back(); }
};

// Dropout masks, one N x units matrix per hidden layer, entries 0 or
// 1/(1-rate).
template <typename Scalar>
using DropoutMasks = std::vector<typename MlpNet<Scalar>::Matrix>;

template <typename Scalar>
DropoutMasks<Scalar> SampleDropoutMasks(const MlpNet<Scalar> &net, int batch,
                                        double rate, Rng *rng) {
  DropoutMasks<Scalar> masks;
  const Scalar keep_scale = static_cast<Scalar>(1.0 / (1.0 - rate));
  for (int l = 0; l + 1 < net.NumLayers(); ++l) {
    typename MlpNet<Scalar>::Matrix m(batch, net.dims[l + 1]);
    for (int r = 0; r < batch; ++r)
      for (int c = 0; c < m.cols(); ++c)
        m(r, c) = rng->Bernoulli(1.0 - rate) ? keep_scale : Scalar(0);
    masks.push_back(std::move(m));
  }
  return masks;
}

template <typename Scalar>
void Forward(const MlpNet<Scalar> &net, const typename MlpNet<Scalar>::Matrix &x,
             const DropoutMasks<Scalar> *masks, ForwardCache<Scalar> *cache) {
  if (x.cols() != net.InputDim())
    throw ShapeError("mlp: batch has " + std::to_string(x.cols()) +
                     " columns, network expects " +
                     std::to_string(net.InputDim()));
  if (!x.allFinite()) throw NumericError("mlp: non-finite input");
  if (masks && static_cast<int>(masks->size()) != net.NumLayers() - 1)
    throw ShapeError("mlp: one dropout mask per hidden layer required");
  cache->pre.resize(net.NumLayers());
  cache->post.resize(net.NumLayers() + 1);
  cache->post[0] = x;
  for (int l = 0; l < net.NumLayers(); ++l) {
    auto &z = cache->pre[l];
    z.noalias() = cache->post[l] * net.weights[l].transpose();
    z.rowwise() += net.biases[l].transpose();
    auto &h = cache->post[l + 1];
    const bool hidden = l + 1 < net.NumLayers();
    if (hidden || net.output_activation == OutputActivation::kSigmoid)
      h = z.unaryExpr([](Scalar v) { return Sigmoid(v); });
    else
      h = z;
    if (hidden && masks) h.array() *= (*masks)[l].array();
  }
}

template <typename Scalar>
struct MlpGradients {
  std::vector<typename MlpNet<Scalar>::Matrix> weights;
  std::vector<typename MlpNet<Scalar>::Vector> biases;
};

// MSE loss (1/(N*D)) sum (out - ref)^2 of a completed forward pass.
template <typename Scalar>
double MseLoss(const typename MlpNet<Scalar>::Matrix &out,
               const typename MlpNet<Scalar>::Matrix &ref) {
  if (out.rows() != ref.rows() || out.cols() != ref.cols())
    throw ShapeError("mlp: reference shape does not match output");
  if (out.size() == 0) return 0.0;
  return (out - ref).template cast<double>().squaredNorm() /
         static_cast<double>(out.size());
}

// Backpropagation of the MSE loss through a cached forward pass. The same
// masks used in Forward must be passed.
template <typename Scalar>
MlpGradients<Scalar> Backward(const MlpNet<Scalar> &net,
                              const ForwardCache<Scalar> &cache,
                              const DropoutMasks<Scalar> *masks,
                              const typename MlpNet<Scalar>::Matrix &ref) {
  using Matrix = typename MlpNet<Scalar>::Matrix;
  const int L = net.NumLayers();
  const Matrix &out = cache.Output();
  if (out.rows() != ref.rows() || out.cols() != ref.cols())
    throw ShapeError("mlp: reference shape does not match output");
  MlpGradients<Scalar> g;
  g.weights.resize(L);
  g.biases.resize(L);

  const Scalar norm = Scalar(2) / static_cast<Scalar>(out.size());
  Matrix delta = (out - ref) * norm;  // dLoss/dOutput
  if (net.output_activation == OutputActivation::kSigmoid)
    delta.array() *= out.array() * (Scalar(1) - out.array());
  for (int l = L - 1; l >= 0; --l) {
    g.weights[l].noalias() = delta.transpose() * cache.post[l];
    g.biases[l] = delta.colwise().sum().transpose();
    if (l == 0) break;
    Matrix dh = delta * net.weights[l];
    // post[l] = sigmoid(pre[l-1]) * mask; recompute the unmasked sigmoid.
    Matrix s = cache.pre[l - 1].unaryExpr([](Scalar v) { return Sigmoid(v); });
    dh.array() *= s.array() * (Scalar(1) - s.array());
    if (masks) dh.array() *= (*masks)[l - 1].array();
    delta = std::move(dh);
  }
  return g;
}

// acc += grad^2; param -= lr * grad / sqrt(acc + eps), elementwise.
template <typename Scalar>
void AdagradUpdate(std::span<Scalar> param, std::span<const Scalar> grad,
                   std::span<Scalar> acc, double learning_rate, double epsilon) {
  if (param.size() != grad.size() || param.size() != acc.size())
    throw ShapeError("adagrad: buffer size mismatch");
  const Scalar lr = static_cast<Scalar>(learning_rate);
  const Scalar eps = static_cast<Scalar>(epsilon);
  for (size_t i = 0; i < param.size(); ++i) {
    acc[i] += grad[i] * grad[i];
    param[i] -= lr * grad[i] / std::sqrt(acc[i] + eps);
  }
}

template <typename Scalar>
struct AdagradState {
  std::vector<typename MlpNet<Scalar>::Matrix> weights;
  std::vector<typename MlpNet<Scalar>::Vector> biases;

  static AdagradState Zeros(const MlpNet<Scalar> &net) {
    AdagradState s;
    for (int l = 0; l < net.NumLayers(); ++l) {
      s.weights.push_back(MlpNet<Scalar>::Matrix::Zero(net.weights[l].rows(),
                                                      net.weights[l].cols()));
      s.biases.push_back(MlpNet<Scalar>::Vector::Zero(net.biases[l].size()));
    }
    return s;
  }
};

template <typename Scalar>
void ApplyAdagrad(MlpNet<Scalar> *net, const MlpGradients<Scalar> &g,
                  AdagradState<Scalar> *state, double learning_rate,
                  double epsilon) {
  for (int l = 0; l < net->NumLayers(); ++l) {
    auto &w = net->weights[l];
    AdagradUpdate<Scalar>({w.data(), static_cast<size_t>(w.size())},
                          {g.weights[l].data(), static_cast<size_t>(w.size())},
                          {state->weights[l].data(), static_cast<size_t>(w.size())},
                          learning_rate, epsilon);
    auto &b = net->biases[l];
    AdagradUpdate<Scalar>({b.data(), static_cast<size_t>(b.size())},
                          {g.biases[l].data(), static_cast<size_t>(b.size())},
                          {state->biases[l].data(), static_cast<size_t>(b.size())},
                          learning_rate, epsilon);
  }
}

}  // namespace sfm

#endif  // SFMDNN_DNN_MLP_H_

// src/model/layers.cc

// Copyright 2026  The SVTS Authors
//
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

#include "svts/model/layers.h"

#include <cmath>

#include "svts/core/error.h"

namespace svts::nn {

void AccumulateGrad(Param &p, const Matrix &g) {
  if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols()) p.ZeroGrad();
  p.grad += g;
}

Linear::Linear(const std::string &name, int in, int out, bool bias, Rng &rng)
    : weight_(name + ".weight", {out, in}, out, in),
      bias_(name + ".bias", bias ? std::vector<int>{out} : std::vector<int>{}, bias ? 1 : 0,
            bias ? out : 0),
      has_bias_(bias) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  FillUniform(weight_.value, bound, rng);
  if (has_bias_) FillUniform(bias_.value, bound, rng);
}

Matrix Linear::Forward(const Matrix &x) const {
  if (x.cols() != weight_.value.cols())
    throw ShapeError(weight_.name + ": expected " + std::to_string(weight_.value.cols()) +
                     " input features, got " + std::to_string(x.cols()));
  Matrix y = x * weight_.value.transpose();
  if (has_bias_) y.rowwise() += bias_.value.row(0);
  return y;
}

Matrix Linear::Backward(const Matrix &x, const Matrix &dy, bool need_input_grad) {
  AccumulateGrad(weight_, dy.transpose() * x);
  if (has_bias_) AccumulateGrad(bias_, dy.colwise().sum());
  if (!need_input_grad) return {};
  return dy * weight_.value;
}

void Linear::CollectParams(std::vector<Param *> &out) {
  out.push_back(&weight_);
  if (has_bias_) out.push_back(&bias_);
}

LayerNorm::LayerNorm(const std::string &name, int dim, double eps)
    : gamma_(name + ".weight", {dim}, 1, dim), beta_(name + ".bias", {dim}, 1, dim), eps_(eps) {
  gamma_.value.setOnes();
}

Matrix LayerNorm::Forward(const Matrix &x, Cache *cache) const {
  const int n = static_cast<int>(x.rows()), d = static_cast<int>(x.cols());
  if (d != gamma_.value.cols()) throw ShapeError(gamma_.name + ": feature size mismatch");
  Matrix xhat(n, d);
  Vector inv_std(n);
  for (int i = 0; i < n; ++i) {
    const double mean = x.row(i).mean();
    const double var = (x.row(i).array() - mean).square().mean();
    inv_std[i] = 1.0 / std::sqrt(var + eps_);
    xhat.row(i) = (x.row(i).array() - mean) * inv_std[i];
  }
  Matrix y = (xhat.array().rowwise() * gamma_.value.row(0).array()).rowwise() +
             beta_.value.row(0).array();
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

Matrix LayerNorm::Backward(const Cache &cache, const Matrix &dy) {
  AccumulateGrad(gamma_, (dy.array() * cache.xhat.array()).colwise().sum().matrix());
  AccumulateGrad(beta_, dy.colwise().sum());
  Matrix dxhat = dy.array().rowwise() * gamma_.value.row(0).array();
  Matrix dx(dy.rows(), dy.cols());
  for (int i = 0; i < dy.rows(); ++i) {
    const double m1 = dxhat.row(i).mean();
    const double m2 = (dxhat.row(i).array() * cache.xhat.row(i).array()).mean();
    dx.row(i) = cache.inv_std[i] *
                (dxhat.row(i).array() - m1 - cache.xhat.row(i).array() * m2);
  }
  return dx;
}

void LayerNorm::CollectParams(std::vector<Param *> &out) {
  out.push_back(&gamma_);
  out.push_back(&beta_);
}

BatchNorm::BatchNorm(const std::string &name, int channels, double eps, double momentum)
    : channels_(channels),
      gamma_(name + ".weight", {channels}, 1, channels),
      beta_(name + ".bias", {channels}, 1, channels),
      running_mean_{name + ".running_mean", Matrix::Zero(1, channels)},
      running_var_{name + ".running_var", Matrix::Ones(1, channels)},
      eps_(eps),
      momentum_(momentum) {
  gamma_.value.setOnes();
}

Matrix BatchNorm::Forward(const Matrix &x, int groups, int inner, const RunContext &ctx,
                          Cache *cache) const {
  const int C = channels_;
  if (static_cast<int64_t>(groups) * C * inner != x.size())
    throw ShapeError(gamma_.name + ": layout does not match input size");
  Matrix y(x.rows(), x.cols());
  const double *px = x.data();
  double *py = y.data();
  Vector mean(C), inv_std(C);
  if (ctx.training) {
    const double count = static_cast<double>(groups) * inner;
    mean.setZero();
    Vector sq = Vector::Zero(C);
    for (int g = 0; g < groups; ++g)
      for (int c = 0; c < C; ++c) {
        const double *row = px + (static_cast<size_t>(g) * C + c) * inner;
        double s = 0;
        for (int l = 0; l < inner; ++l) s += row[l];
        mean[c] += s;
      }
    mean /= count;
    for (int g = 0; g < groups; ++g)
      for (int c = 0; c < C; ++c) {
        const double *row = px + (static_cast<size_t>(g) * C + c) * inner;
        double s = 0;
        for (int l = 0; l < inner; ++l) s += (row[l] - mean[c]) * (row[l] - mean[c]);
        sq[c] += s;
      }
    const Vector var = sq / count;
    for (int c = 0; c < C; ++c) inv_std[c] = 1.0 / std::sqrt(var[c] + eps_);
    const double unbias = count > 1 ? count / (count - 1) : 1.0;
    running_mean_.value.row(0) =
        (1 - momentum_) * running_mean_.value.row(0) + momentum_ * mean.transpose();
    running_var_.value.row(0) =
        (1 - momentum_) * running_var_.value.row(0) + momentum_ * unbias * var.transpose();
  } else {
    mean = running_mean_.value.row(0).transpose();
    for (int c = 0; c < C; ++c) inv_std[c] = 1.0 / std::sqrt(running_var_.value(0, c) + eps_);
  }
  Matrix xhat;
  if (cache) xhat.resize(x.rows(), x.cols());
  for (int g = 0; g < groups; ++g)
    for (int c = 0; c < C; ++c) {
      const size_t base = (static_cast<size_t>(g) * C + c) * inner;
      const double gm = gamma_.value(0, c), bt = beta_.value(0, c);
      for (int l = 0; l < inner; ++l) {
        const double h = (px[base + l] - mean[c]) * inv_std[c];
        if (cache) xhat.data()[base + l] = h;
        py[base + l] = gm * h + bt;
      }
    }
  if (cache) {
    cache->training = ctx.training;
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

Matrix BatchNorm::Backward(const Cache &cache, const Matrix &dy, int groups, int inner) {
  const int C = channels_;
  Vector dgamma = Vector::Zero(C), dbeta = Vector::Zero(C);
  const double *pd = dy.data();
  const double *ph = cache.xhat.data();
  for (int g = 0; g < groups; ++g)
    for (int c = 0; c < C; ++c) {
      const size_t base = (static_cast<size_t>(g) * C + c) * inner;
      for (int l = 0; l < inner; ++l) {
        dgamma[c] += pd[base + l] * ph[base + l];
        dbeta[c] += pd[base + l];
      }
    }
  AccumulateGrad(gamma_, dgamma.transpose());
  AccumulateGrad(beta_, dbeta.transpose());
  Matrix dx(dy.rows(), dy.cols());
  double *px = dx.data();
  const double count = static_cast<double>(groups) * inner;
  for (int g = 0; g < groups; ++g)
    for (int c = 0; c < C; ++c) {
      const size_t base = (static_cast<size_t>(g) * C + c) * inner;
      const double scale = gamma_.value(0, c) * cache.inv_std[c];
      for (int l = 0; l < inner; ++l) {
        if (cache.training)
          px[base + l] = scale * (pd[base + l] - dbeta[c] / count - ph[base + l] * dgamma[c] / count);
        else
          px[base + l] = scale * pd[base + l];
      }
    }
  return dx;
}

void BatchNorm::CollectParams(std::vector<Param *> &out) {
  out.push_back(&gamma_);
  out.push_back(&beta_);
}

void BatchNorm::CollectBuffers(std::vector<Buffer *> &out) {
  out.push_back(&running_mean_);
  out.push_back(&running_var_);
}

Matrix Relu(const Matrix &x) { return x.cwiseMax(0.0); }

Matrix ReluBackward(const Matrix &y, const Matrix &dy) {
  return (y.array() > 0.0).select(dy, 0.0);
}

namespace {
inline double Sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }
}  // namespace

Matrix Swish(const Matrix &x) {
  return x.unaryExpr([](double v) { return v * Sigmoid(v); });
}

Matrix SwishBackward(const Matrix &x, const Matrix &dy) {
  return dy.binaryExpr(x, [](double g, double v) {
    const double s = Sigmoid(v);
    return g * s * (1.0 + v * (1.0 - s));
  });
}

Matrix Glu(const Matrix &x) {
  const int d = static_cast<int>(x.cols() / 2);
  return x.leftCols(d).array() * x.rightCols(d).unaryExpr([](double v) { return Sigmoid(v); }).array();
}

Matrix GluBackward(const Matrix &x, const Matrix &dy) {
  const int d = static_cast<int>(x.cols() / 2);
  Matrix dx(x.rows(), x.cols());
  const Matrix sig = x.rightCols(d).unaryExpr([](double v) { return Sigmoid(v); });
  dx.leftCols(d) = dy.array() * sig.array();
  dx.rightCols(d) = dy.array() * x.leftCols(d).array() * sig.array() * (1.0 - sig.array());
  return dx;
}

Matrix DropoutMask(int rows, int cols, double rate, const RunContext &ctx) {
  if (!ctx.training || rate <= 0.0) return {};
  if (!ctx.rng) throw Error("dropout in training mode needs an rng");
  Matrix mask(rows, cols);
  const double keep = 1.0 / (1.0 - rate);
  for (int64_t i = 0; i < mask.size(); ++i) mask.data()[i] = ctx.rng->Uniform() < rate ? 0.0 : keep;
  return mask;
}

Matrix ApplyMask(const Matrix &x, const Matrix &mask) {
  if (mask.size() == 0) return x;
  return x.cwiseProduct(mask);
}

}  // namespace svts::nn

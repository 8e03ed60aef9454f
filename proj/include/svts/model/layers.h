// include/svts/model/layers.h

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

#ifndef SVTS_MODEL_LAYERS_H_
#define SVTS_MODEL_LAYERS_H_

#include <string>

#include "svts/model/tensor.h"

namespace svts::nn {

// Adds `g` into p.grad, allocating it on first use.
void AccumulateGrad(Param &p, const Matrix &g);

// y = x W^T + b on row vectors.  Backward() takes the forward input and
// returns dL/dx (skipped when need_input_grad is false).
class Linear : public Module {
 public:
  Linear(const std::string &name, int in, int out, bool bias, Rng &rng);

  Matrix Forward(const Matrix &x) const;
  Matrix Backward(const Matrix &x, const Matrix &dy, bool need_input_grad = true);
  void CollectParams(std::vector<Param *> &out) override;

  int in_dim() const { return static_cast<int>(weight_.value.cols()); }
  int out_dim() const { return static_cast<int>(weight_.value.rows()); }
  static int64_t NumParams(int in, int out, bool bias) { return int64_t{in} * out + (bias ? out : 0); }

  Param &weight() { return weight_; }
  Param &bias() { return bias_; }

 private:
  Param weight_;
  Param bias_;
  bool has_bias_;
};

// Normalises each row over its features.
class LayerNorm : public Module {
 public:
  struct Cache {
    Matrix xhat;
    Vector inv_std;
  };

  LayerNorm(const std::string &name, int dim, double eps = 1e-5);
  Matrix Forward(const Matrix &x, Cache *cache) const;
  Matrix Backward(const Cache &cache, const Matrix &dy);
  void CollectParams(std::vector<Param *> &out) override;
  static int64_t NumParams(int dim) { return 2 * int64_t{dim}; }

 private:
  Param gamma_;
  Param beta_;
  double eps_;
};

// Per-channel normalisation of data laid out as [groups][channels][inner]
// in a contiguous row-major matrix.  Training mode uses batch statistics and
// updates the running estimates (momentum 0.1, unbiased variance); inference
// uses the running estimates.
class BatchNorm : public Module {
 public:
  struct Cache {
    bool training = false;
    Matrix xhat;
    Vector inv_std;
  };

  BatchNorm(const std::string &name, int channels, double eps = 1e-5,
            double momentum = 0.1);
  Matrix Forward(const Matrix &x, int groups, int inner, const RunContext &ctx,
                 Cache *cache) const;
  Matrix Backward(const Cache &cache, const Matrix &dy, int groups, int inner);
  void CollectParams(std::vector<Param *> &out) override;
  void CollectBuffers(std::vector<Buffer *> &out) override;
  static int64_t NumParams(int channels) { return 2 * int64_t{channels}; }

  int channels() const { return channels_; }

 private:
  int channels_;
  Param gamma_;
  Param beta_;
  // Running statistics are written only by training-mode forward passes.
  mutable Buffer running_mean_;
  mutable Buffer running_var_;
  double eps_;
  double momentum_;
};

Matrix Relu(const Matrix &x);
// dL/dx given the ReLU output.
Matrix ReluBackward(const Matrix &y, const Matrix &dy);

Matrix Swish(const Matrix &x);
Matrix SwishBackward(const Matrix &x, const Matrix &dy);

// Splits columns into halves (a, b) and returns a * sigmoid(b).
Matrix Glu(const Matrix &x);
Matrix GluBackward(const Matrix &x, const Matrix &dy);

// Inverted dropout.  Returns an empty mask (identity) outside training or
// when rate is zero.
Matrix DropoutMask(int rows, int cols, double rate, const RunContext &ctx);
Matrix ApplyMask(const Matrix &x, const Matrix &mask);

}  // namespace svts::nn

#endif  // SVTS_MODEL_LAYERS_H_

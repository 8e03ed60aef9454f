// include/svts/model/tensor.h

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

#ifndef SVTS_MODEL_TENSOR_H_
#define SVTS_MODEL_TENSOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "svts/core/rng.h"
#include "svts/core/types.h"

namespace svts::nn {

// A trainable tensor.  Values are stored as a 2-D matrix (conv kernels are
// flattened to out x (in * kernel volume)); `shape` keeps the logical layout
// for checkpoints.  `grad` stays empty until ZeroGrad() allocates it, so
// inference-only models carry no gradient memory.
struct Param {
  std::string name;
  std::vector<int> shape;
  Matrix value;
  Matrix grad;

  Param() = default;
  Param(std::string name, std::vector<int> shape, int rows, int cols);
  int64_t size() const { return value.size(); }
  void ZeroGrad();
};

// Non-trainable state saved with the model (batch-norm running statistics).
struct Buffer {
  std::string name;
  Matrix value;
};

// Batched 2-D feature maps, N x C x H x W, stored as an (N*C) x (H*W)
// row-major matrix so that one image is a contiguous C x (H*W) block.
struct FeatureMap {
  int n = 0, c = 0, h = 0, w = 0;
  Matrix data;

  FeatureMap() = default;
  FeatureMap(int n, int c, int h, int w) : n(n), c(c), h(h), w(w), data(Matrix::Zero(n * c, h * w)) {}
  Eigen::Block<Matrix> image(int i) { return data.block(i * c, 0, c, h * w); }
  Eigen::Block<const Matrix> image(int i) const { return data.block(i * c, 0, c, h * w); }
};

// Training flag plus the dropout random source.  Inference passes a
// default-constructed context.
struct RunContext {
  bool training = false;
  Rng *rng = nullptr;
};

// Several sequences concatenated along time; lengths[i] rows belong to
// sequence i.  Time-mixing layers never look across sequence boundaries.
struct Packing {
  std::vector<int> lengths;

  int total() const;
  int offset(int i) const;
  int count() const { return static_cast<int>(lengths.size()); }
};

// U(-bound, bound) fill.
void FillUniform(Matrix &m, double bound, Rng &rng);
void FillNormal(Matrix &m, double stddev, Rng &rng);

// Module interface for parameter and buffer discovery.
class Module {
 public:
  virtual ~Module() = default;
  virtual void CollectParams(std::vector<Param *> &out) = 0;
  virtual void CollectBuffers(std::vector<Buffer *> &) {}
};

}  // namespace svts::nn

#endif  // SVTS_MODEL_TENSOR_H_

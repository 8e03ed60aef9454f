// include/svts/model/conv.h

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

#ifndef SVTS_MODEL_CONV_H_
#define SVTS_MODEL_CONV_H_

#include <string>
#include <vector>

#include "svts/model/tensor.h"

namespace svts::nn {

// Square-kernel 2-D convolution through im2col.
class Conv2d : public Module {
 public:
  Conv2d(const std::string &name, int in, int out, int kernel, int stride, int pad, bool bias,
         Rng &rng);

  FeatureMap Forward(const FeatureMap &x) const;
  // Needs the forward input; returns dL/dx.
  FeatureMap Backward(const FeatureMap &x, const FeatureMap &dy);
  void CollectParams(std::vector<Param *> &out) override;

  int OutSize(int in) const { return (in + 2 * pad_ - kernel_) / stride_ + 1; }
  static int64_t NumParams(int in, int out, int kernel, bool bias) {
    return int64_t{in} * out * kernel * kernel + (bias ? out : 0);
  }

 private:
  Eigen::Map<Matrix> Im2Col(const FeatureMap &x, int i0, int i1) const;
  void Col2ImAdd(const Eigen::Map<Matrix> &cols, FeatureMap &dx, int i0, int i1) const;

  int in_, out_, kernel_, stride_, pad_;
  bool has_bias_;
  Param weight_;
  Param bias_;
};

// 3x3 max pooling, stride 2, padding 1 (padding never wins).
class MaxPool2d {
 public:
  struct Cache {
    int in_h = 0, in_w = 0;
    std::vector<int> argmax;
  };
  static FeatureMap Forward(const FeatureMap &x, Cache *cache);
  static FeatureMap Backward(const Cache &cache, const FeatureMap &dy);
};

// First visual layer: a 1 -> C spatio-temporal convolution with kernel
// (5, 7, 7), stride (1, 2, 2), padding (2, 3, 3) and no bias, applied to
// packed grayscale clips stored one frame per row.  Temporal padding is done
// per clip.  The input is raw pixels so no input gradient is produced.
class Conv3dStem : public Module {
 public:
  static constexpr int kKt = 5, kKs = 7, kStride = 2, kPadT = 2, kPadS = 3;

  Conv3dStem(const std::string &name, int out, Rng &rng);
  // frames: total_frames x (side * side).  Returns one map per frame.
  FeatureMap Forward(const Matrix &frames, int side, const Packing &packing) const;
  void Backward(const Matrix &frames, int side, const Packing &packing, const FeatureMap &dy);
  void CollectParams(std::vector<Param *> &out) override;
  static int64_t NumParams(int out) { return int64_t{out} * kKt * kKs * kKs; }

 private:
  Eigen::Map<Matrix> Columns(const Matrix &frames, int side, int s0, int s1) const;
  Matrix StackedKernel() const;
  int ChunkFrames(int side) const;

  int out_;
  Param weight_;
};

// Per-channel 1-D convolution along time with "same" padding, run
// independently on every packed sequence.
class DepthwiseConv1d : public Module {
 public:
  DepthwiseConv1d(const std::string &name, int channels, int kernel, Rng &rng);
  Matrix Forward(const Matrix &x, const Packing &packing) const;
  Matrix Backward(const Matrix &x, const Packing &packing, const Matrix &dy);
  void CollectParams(std::vector<Param *> &out) override;
  static int64_t NumParams(int channels, int kernel) { return int64_t{channels} * (kernel + 1); }

 private:
  int channels_, kernel_;
  Param weight_;
  Param bias_;
};

}  // namespace svts::nn

#endif  // SVTS_MODEL_CONV_H_

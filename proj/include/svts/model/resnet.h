// include/svts/model/resnet.h

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

#ifndef SVTS_MODEL_RESNET_H_
#define SVTS_MODEL_RESNET_H_

#include <memory>
#include <string>
#include <vector>

#include "svts/model/conv.h"
#include "svts/model/layers.h"

namespace svts::nn {

class BasicBlock : public Module {
 public:
  struct Cache {
    FeatureMap x, r1, out;
    BatchNorm::Cache bn1, bn2, bnd;
  };

  BasicBlock(const std::string &name, int in, int out, int stride, Rng &rng);
  FeatureMap Forward(const FeatureMap &x, const RunContext &ctx, Cache *cache) const;
  FeatureMap Backward(Cache &cache, const FeatureMap &dy);
  void CollectParams(std::vector<Param *> &out) override;
  void CollectBuffers(std::vector<Buffer *> &out) override;
  static int64_t NumParams(int in, int out, int stride);

 private:
  Conv2d conv1_;
  BatchNorm bn1_;
  Conv2d conv2_;
  BatchNorm bn2_;
  std::unique_ptr<Conv2d> down_conv_;
  std::unique_ptr<BatchNorm> down_bn_;
};

// Spatio-temporal stem followed by a four-stage 2-D residual trunk (two
// basic blocks per stage, widths w, 2w, 4w, 8w) and global average pooling.
// Maps packed grayscale frames to one 8w-dimensional vector per frame.
class VisualFrontEnd : public Module {
 public:
  struct Cache {
    int side = 0;
    Packing packing;
    const Matrix *frames = nullptr;
    BatchNorm::Cache bn0;
    FeatureMap r0;
    MaxPool2d::Cache pool;
    std::vector<BasicBlock::Cache> blocks;
    int final_h = 0, final_w = 0, final_c = 0;
  };

  VisualFrontEnd(const std::string &name, int width, Rng &rng);
  // `frames` must outlive the cache.
  Matrix Forward(const Matrix &frames, int side, const Packing &packing, const RunContext &ctx,
                 Cache *cache) const;
  void Backward(Cache &cache, const Matrix &dy);
  void CollectParams(std::vector<Param *> &out) override;
  void CollectBuffers(std::vector<Buffer *> &out) override;

  int output_dim() const { return 8 * width_; }
  static int64_t NumParams(int width);

 private:
  int width_;
  Conv3dStem stem_;
  BatchNorm bn0_;
  std::vector<std::unique_ptr<BasicBlock>> blocks_;
};

}  // namespace svts::nn

#endif  // SVTS_MODEL_RESNET_H_

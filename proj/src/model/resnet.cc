// src/model/resnet.cc

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

#include "svts/model/resnet.h"

namespace svts::nn {

namespace {

Matrix BnForward(const BatchNorm &bn, const FeatureMap &x, const RunContext &ctx,
                 BatchNorm::Cache *cache) {
  return bn.Forward(x.data, x.n, x.h * x.w, ctx, cache);
}

FeatureMap WithData(const FeatureMap &like, Matrix data) {
  FeatureMap f;
  f.n = like.n;
  f.c = like.c;
  f.h = like.h;
  f.w = like.w;
  f.data = std::move(data);
  return f;
}

}  // namespace

BasicBlock::BasicBlock(const std::string &name, int in, int out, int stride, Rng &rng)
    : conv1_(name + ".conv1", in, out, 3, stride, 1, false, rng),
      bn1_(name + ".bn1", out),
      conv2_(name + ".conv2", out, out, 3, 1, 1, false, rng),
      bn2_(name + ".bn2", out) {
  if (stride != 1 || in != out) {
    down_conv_ = std::make_unique<Conv2d>(name + ".downsample.0", in, out, 1, stride, 0, false, rng);
    down_bn_ = std::make_unique<BatchNorm>(name + ".downsample.1", out);
  }
}

int64_t BasicBlock::NumParams(int in, int out, int stride) {
  int64_t n = Conv2d::NumParams(in, out, 3, false) + BatchNorm::NumParams(out) +
              Conv2d::NumParams(out, out, 3, false) + BatchNorm::NumParams(out);
  if (stride != 1 || in != out) n += Conv2d::NumParams(in, out, 1, false) + BatchNorm::NumParams(out);
  return n;
}

FeatureMap BasicBlock::Forward(const FeatureMap &x, const RunContext &ctx, Cache *cache) const {
  FeatureMap h1 = conv1_.Forward(x);
  FeatureMap r1 = WithData(h1, Relu(BnForward(bn1_, h1, ctx, cache ? &cache->bn1 : nullptr)));
  FeatureMap h2 = conv2_.Forward(r1);
  Matrix sum = BnForward(bn2_, h2, ctx, cache ? &cache->bn2 : nullptr);
  if (down_conv_) {
    FeatureMap d = down_conv_->Forward(x);
    sum += BnForward(*down_bn_, d, ctx, cache ? &cache->bnd : nullptr);
  } else {
    sum += x.data;
  }
  FeatureMap out = WithData(h2, Relu(sum));
  if (cache) {
    cache->x = x;
    cache->r1 = std::move(r1);
    cache->out = out;
  }
  return out;
}

FeatureMap BasicBlock::Backward(Cache &cache, const FeatureMap &dy) {
  const FeatureMap &out = cache.out;
  const Matrix dsum = ReluBackward(out.data, dy.data);
  const int area = out.h * out.w;
  FeatureMap dh2 = WithData(out, bn2_.Backward(cache.bn2, dsum, out.n, area));
  FeatureMap dr1 = conv2_.Backward(cache.r1, dh2);
  FeatureMap dh1 = WithData(
      cache.r1, bn1_.Backward(cache.bn1, ReluBackward(cache.r1.data, dr1.data), out.n, area));
  FeatureMap dx = conv1_.Backward(cache.x, dh1);
  if (down_conv_) {
    FeatureMap dd = WithData(out, down_bn_->Backward(cache.bnd, dsum, out.n, area));
    dx.data += down_conv_->Backward(cache.x, dd).data;
  } else {
    dx.data += dsum;
  }
  return dx;
}

void BasicBlock::CollectParams(std::vector<Param *> &out) {
  conv1_.CollectParams(out);
  bn1_.CollectParams(out);
  conv2_.CollectParams(out);
  bn2_.CollectParams(out);
  if (down_conv_) {
    down_conv_->CollectParams(out);
    down_bn_->CollectParams(out);
  }
}

void BasicBlock::CollectBuffers(std::vector<Buffer *> &out) {
  bn1_.CollectBuffers(out);
  bn2_.CollectBuffers(out);
  if (down_bn_) down_bn_->CollectBuffers(out);
}

VisualFrontEnd::VisualFrontEnd(const std::string &name, int width, Rng &rng)
    : width_(width), stem_(name + ".stem.conv", width, rng), bn0_(name + ".stem.bn", width) {
  int in = width;
  for (int stage = 0; stage < 4; ++stage) {
    const int out = width << stage;
    for (int b = 0; b < 2; ++b) {
      const int stride = (stage > 0 && b == 0) ? 2 : 1;
      blocks_.push_back(std::make_unique<BasicBlock>(
          name + ".layer" + std::to_string(stage + 1) + "." + std::to_string(b), in, out, stride,
          rng));
      in = out;
    }
  }
}

int64_t VisualFrontEnd::NumParams(int width) {
  int64_t n = Conv3dStem::NumParams(width) + BatchNorm::NumParams(width);
  int in = width;
  for (int stage = 0; stage < 4; ++stage) {
    const int out = width << stage;
    for (int b = 0; b < 2; ++b) {
      n += BasicBlock::NumParams(in, out, (stage > 0 && b == 0) ? 2 : 1);
      in = out;
    }
  }
  return n;
}

Matrix VisualFrontEnd::Forward(const Matrix &frames, int side, const Packing &packing,
                               const RunContext &ctx, Cache *cache) const {
  FeatureMap s = stem_.Forward(frames, side, packing);
  FeatureMap r0 = WithData(s, Relu(BnForward(bn0_, s, ctx, cache ? &cache->bn0 : nullptr)));
  FeatureMap x = MaxPool2d::Forward(r0, cache ? &cache->pool : nullptr);
  if (cache) {
    cache->side = side;
    cache->packing = packing;
    cache->frames = &frames;
    cache->r0 = std::move(r0);
    cache->blocks.assign(blocks_.size(), {});
  }
  for (size_t b = 0; b < blocks_.size(); ++b)
    x = blocks_[b]->Forward(x, ctx, cache ? &cache->blocks[b] : nullptr);
  if (cache) {
    cache->final_h = x.h;
    cache->final_w = x.w;
    cache->final_c = x.c;
  }
  // Global average pooling: each row of x.data is one (frame, channel) plane.
  Matrix pooled = x.data.rowwise().mean();
  return Eigen::Map<Matrix>(pooled.data(), x.n, x.c);
}

void VisualFrontEnd::Backward(Cache &cache, const Matrix &dy) {
  const int n = static_cast<int>(dy.rows()), c = cache.final_c;
  const int area = cache.final_h * cache.final_w;
  FeatureMap dx(n, c, cache.final_h, cache.final_w);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < c; ++k) dx.data.row(i * c + k).setConstant(dy(i, k) / area);
  for (size_t b = blocks_.size(); b-- > 0;) dx = blocks_[b]->Backward(cache.blocks[b], dx);
  FeatureMap dr0 = MaxPool2d::Backward(cache.pool, dx);
  const FeatureMap &r0 = cache.r0;
  FeatureMap ds = WithData(
      r0, bn0_.Backward(cache.bn0, ReluBackward(r0.data, dr0.data), r0.n, r0.h * r0.w));
  stem_.Backward(*cache.frames, cache.side, cache.packing, ds);
}

void VisualFrontEnd::CollectParams(std::vector<Param *> &out) {
  stem_.CollectParams(out);
  bn0_.CollectParams(out);
  for (auto &b : blocks_) b->CollectParams(out);
}

void VisualFrontEnd::CollectBuffers(std::vector<Buffer *> &out) {
  bn0_.CollectBuffers(out);
  for (auto &b : blocks_) b->CollectBuffers(out);
}

}  // namespace svts::nn

// include/svts/model/conformer.h

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

#ifndef SVTS_MODEL_CONFORMER_H_
#define SVTS_MODEL_CONFORMER_H_

#include <memory>
#include <string>
#include <vector>

#include "svts/model/attention.h"
#include "svts/model/conv.h"
#include "svts/model/layers.h"

namespace svts::nn {

// Linear -> Swish -> dropout -> Linear.
class FeedForward : public Module {
 public:
  struct Cache {
    Matrix x, h, mask, act;
  };
  FeedForward(const std::string &name, int dim, int hidden, double dropout, Rng &rng);
  Matrix Forward(const Matrix &x, const RunContext &ctx, Cache *cache) const;
  Matrix Backward(const Cache &cache, const Matrix &dy);
  void CollectParams(std::vector<Param *> &out) override;
  static int64_t NumParams(int dim, int hidden);

 private:
  double dropout_;
  Linear w1_, w2_;
};

// Pointwise expansion with GLU, depthwise temporal convolution, batch norm,
// Swish and a pointwise projection.
class ConvModule : public Module {
 public:
  struct Cache {
    Matrix x, h1, g, d, act;
    BatchNorm::Cache bn;
  };
  ConvModule(const std::string &name, int dim, int kernel, Rng &rng);
  Matrix Forward(const Matrix &x, const Packing &packing, const RunContext &ctx,
                 Cache *cache) const;
  Matrix Backward(const Cache &cache, const Packing &packing, const Matrix &dy);
  void CollectParams(std::vector<Param *> &out) override;
  void CollectBuffers(std::vector<Buffer *> &out) override;
  static int64_t NumParams(int dim, int kernel);

 private:
  Linear pw1_;
  DepthwiseConv1d depthwise_;
  BatchNorm bn_;
  Linear pw2_;
};

// Macaron block: half-step feed-forward, self-attention, convolution,
// half-step feed-forward, each pre-normed with a residual connection, then a
// final layer norm.
class ConformerBlock : public Module {
 public:
  struct Cache {
    LayerNorm::Cache ln_ff1, ln_mha, ln_conv, ln_ff2, ln_out;
    FeedForward::Cache ff1, ff2;
    RelPosSelfAttention::Cache mha;
    ConvModule::Cache conv;
    Matrix m_ff1, m_mha, m_conv, m_ff2;
  };
  ConformerBlock(const std::string &name, int dim, int heads, int ffn, int kernel, double dropout,
                 Rng &rng);
  Matrix Forward(const Matrix &x, const Packing &packing, const RunContext &ctx,
                 Cache *cache) const;
  Matrix Backward(const Cache &cache, const Packing &packing, const Matrix &dy);
  void CollectParams(std::vector<Param *> &out) override;
  void CollectBuffers(std::vector<Buffer *> &out) override;
  static int64_t NumParams(int dim, int heads, int ffn, int kernel);

 private:
  double dropout_;
  LayerNorm ln_ff1_, ln_mha_, ln_conv_, ln_ff2_, ln_out_;
  FeedForward ff1_, ff2_;
  RelPosSelfAttention mha_;
  ConvModule conv_;
};

}  // namespace svts::nn

#endif  // SVTS_MODEL_CONFORMER_H_

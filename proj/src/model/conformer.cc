// src/model/conformer.cc

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

#include "svts/model/conformer.h"

namespace svts::nn {

FeedForward::FeedForward(const std::string &name, int dim, int hidden, double dropout, Rng &rng)
    : dropout_(dropout),
      w1_(name + ".w_1", dim, hidden, true, rng),
      w2_(name + ".w_2", hidden, dim, true, rng) {}

int64_t FeedForward::NumParams(int dim, int hidden) {
  return Linear::NumParams(dim, hidden, true) + Linear::NumParams(hidden, dim, true);
}

Matrix FeedForward::Forward(const Matrix &x, const RunContext &ctx, Cache *cache) const {
  Matrix h = w1_.Forward(x);
  Matrix mask = DropoutMask(static_cast<int>(h.rows()), static_cast<int>(h.cols()), dropout_, ctx);
  Matrix act = ApplyMask(Swish(h), mask);
  Matrix y = w2_.Forward(act);
  if (cache) {
    cache->x = x;
    cache->h = std::move(h);
    cache->mask = std::move(mask);
    cache->act = std::move(act);
  }
  return y;
}

Matrix FeedForward::Backward(const Cache &cache, const Matrix &dy) {
  const Matrix dact = ApplyMask(w2_.Backward(cache.act, dy), cache.mask);
  return w1_.Backward(cache.x, SwishBackward(cache.h, dact));
}

void FeedForward::CollectParams(std::vector<Param *> &out) {
  w1_.CollectParams(out);
  w2_.CollectParams(out);
}

ConvModule::ConvModule(const std::string &name, int dim, int kernel, Rng &rng)
    : pw1_(name + ".pointwise_conv1", dim, 2 * dim, true, rng),
      depthwise_(name + ".depthwise_conv", dim, kernel, rng),
      bn_(name + ".norm", dim),
      pw2_(name + ".pointwise_conv2", dim, dim, true, rng) {}

int64_t ConvModule::NumParams(int dim, int kernel) {
  return Linear::NumParams(dim, 2 * dim, true) + DepthwiseConv1d::NumParams(dim, kernel) +
         BatchNorm::NumParams(dim) + Linear::NumParams(dim, dim, true);
}

Matrix ConvModule::Forward(const Matrix &x, const Packing &packing, const RunContext &ctx,
                           Cache *cache) const {
  Matrix h1 = pw1_.Forward(x);
  Matrix g = Glu(h1);
  Matrix d = depthwise_.Forward(g, packing);
  Matrix b = bn_.Forward(d, static_cast<int>(d.rows()), 1, ctx, cache ? &cache->bn : nullptr);
  Matrix act = Swish(b);
  Matrix y = pw2_.Forward(act);
  if (cache) {
    cache->x = x;
    cache->h1 = std::move(h1);
    cache->g = std::move(g);
    cache->d = std::move(b);  // Swish input
    cache->act = std::move(act);
  }
  return y;
}

Matrix ConvModule::Backward(const Cache &cache, const Packing &packing, const Matrix &dy) {
  const Matrix dact = pw2_.Backward(cache.act, dy);
  const Matrix db = SwishBackward(cache.d, dact);
  const Matrix dd = bn_.Backward(cache.bn, db, static_cast<int>(db.rows()), 1);
  const Matrix dg = depthwise_.Backward(cache.g, packing, dd);
  return pw1_.Backward(cache.x, GluBackward(cache.h1, dg));
}

void ConvModule::CollectParams(std::vector<Param *> &out) {
  pw1_.CollectParams(out);
  depthwise_.CollectParams(out);
  bn_.CollectParams(out);
  pw2_.CollectParams(out);
}

void ConvModule::CollectBuffers(std::vector<Buffer *> &out) { bn_.CollectBuffers(out); }

ConformerBlock::ConformerBlock(const std::string &name, int dim, int heads, int ffn, int kernel,
                               double dropout, Rng &rng)
    : dropout_(dropout),
      ln_ff1_(name + ".norm_ff_macaron", dim),
      ln_mha_(name + ".norm_mha", dim),
      ln_conv_(name + ".norm_conv", dim),
      ln_ff2_(name + ".norm_ff", dim),
      ln_out_(name + ".norm_final", dim),
      ff1_(name + ".feed_forward_macaron", dim, ffn, dropout, rng),
      ff2_(name + ".feed_forward", dim, ffn, dropout, rng),
      mha_(name + ".self_attn", dim, heads, dropout, rng),
      conv_(name + ".conv_module", dim, kernel, rng) {}

int64_t ConformerBlock::NumParams(int dim, int heads, int ffn, int kernel) {
  return 5 * LayerNorm::NumParams(dim) + 2 * FeedForward::NumParams(dim, ffn) +
         RelPosSelfAttention::NumParams(dim, heads) + ConvModule::NumParams(dim, kernel);
}

Matrix ConformerBlock::Forward(const Matrix &x_in, const Packing &packing, const RunContext &ctx,
                               Cache *c) const {
  const int rows = static_cast<int>(x_in.rows()), cols = static_cast<int>(x_in.cols());
  Matrix x = x_in;
  Matrix m = DropoutMask(rows, cols, dropout_, ctx);
  x += 0.5 * ApplyMask(ff1_.Forward(ln_ff1_.Forward(x, c ? &c->ln_ff1 : nullptr), ctx,
                                    c ? &c->ff1 : nullptr),
                       m);
  if (c) c->m_ff1 = std::move(m);
  m = DropoutMask(rows, cols, dropout_, ctx);
  x += ApplyMask(mha_.Forward(ln_mha_.Forward(x, c ? &c->ln_mha : nullptr), packing, ctx,
                              c ? &c->mha : nullptr),
                 m);
  if (c) c->m_mha = std::move(m);
  m = DropoutMask(rows, cols, dropout_, ctx);
  x += ApplyMask(conv_.Forward(ln_conv_.Forward(x, c ? &c->ln_conv : nullptr), packing, ctx,
                               c ? &c->conv : nullptr),
                 m);
  if (c) c->m_conv = std::move(m);
  m = DropoutMask(rows, cols, dropout_, ctx);
  x += 0.5 * ApplyMask(ff2_.Forward(ln_ff2_.Forward(x, c ? &c->ln_ff2 : nullptr), ctx,
                                    c ? &c->ff2 : nullptr),
                       m);
  if (c) c->m_ff2 = std::move(m);
  return ln_out_.Forward(x, c ? &c->ln_out : nullptr);
}

Matrix ConformerBlock::Backward(const Cache &c, const Packing &packing, const Matrix &dy) {
  Matrix dx = ln_out_.Backward(c.ln_out, dy);
  dx += ln_ff2_.Backward(c.ln_ff2, ff2_.Backward(c.ff2, 0.5 * ApplyMask(dx, c.m_ff2)));
  dx += ln_conv_.Backward(c.ln_conv, conv_.Backward(c.conv, packing, ApplyMask(dx, c.m_conv)));
  dx += ln_mha_.Backward(c.ln_mha, mha_.Backward(c.mha, packing, ApplyMask(dx, c.m_mha)));
  dx += ln_ff1_.Backward(c.ln_ff1, ff1_.Backward(c.ff1, 0.5 * ApplyMask(dx, c.m_ff1)));
  return dx;
}

void ConformerBlock::CollectParams(std::vector<Param *> &out) {
  ff1_.CollectParams(out);
  ln_ff1_.CollectParams(out);
  mha_.CollectParams(out);
  ln_mha_.CollectParams(out);
  conv_.CollectParams(out);
  ln_conv_.CollectParams(out);
  ff2_.CollectParams(out);
  ln_ff2_.CollectParams(out);
  ln_out_.CollectParams(out);
}

void ConformerBlock::CollectBuffers(std::vector<Buffer *> &out) { conv_.CollectBuffers(out); }

}  // namespace svts::nn

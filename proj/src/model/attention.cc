// src/model/attention.cc

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

#include "svts/model/attention.h"

#include <cmath>

#include "svts/core/error.h"

namespace svts::nn {

Matrix RelativePositionTable(int length, int dim) {
  Matrix table(2 * length - 1, dim);
  for (int m = 0; m < 2 * length - 1; ++m) {
    const double r = length - 1 - m;
    for (int i = 0; i < dim; i += 2) {
      const double freq = std::exp(-std::log(10000.0) * i / dim);
      table(m, i) = std::sin(r * freq);
      if (i + 1 < dim) table(m, i + 1) = std::cos(r * freq);
    }
  }
  return table;
}

RelPosSelfAttention::RelPosSelfAttention(const std::string &name, int dim, int heads,
                                         double dropout, Rng &rng)
    : dim_(dim), heads_(heads), dk_(dim / heads), dropout_(dropout),
      q_(name + ".linear_q", dim, dim, true, rng),
      k_(name + ".linear_k", dim, dim, true, rng),
      v_(name + ".linear_v", dim, dim, true, rng),
      out_(name + ".linear_out", dim, dim, true, rng),
      pos_(name + ".linear_pos", dim, dim, false, rng),
      bias_u_(name + ".pos_bias_u", {heads, dim / heads}, heads, dim / heads),
      bias_v_(name + ".pos_bias_v", {heads, dim / heads}, heads, dim / heads) {
  if (dim % heads != 0) throw ValidationError("attention dim must be divisible by heads");
  const double bound = std::sqrt(6.0 / (heads + dk_));
  FillUniform(bias_u_.value, bound, rng);
  FillUniform(bias_v_.value, bound, rng);
}

int64_t RelPosSelfAttention::NumParams(int dim, int heads) {
  (void)heads;
  return 4 * Linear::NumParams(dim, dim, true) + Linear::NumParams(dim, dim, false) + 2 * int64_t{dim};
}

Matrix RelPosSelfAttention::Forward(const Matrix &x, const Packing &packing,
                                    const RunContext &ctx, Cache *cache) const {
  if (x.rows() != packing.total()) throw ShapeError("attention: input does not match packing");
  Matrix q = q_.Forward(x), k = k_.Forward(x), v = v_.Forward(x);
  Matrix context(x.rows(), dim_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk_));
  if (cache) cache->clips.assign(packing.count(), {});
  int begin = 0;
  for (int c = 0; c < packing.count(); ++c) {
    const int T = packing.lengths[c];
    Matrix pos = RelativePositionTable(T, dim_);
    Matrix pos_proj = pos_.Forward(pos);
    for (int h = 0; h < heads_; ++h) {
      const int col = h * dk_;
      const auto qh = q.block(begin, col, T, dk_);
      const Matrix qu = qh.rowwise() + bias_u_.value.row(h);
      const Matrix qv = qh.rowwise() + bias_v_.value.row(h);
      Matrix scores = qu * k.block(begin, col, T, dk_).transpose();
      const Matrix braw = qv * pos_proj.middleCols(col, dk_).transpose();
      for (int i = 0; i < T; ++i) scores.row(i) += braw.row(i).segment(T - 1 - i, T);
      scores *= scale;
      for (int i = 0; i < T; ++i) {
        const double mx = scores.row(i).maxCoeff();
        scores.row(i) = (scores.row(i).array() - mx).exp();
        scores.row(i) /= scores.row(i).sum();
      }
      Matrix mask = DropoutMask(T, T, dropout_, ctx);
      context.block(begin, col, T, dk_) = ApplyMask(scores, mask) * v.block(begin, col, T, dk_);
      if (cache) cache->clips[c].heads.push_back({std::move(scores), std::move(mask)});
    }
    if (cache) {
      cache->clips[c].pos = std::move(pos);
      cache->clips[c].pos_proj = std::move(pos_proj);
    }
    begin += T;
  }
  Matrix y = out_.Forward(context);
  if (cache) {
    cache->x = x;
    cache->q = std::move(q);
    cache->k = std::move(k);
    cache->v = std::move(v);
    cache->context = std::move(context);
  }
  return y;
}

Matrix RelPosSelfAttention::Backward(const Cache &cache, const Packing &packing,
                                     const Matrix &dy) {
  const Matrix dcontext = out_.Backward(cache.context, dy);
  Matrix dq = Matrix::Zero(cache.q.rows(), dim_);
  Matrix dk = Matrix::Zero(cache.k.rows(), dim_);
  Matrix dv = Matrix::Zero(cache.v.rows(), dim_);
  Matrix du = Matrix::Zero(heads_, dk_), dbv = Matrix::Zero(heads_, dk_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk_));
  int begin = 0;
  for (int c = 0; c < packing.count(); ++c) {
    const int T = packing.lengths[c];
    const ClipCache &cc = cache.clips[c];
    Matrix dpos_proj = Matrix::Zero(2 * T - 1, dim_);
    for (int h = 0; h < heads_; ++h) {
      const int col = h * dk_;
      const HeadCache &hc = cc.heads[h];
      const auto dctx = dcontext.block(begin, col, T, dk_);
      const auto vh = cache.v.block(begin, col, T, dk_);
      const auto kh = cache.k.block(begin, col, T, dk_);
      const auto qh = cache.q.block(begin, col, T, dk_);
      dv.block(begin, col, T, dk_) += ApplyMask(hc.attn, hc.mask).transpose() * dctx;
      const Matrix dattn = ApplyMask(dctx * vh.transpose(), hc.mask);
      Matrix ds(T, T);
      for (int i = 0; i < T; ++i) {
        const double dot = dattn.row(i).dot(hc.attn.row(i));
        ds.row(i) = hc.attn.row(i).array() * (dattn.row(i).array() - dot) * scale;
      }
      Matrix dbraw = Matrix::Zero(T, 2 * T - 1);
      for (int i = 0; i < T; ++i) dbraw.row(i).segment(T - 1 - i, T) = ds.row(i);
      const Matrix qu = qh.rowwise() + bias_u_.value.row(h);
      const Matrix qv = qh.rowwise() + bias_v_.value.row(h);
      const Matrix dq_a = ds * kh;
      const Matrix dq_b = dbraw * cc.pos_proj.middleCols(col, dk_);
      dq.block(begin, col, T, dk_) += dq_a + dq_b;
      dk.block(begin, col, T, dk_) += ds.transpose() * qu;
      du.row(h) += dq_a.colwise().sum();
      dbv.row(h) += dq_b.colwise().sum();
      dpos_proj.middleCols(col, dk_) += dbraw.transpose() * qv;
    }
    pos_.Backward(cc.pos, dpos_proj, false);
    begin += T;
  }
  AccumulateGrad(bias_u_, du);
  AccumulateGrad(bias_v_, dbv);
  Matrix dx = q_.Backward(cache.x, dq);
  dx += k_.Backward(cache.x, dk);
  dx += v_.Backward(cache.x, dv);
  return dx;
}

void RelPosSelfAttention::CollectParams(std::vector<Param *> &out) {
  q_.CollectParams(out);
  k_.CollectParams(out);
  v_.CollectParams(out);
  out_.CollectParams(out);
  pos_.CollectParams(out);
  out.push_back(&bias_u_);
  out.push_back(&bias_v_);
}

}  // namespace svts::nn

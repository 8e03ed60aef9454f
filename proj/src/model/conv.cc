// src/model/conv.cc

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

#include "svts/model/conv.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svts/core/error.h"
#include "svts/model/layers.h"

namespace svts::nn {

Conv2d::Conv2d(const std::string &name, int in, int out, int kernel, int stride, int pad,
               bool bias, Rng &rng)
    : in_(in), out_(out), kernel_(kernel), stride_(stride), pad_(pad), has_bias_(bias),
      weight_(name + ".weight", {out, in, kernel, kernel}, out, in * kernel * kernel),
      bias_(name + ".bias", bias ? std::vector<int>{out} : std::vector<int>{}, bias ? 1 : 0,
            bias ? out : 0) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in * kernel * kernel));
  FillUniform(weight_.value, bound, rng);
  if (has_bias_) FillUniform(bias_.value, bound, rng);
}

namespace {

// Upper bound on the doubles held by one im2col block.
constexpr int64_t kChunkBudget = int64_t{1} << 21;

// Per-thread work buffers that only grow, so the large temporaries of the
// convolutions do not hit fresh (page-faulting) memory on every call.
Eigen::Map<Matrix> Scratch(int slot, int64_t rows, int64_t cols) {
  thread_local std::vector<double> pool[4];
  std::vector<double> &v = pool[slot];
  if (v.size() < static_cast<size_t>(rows * cols)) v.resize(static_cast<size_t>(rows * cols));
  return Eigen::Map<Matrix>(v.data(), rows, cols);
}

// Output columns [lo, hi) whose input column ox * stride - pad + k is inside
// [0, size).
inline void ValidRange(int out, int size, int stride, int pad, int k, int *lo, int *hi) {
  const int a = pad - k;
  *lo = a > 0 ? (a + stride - 1) / stride : 0;
  const int b = size - 1 + pad - k;
  *hi = b < 0 ? 0 : std::min(out, b / stride + 1);
  if (*lo > *hi) *lo = *hi;
}

int ChunkImages(int64_t per_image) {
  return static_cast<int>(std::max<int64_t>(1, kChunkBudget / std::max<int64_t>(1, per_image)));
}

}  // namespace

// Columns of images [i0, i1) side by side: (in * k * k) x ((i1 - i0) * ho * wo).
Eigen::Map<Matrix> Conv2d::Im2Col(const FeatureMap &x, int i0, int i1) const {
  const int ho = OutSize(x.h), wo = OutSize(x.w), area = ho * wo;
  const int64_t width = static_cast<int64_t>(i1 - i0) * area;
  Eigen::Map<Matrix> cols = Scratch(0, in_ * kernel_ * kernel_, width);
  cols.setZero();
  for (int i = i0; i < i1; ++i) {
    const double *src = x.data.data() + static_cast<size_t>(i) * x.c * x.h * x.w;
    for (int c = 0; c < in_; ++c)
      for (int ky = 0; ky < kernel_; ++ky)
        for (int kx = 0; kx < kernel_; ++kx) {
          double *row = cols.data() + ((c * kernel_ + ky) * kernel_ + kx) * width +
                        static_cast<int64_t>(i - i0) * area;
          int lo, hi;
          ValidRange(wo, x.w, stride_, pad_, kx, &lo, &hi);
          for (int oy = 0; oy < ho; ++oy) {
            const int iy = oy * stride_ - pad_ + ky;
            if (iy < 0 || iy >= x.h) continue;
            const double *srow = src + (static_cast<size_t>(c) * x.h + iy) * x.w - pad_ + kx;
            double *drow = row + oy * wo;
            for (int ox = lo; ox < hi; ++ox) drow[ox] = srow[ox * stride_];
          }
        }
  }
  return cols;
}

void Conv2d::Col2ImAdd(const Eigen::Map<Matrix> &cols, FeatureMap &dx, int i0, int i1) const {
  const int ho = OutSize(dx.h), wo = OutSize(dx.w), area = ho * wo;
  const int64_t width = static_cast<int64_t>(i1 - i0) * area;
  for (int i = i0; i < i1; ++i) {
    double *dst = dx.data.data() + static_cast<size_t>(i) * dx.c * dx.h * dx.w;
    for (int c = 0; c < in_; ++c)
      for (int ky = 0; ky < kernel_; ++ky)
        for (int kx = 0; kx < kernel_; ++kx) {
          const double *row = cols.data() + ((c * kernel_ + ky) * kernel_ + kx) * width +
                              static_cast<int64_t>(i - i0) * area;
          int lo, hi;
          ValidRange(wo, dx.w, stride_, pad_, kx, &lo, &hi);
          for (int oy = 0; oy < ho; ++oy) {
            const int iy = oy * stride_ - pad_ + ky;
            if (iy < 0 || iy >= dx.h) continue;
            double *drow = dst + (static_cast<size_t>(c) * dx.h + iy) * dx.w - pad_ + kx;
            const double *srow = row + oy * wo;
            for (int ox = lo; ox < hi; ++ox) drow[ox * stride_] += srow[ox];
          }
        }
  }
}

FeatureMap Conv2d::Forward(const FeatureMap &x) const {
  if (x.c != in_) throw ShapeError(weight_.name + ": channel mismatch");
  FeatureMap y(x.n, out_, OutSize(x.h), OutSize(x.w));
  const int area = y.h * y.w;
  const int chunk = ChunkImages(static_cast<int64_t>(in_) * kernel_ * kernel_ * area);
  for (int i0 = 0; i0 < x.n; i0 += chunk) {
    const int i1 = std::min(x.n, i0 + chunk);
    const Eigen::Map<Matrix> cols = Im2Col(x, i0, i1);
    Eigen::Map<Matrix> out = Scratch(1, out_, cols.cols());
    out.noalias() = weight_.value * cols;
    for (int i = i0; i < i1; ++i) {
      auto img = y.image(i);
      img = out.middleCols(static_cast<int64_t>(i - i0) * area, area);
      if (has_bias_) img.colwise() += bias_.value.row(0).transpose();
    }
  }
  return y;
}

FeatureMap Conv2d::Backward(const FeatureMap &x, const FeatureMap &dy) {
  FeatureMap dx(x.n, x.c, x.h, x.w);
  Matrix dw = Matrix::Zero(weight_.value.rows(), weight_.value.cols());
  Matrix db = Matrix::Zero(1, out_);
  const int area = dy.h * dy.w;
  const int chunk = ChunkImages(static_cast<int64_t>(in_) * kernel_ * kernel_ * area);
  for (int i0 = 0; i0 < x.n; i0 += chunk) {
    const int i1 = std::min(x.n, i0 + chunk);
    Eigen::Map<Matrix> g = Scratch(1, out_, static_cast<int64_t>(i1 - i0) * area);
    for (int i = i0; i < i1; ++i) g.middleCols(static_cast<int64_t>(i - i0) * area, area) = dy.image(i);
    dw.noalias() += g * Im2Col(x, i0, i1).transpose();
    if (has_bias_) db += g.rowwise().sum().transpose();
    Eigen::Map<Matrix> dcols = Scratch(2, weight_.value.cols(), g.cols());
    dcols.noalias() = weight_.value.transpose() * g;
    Col2ImAdd(dcols, dx, i0, i1);
  }
  AccumulateGrad(weight_, dw);
  if (has_bias_) AccumulateGrad(bias_, db);
  return dx;
}

void Conv2d::CollectParams(std::vector<Param *> &out) {
  out.push_back(&weight_);
  if (has_bias_) out.push_back(&bias_);
}

FeatureMap MaxPool2d::Forward(const FeatureMap &x, Cache *cache) {
  const int ho = (x.h + 2 - 3) / 2 + 1, wo = (x.w + 2 - 3) / 2 + 1;
  FeatureMap y(x.n, x.c, ho, wo);
  std::vector<int> arg(static_cast<size_t>(y.data.size()));
  const int planes = x.n * x.c;
  for (int p = 0; p < planes; ++p) {
    const double *src = x.data.data() + static_cast<size_t>(p) * x.h * x.w;
    double *dst = y.data.data() + static_cast<size_t>(p) * ho * wo;
    int *a = arg.data() + static_cast<size_t>(p) * ho * wo;
    for (int oy = 0; oy < ho; ++oy)
      for (int ox = 0; ox < wo; ++ox) {
        double best = -std::numeric_limits<double>::infinity();
        int best_idx = -1;
        for (int ky = 0; ky < 3; ++ky) {
          const int iy = oy * 2 - 1 + ky;
          if (iy < 0 || iy >= x.h) continue;
          for (int kx = 0; kx < 3; ++kx) {
            const int ix = ox * 2 - 1 + kx;
            if (ix < 0 || ix >= x.w) continue;
            const double v = src[iy * x.w + ix];
            if (v > best) {
              best = v;
              best_idx = iy * x.w + ix;
            }
          }
        }
        dst[oy * wo + ox] = best;
        a[oy * wo + ox] = best_idx;
      }
  }
  if (cache) {
    cache->in_h = x.h;
    cache->in_w = x.w;
    cache->argmax = std::move(arg);
  }
  return y;
}

FeatureMap MaxPool2d::Backward(const Cache &cache, const FeatureMap &dy) {
  FeatureMap dx(dy.n, dy.c, cache.in_h, cache.in_w);
  const int planes = dy.n * dy.c, out_area = dy.h * dy.w, in_area = cache.in_h * cache.in_w;
  for (int p = 0; p < planes; ++p) {
    const double *g = dy.data.data() + static_cast<size_t>(p) * out_area;
    const int *a = cache.argmax.data() + static_cast<size_t>(p) * out_area;
    double *d = dx.data.data() + static_cast<size_t>(p) * in_area;
    for (int k = 0; k < out_area; ++k) d[a[k]] += g[k];
  }
  return dx;
}

Conv3dStem::Conv3dStem(const std::string &name, int out, Rng &rng)
    : out_(out), weight_(name + ".weight", {out, 1, kKt, kKs, kKs}, out, kKt * kKs * kKs) {
  FillUniform(weight_.value, 1.0 / std::sqrt(static_cast<double>(kKt * kKs * kKs)), rng);
}

// Spatial columns of frames [s0, s1): (7 * 7) x ((s1 - s0) * so * so).
Eigen::Map<Matrix> Conv3dStem::Columns(const Matrix &frames, int side, int s0, int s1) const {
  const int so = (side + 2 * kPadS - kKs) / kStride + 1, area = so * so;
  const int64_t width = static_cast<int64_t>(s1 - s0) * area;
  Eigen::Map<Matrix> cols = Scratch(0, kKs * kKs, width);
  cols.setZero();
  for (int s = s0; s < s1; ++s) {
    const double *src = frames.row(s).data();
    for (int ky = 0; ky < kKs; ++ky)
      for (int kx = 0; kx < kKs; ++kx) {
        double *row = cols.data() + (ky * kKs + kx) * width + static_cast<int64_t>(s - s0) * area;
        int lo, hi;
        ValidRange(so, side, kStride, kPadS, kx, &lo, &hi);
        for (int oy = 0; oy < so; ++oy) {
          const int iy = oy * kStride - kPadS + ky;
          if (iy < 0 || iy >= side) continue;
          const double *srow = src + iy * side - kPadS + kx;
          double *drow = row + oy * so;
          for (int ox = lo; ox < hi; ++ox) drow[ox] = srow[ox * kStride];
        }
      }
  }
  return cols;
}

// The kernel as (kKt * out) x 49: row kt * out + o holds tap kt of channel o.
Matrix Conv3dStem::StackedKernel() const {
  Matrix k(kKt * out_, kKs * kKs);
  for (int kt = 0; kt < kKt; ++kt)
    k.middleRows(kt * out_, out_) = weight_.value.middleCols(kt * kKs * kKs, kKs * kKs);
  return k;
}

int Conv3dStem::ChunkFrames(int side) const {
  const int so = (side + 2 * kPadS - kKs) / kStride + 1;
  const int64_t per_frame = static_cast<int64_t>(kKt * out_ + kKs * kKs) * so * so;
  return static_cast<int>(std::max<int64_t>(1, kChunkBudget / per_frame));
}

FeatureMap Conv3dStem::Forward(const Matrix &frames, int side, const Packing &packing) const {
  if (frames.cols() != static_cast<int64_t>(side) * side || frames.rows() != packing.total())
    throw ShapeError("visual stem: frame matrix does not match packing");
  const int so = (side + 2 * kPadS - kKs) / kStride + 1, area = so * so;
  FeatureMap y(packing.total(), out_, so, so);
  const Matrix kernel = StackedKernel();
  const int chunk = ChunkFrames(side);
  int begin = 0;
  for (int len : packing.lengths) {
    for (int t0 = 0; t0 < len; t0 += chunk) {
      const int t1 = std::min(len, t0 + chunk);
      const int s0 = std::max(0, t0 - kPadT), s1 = std::min(len, t1 + kPadT);
      // taps(kt * out + o, s) = response of tap kt at source frame s.
      const Eigen::Map<Matrix> cols = Columns(frames, side, begin + s0, begin + s1);
      Eigen::Map<Matrix> taps = Scratch(1, kernel.rows(), cols.cols());
      taps.noalias() = kernel * cols;
      for (int t = t0; t < t1; ++t) {
        auto img = y.image(begin + t);
        for (int kt = 0; kt < kKt; ++kt) {
          const int s = t - kPadT + kt;
          if (s < 0 || s >= len) continue;
          img += taps.block(kt * out_, static_cast<int64_t>(s - s0) * area, out_, area);
        }
      }
    }
    begin += len;
  }
  return y;
}

void Conv3dStem::Backward(const Matrix &frames, int side, const Packing &packing,
                          const FeatureMap &dy) {
  const int so = (side + 2 * kPadS - kKs) / kStride + 1, area = so * so;
  Matrix dk = Matrix::Zero(kKt * out_, kKs * kKs);
  const int chunk = ChunkFrames(side);
  int begin = 0;
  for (int len : packing.lengths) {
    for (int s0 = 0; s0 < len; s0 += chunk) {
      const int s1 = std::min(len, s0 + chunk);
      // Gradient reaching each source frame through each tap.
      Eigen::Map<Matrix> g = Scratch(1, kKt * out_, static_cast<int64_t>(s1 - s0) * area);
      g.setZero();
      for (int s = s0; s < s1; ++s)
        for (int kt = 0; kt < kKt; ++kt) {
          const int t = s + kPadT - kt;
          if (t < 0 || t >= len) continue;
          g.block(kt * out_, static_cast<int64_t>(s - s0) * area, out_, area) = dy.image(begin + t);
        }
      dk.noalias() += g * Columns(frames, side, begin + s0, begin + s1).transpose();
    }
    begin += len;
  }
  Matrix dw(out_, kKt * kKs * kKs);
  for (int kt = 0; kt < kKt; ++kt)
    dw.middleCols(kt * kKs * kKs, kKs * kKs) = dk.middleRows(kt * out_, out_);
  AccumulateGrad(weight_, dw);
}

void Conv3dStem::CollectParams(std::vector<Param *> &out) { out.push_back(&weight_); }

DepthwiseConv1d::DepthwiseConv1d(const std::string &name, int channels, int kernel, Rng &rng)
    : channels_(channels), kernel_(kernel),
      weight_(name + ".weight", {channels, 1, kernel}, channels, kernel),
      bias_(name + ".bias", {channels}, 1, channels) {
  if (kernel % 2 == 0) throw ValidationError("depthwise kernel must be odd");
  const double bound = 1.0 / std::sqrt(static_cast<double>(kernel));
  FillUniform(weight_.value, bound, rng);
  FillUniform(bias_.value, bound, rng);
}

Matrix DepthwiseConv1d::Forward(const Matrix &x, const Packing &packing) const {
  if (x.cols() != channels_ || x.rows() != packing.total())
    throw ShapeError(weight_.name + ": input does not match packing");
  const int half = kernel_ / 2;
  Matrix y(x.rows(), x.cols());
  y.rowwise() = bias_.value.row(0);
  int begin = 0;
  for (int len : packing.lengths) {
    for (int t = 0; t < len; ++t)
      for (int j = 0; j < kernel_; ++j) {
        const int s = t + j - half;
        if (s < 0 || s >= len) continue;
        y.row(begin + t).array() += weight_.value.col(j).transpose().array() * x.row(begin + s).array();
      }
    begin += len;
  }
  return y;
}

Matrix DepthwiseConv1d::Backward(const Matrix &x, const Packing &packing, const Matrix &dy) {
  const int half = kernel_ / 2;
  Matrix dx = Matrix::Zero(x.rows(), x.cols());
  Matrix dw = Matrix::Zero(channels_, kernel_);
  int begin = 0;
  for (int len : packing.lengths) {
    for (int t = 0; t < len; ++t)
      for (int j = 0; j < kernel_; ++j) {
        const int s = t + j - half;
        if (s < 0 || s >= len) continue;
        dw.col(j) += (dy.row(begin + t).array() * x.row(begin + s).array()).matrix().transpose();
        dx.row(begin + s).array() += weight_.value.col(j).transpose().array() * dy.row(begin + t).array();
      }
    begin += len;
  }
  AccumulateGrad(weight_, dw);
  AccumulateGrad(bias_, dy.colwise().sum());
  return dx;
}

void DepthwiseConv1d::CollectParams(std::vector<Param *> &out) {
  out.push_back(&weight_);
  out.push_back(&bias_);
}

}  // namespace svts::nn

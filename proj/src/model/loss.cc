// src/model/loss.cc

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

#include "svts/model/loss.h"

#include <cmath>

#include "svts/core/error.h"

namespace svts::nn {

namespace {

void CheckShapes(const Matrix &pred, const Matrix &target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw ShapeError("loss operands differ in shape: " + std::to_string(pred.rows()) + "x" +
                     std::to_string(pred.cols()) + " vs " + std::to_string(target.rows()) + "x" +
                     std::to_string(target.cols()));
  if (pred.size() == 0) throw ShapeError("loss operands are empty");
}

Matrix ToMagnitude(const Matrix &m, bool on_log_mel) {
  if (on_log_mel) return m;
  return m.array().exp();
}

// SC of one clip; adds d(scale * SC)/dpred into grad when given.
double ClipSc(const Eigen::Ref<const Matrix> &pred, const Eigen::Ref<const Matrix> &target,
              bool on_log_mel, double scale, Eigen::Ref<Matrix> *grad) {
  const Matrix mp = ToMagnitude(pred, on_log_mel);
  const Matrix mt = ToMagnitude(target, on_log_mel);
  const double denom = mt.norm();
  if (!(denom > 0.0)) throw ValidationError("spectral convergence target has zero norm");
  const Matrix diff = mt - mp;
  const double num = diff.norm();
  if (grad && num > 0.0) {
    Matrix g = -diff / (num * denom);
    if (!on_log_mel) g = g.cwiseProduct(mp);
    *grad += scale * g;
  }
  return num / denom;
}

}  // namespace

double L1Loss(const Matrix &pred, const Matrix &target) {
  CheckShapes(pred, target);
  return (pred - target).cwiseAbs().mean();
}

double L1Loss(const MelSpectrogram &pred, const MelSpectrogram &target) {
  return L1Loss(pred.values(), target.values());
}

double SpectralConvergenceLoss(const Matrix &pred, const Matrix &target, bool on_log_mel) {
  CheckShapes(pred, target);
  return ClipSc(pred, target, on_log_mel, 1.0, nullptr);
}

double SpectralConvergenceLoss(const MelSpectrogram &pred, const MelSpectrogram &target,
                               bool on_log_mel) {
  return SpectralConvergenceLoss(pred.values(), target.values(), on_log_mel);
}

double CombinedLoss(const MelSpectrogram &pred, const MelSpectrogram &target, LossMode mode,
                    bool on_log_mel) {
  switch (mode) {
    case LossMode::kL1Only:
      return L1Loss(pred, target);
    case LossMode::kScOnly:
      return SpectralConvergenceLoss(pred, target, on_log_mel);
    case LossMode::kCombined:
      return L1Loss(pred, target) + SpectralConvergenceLoss(pred, target, on_log_mel);
  }
  throw ValidationError("unknown loss mode");
}

LossValue BatchLoss(const Matrix &pred, const Matrix &target, const Packing &packing,
                    LossMode mode, bool on_log_mel, Matrix *grad) {
  CheckShapes(pred, target);
  if (packing.total() != pred.rows()) throw ShapeError("loss packing does not match rows");
  const bool use_l1 = mode != LossMode::kScOnly;
  const bool use_sc = mode != LossMode::kL1Only;
  LossValue v;
  if (grad) *grad = Matrix::Zero(pred.rows(), pred.cols());
  if (use_l1) {
    const Matrix diff = pred - target;
    v.l1 = diff.cwiseAbs().mean();
    if (grad) *grad += diff.unaryExpr([](double d) { return d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0); }) /
                       static_cast<double>(diff.size());
  }
  if (use_sc) {
    const double scale = 1.0 / packing.count();
    int begin = 0;
    for (int len : packing.lengths) {
      if (grad) {
        Eigen::Ref<Matrix> block = grad->middleRows(begin, len);
        v.sc += scale * ClipSc(pred.middleRows(begin, len), target.middleRows(begin, len),
                               on_log_mel, scale, &block);
      } else {
        v.sc += scale * ClipSc(pred.middleRows(begin, len), target.middleRows(begin, len),
                               on_log_mel, scale, nullptr);
      }
      begin += len;
    }
  }
  v.total = (use_l1 ? v.l1 : 0.0) + (use_sc ? v.sc : 0.0);
  return v;
}

}  // namespace svts::nn

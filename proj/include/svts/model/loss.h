// include/svts/model/loss.h

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

#ifndef SVTS_MODEL_LOSS_H_
#define SVTS_MODEL_LOSS_H_

#include "svts/core/config.h"
#include "svts/core/types.h"
#include "svts/model/tensor.h"

namespace svts::nn {

// Mean absolute difference over all cells.
double L1Loss(const Matrix &pred, const Matrix &target);
double L1Loss(const MelSpectrogram &pred, const MelSpectrogram &target);

// ||M(target) - M(pred)||_F / ||M(target)||_F with M = exp (log-mel to
// linear mel magnitude), or M = identity when on_log_mel is set.
double SpectralConvergenceLoss(const Matrix &pred, const Matrix &target, bool on_log_mel = false);
double SpectralConvergenceLoss(const MelSpectrogram &pred, const MelSpectrogram &target,
                               bool on_log_mel = false);

// L1 + SC with unit weights, or either term alone.
double CombinedLoss(const MelSpectrogram &pred, const MelSpectrogram &target, LossMode mode,
                    bool on_log_mel = false);

struct LossValue {
  double l1 = 0.0;
  double sc = 0.0;
  double total = 0.0;
};

// Loss over packed clips (rows grouped by `packing`).  L1 averages over all
// cells of the batch, SC averages the per-clip ratios.  Fills dL/dpred when
// grad is non-null.
LossValue BatchLoss(const Matrix &pred, const Matrix &target, const Packing &packing,
                    LossMode mode, bool on_log_mel, Matrix *grad);

}  // namespace svts::nn

#endif  // SVTS_MODEL_LOSS_H_

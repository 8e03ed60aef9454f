// include/svts/model/checkpoint.h

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

#ifndef SVTS_MODEL_CHECKPOINT_H_
#define SVTS_MODEL_CHECKPOINT_H_

#include <limits>
#include <map>
#include <memory>
#include <string>

#include "svts/core/config.h"
#include "svts/model/predictor.h"

namespace svts::nn {

// Everything needed to resume training or run inference.
//
// File layout:
//   "SVTSCKPT 1\n"
//   u64 header length, then a JSON header with the model and training
//   configs, epoch, step, validation loss, rng state and a tensor index
//   (name, rows, cols, byte offset into the blob section)
//   the blob section: every tensor as row-major little-endian binary64.
//
// Tensor names are parameter and buffer names; optimizer moments use the
// prefixes "adam.m." and "adam.v.".
struct CheckpointState {
  ModelConfig model;
  KeyValues train;
  int epoch = 0;
  int64_t step = 0;
  double val_loss = std::numeric_limits<double>::quiet_NaN();
  std::string rng_state;
  std::map<std::string, Matrix> tensors;
};

void SaveCheckpoint(const std::string &path, const CheckpointState &state);
CheckpointState LoadCheckpoint(const std::string &path);

// Copies parameters and buffers into / out of the tensor map.  Restore
// checks that every tensor is present with the right shape.
void CaptureModel(Predictor &model, CheckpointState &state);
void RestoreModel(const CheckpointState &state, Predictor &model);

// Builds a predictor from the checkpoint's config and restores its weights.
std::unique_ptr<Predictor> LoadPredictor(const std::string &path);

}  // namespace svts::nn

#endif  // SVTS_MODEL_CHECKPOINT_H_

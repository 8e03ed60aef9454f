// include/svts/core/config.h

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

#ifndef SVTS_CORE_CONFIG_H_
#define SVTS_CORE_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>

namespace svts {

using KeyValues = std::map<std::string, std::string>;

// Architecture of the spectrogram predictor.  The three published sizes are
// available through Preset(); Tiny() is a scaled-down variant used for
// numerical checks and desk-scale training.
struct ModelConfig {
  std::string name = "S";
  int num_blocks = 6;
  int attention_dim = 256;
  int attention_heads = 4;
  int conv_kernel = 31;
  int ffn_dim = 2048;
  int projection_dim = 320;
  int mel_bands = 80;
  int reshape_factor = 4;
  int speaker_dim = 256;
  // Channel count of the 3D stem and first ResNet stage; the trunk ends at
  // 8 x visual_width features (512 for the standard ResNet-18).
  int visual_width = 64;
  double dropout = 0.1;

  static ModelConfig Preset(const std::string &name);  // "S", "M" or "L"
  static ModelConfig Tiny();

  int visual_features() const { return 8 * visual_width; }
  bool IsPublishedSize() const;
  // Throws ValidationError on inconsistent fields.
  void Validate() const;

  KeyValues ToKeyValues() const;
  static ModelConfig FromKeyValues(const KeyValues &kv);
};

enum class LossMode { kL1Only, kScOnly, kCombined };

std::string LossModeName(LossMode mode);
LossMode ParseLossMode(const std::string &name);

struct TrainConfig {
  double peak_lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double weight_decay = 0.01;
  double adam_eps = 1e-8;
  double warmup_fraction = 0.1;
  int epochs = 1;
  int batch_size = 8;
  LossMode loss_mode = LossMode::kCombined;
  double max_duration_s = 24.0;
  // Global-norm gradient clipping; 0 disables it.
  double grad_clip_norm = 0.0;
  bool augment = true;
  bool time_mask = false;
  // Spectral convergence on log-mel values instead of linear magnitudes.
  bool sc_on_log_mel = false;
  // Stops after this many optimizer steps when positive.
  int64_t max_steps = 0;
  // Recorded for reproducibility; loading runs on the calling thread.
  int num_workers = 0;
  uint64_t seed = 0;

  void Validate() const;
  KeyValues ToKeyValues() const;
  static TrainConfig FromKeyValues(const KeyValues &kv);
};

// Per-corpus training recipes: grid-seen, grid-unseen, lrw, lrs3-seen,
// lrs3-unseen, lrs3-vox2.
struct TrainPreset {
  std::string name;
  std::string model;
  double peak_lr;
  int epochs;
  bool time_mask;
};

TrainPreset LookupTrainPreset(const std::string &name);

// Plain "key=value" text, one pair per line, sorted by key.
void WriteKeyValues(const std::string &path, const KeyValues &kv);
KeyValues ReadKeyValues(const std::string &path);

}  // namespace svts

#endif  // SVTS_CORE_CONFIG_H_

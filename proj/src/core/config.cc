// src/core/config.cc

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

#include "svts/core/config.h"

#include <fstream>
#include <sstream>

#include "svts/core/error.h"

namespace svts {

namespace {

int GetInt(const KeyValues &kv, const std::string &key, int fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    size_t pos = 0;
    int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception &) {
    throw ParseError("bad integer for '" + key + "': " + it->second);
  }
}

int64_t GetInt64(const KeyValues &kv, const std::string &key, int64_t fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (const std::exception &) {
    throw ParseError("bad integer for '" + key + "': " + it->second);
  }
}

double GetDouble(const KeyValues &kv, const std::string &key, double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception &) {
    throw ParseError("bad number for '" + key + "': " + it->second);
  }
}

bool GetBool(const KeyValues &kv, const std::string &key, bool fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ParseError("bad boolean for '" + key + "': " + it->second);
}

std::string Num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ModelConfig ModelConfig::Preset(const std::string &name) {
  ModelConfig c;
  c.name = name;
  if (name == "S") {
    c.num_blocks = 6;
    c.attention_dim = 256;
    c.attention_heads = 4;
  } else if (name == "M") {
    c.num_blocks = 12;
    c.attention_dim = 256;
    c.attention_heads = 4;
  } else if (name == "L") {
    c.num_blocks = 12;
    c.attention_dim = 512;
    c.attention_heads = 8;
  } else {
    throw ValidationError("unknown model size '" + name + "' (expected S, M or L)");
  }
  return c;
}

ModelConfig ModelConfig::Tiny() {
  ModelConfig c;
  c.name = "tiny";
  c.num_blocks = 2;
  c.attention_dim = 32;
  c.attention_heads = 2;
  c.ffn_dim = 64;
  c.visual_width = 8;
  c.dropout = 0.0;
  return c;
}

bool ModelConfig::IsPublishedSize() const {
  if (conv_kernel != 31 || ffn_dim != 2048 || visual_width != 64) return false;
  return (num_blocks == 6 && attention_dim == 256 && attention_heads == 4) ||
         (num_blocks == 12 && attention_dim == 256 && attention_heads == 4) ||
         (num_blocks == 12 && attention_dim == 512 && attention_heads == 8);
}

void ModelConfig::Validate() const {
  if (num_blocks < 1) throw ValidationError("ModelConfig: num_blocks < 1");
  if (attention_dim < 1 || attention_heads < 1 ||
      attention_dim % attention_heads != 0)
    throw ValidationError("ModelConfig: attention_dim must divide by heads");
  if (conv_kernel < 1 || conv_kernel % 2 == 0)
    throw ValidationError("ModelConfig: conv_kernel must be odd");
  if (ffn_dim < 1) throw ValidationError("ModelConfig: ffn_dim < 1");
  if (projection_dim != reshape_factor * mel_bands)
    throw ValidationError("ModelConfig: projection_dim != reshape_factor * mel_bands");
  if (mel_bands != 80 || reshape_factor != 4)
    throw ValidationError("ModelConfig: output must be 4 x 80 per video frame");
  if (speaker_dim < 1) throw ValidationError("ModelConfig: speaker_dim < 1");
  if (visual_width < 1) throw ValidationError("ModelConfig: visual_width < 1");
  if (dropout < 0.0 || dropout >= 1.0)
    throw ValidationError("ModelConfig: dropout outside [0, 1)");
}

KeyValues ModelConfig::ToKeyValues() const {
  return {{"model.name", name},
          {"model.num_blocks", std::to_string(num_blocks)},
          {"model.attention_dim", std::to_string(attention_dim)},
          {"model.attention_heads", std::to_string(attention_heads)},
          {"model.conv_kernel", std::to_string(conv_kernel)},
          {"model.ffn_dim", std::to_string(ffn_dim)},
          {"model.projection_dim", std::to_string(projection_dim)},
          {"model.mel_bands", std::to_string(mel_bands)},
          {"model.reshape_factor", std::to_string(reshape_factor)},
          {"model.speaker_dim", std::to_string(speaker_dim)},
          {"model.visual_width", std::to_string(visual_width)},
          {"model.dropout", Num(dropout)}};
}

ModelConfig ModelConfig::FromKeyValues(const KeyValues &kv) {
  ModelConfig c;
  auto name = kv.find("model.name");
  if (name != kv.end()) c.name = name->second;
  c.num_blocks = GetInt(kv, "model.num_blocks", c.num_blocks);
  c.attention_dim = GetInt(kv, "model.attention_dim", c.attention_dim);
  c.attention_heads = GetInt(kv, "model.attention_heads", c.attention_heads);
  c.conv_kernel = GetInt(kv, "model.conv_kernel", c.conv_kernel);
  c.ffn_dim = GetInt(kv, "model.ffn_dim", c.ffn_dim);
  c.projection_dim = GetInt(kv, "model.projection_dim", c.projection_dim);
  c.mel_bands = GetInt(kv, "model.mel_bands", c.mel_bands);
  c.reshape_factor = GetInt(kv, "model.reshape_factor", c.reshape_factor);
  c.speaker_dim = GetInt(kv, "model.speaker_dim", c.speaker_dim);
  c.visual_width = GetInt(kv, "model.visual_width", c.visual_width);
  c.dropout = GetDouble(kv, "model.dropout", c.dropout);
  c.Validate();
  return c;
}

std::string LossModeName(LossMode mode) {
  switch (mode) {
    case LossMode::kL1Only: return "l1_only";
    case LossMode::kScOnly: return "sc_only";
    case LossMode::kCombined: return "combined";
  }
  return "combined";
}

LossMode ParseLossMode(const std::string &name) {
  if (name == "l1_only") return LossMode::kL1Only;
  if (name == "sc_only") return LossMode::kScOnly;
  if (name == "combined") return LossMode::kCombined;
  throw ValidationError("unknown loss mode '" + name +
                        "' (expected l1_only, sc_only or combined)");
}

void TrainConfig::Validate() const {
  if (!(peak_lr > 0)) throw ValidationError("TrainConfig: peak_lr must be > 0");
  if (!(warmup_fraction > 0 && warmup_fraction < 1))
    throw ValidationError("TrainConfig: warmup_fraction must be in (0, 1)");
  if (epochs < 1) throw ValidationError("TrainConfig: epochs < 1");
  if (batch_size < 1) throw ValidationError("TrainConfig: batch_size < 1");
  if (!(max_duration_s > 0))
    throw ValidationError("TrainConfig: max_duration_s must be > 0");
  if (grad_clip_norm < 0) throw ValidationError("TrainConfig: grad_clip_norm < 0");
  if (num_workers < 0) throw ValidationError("TrainConfig: num_workers < 0");
}

KeyValues TrainConfig::ToKeyValues() const {
  return {{"train.peak_lr", Num(peak_lr)},
          {"train.beta1", Num(beta1)},
          {"train.beta2", Num(beta2)},
          {"train.weight_decay", Num(weight_decay)},
          {"train.adam_eps", Num(adam_eps)},
          {"train.warmup_fraction", Num(warmup_fraction)},
          {"train.epochs", std::to_string(epochs)},
          {"train.batch_size", std::to_string(batch_size)},
          {"train.loss_mode", LossModeName(loss_mode)},
          {"train.max_duration_s", Num(max_duration_s)},
          {"train.grad_clip_norm", Num(grad_clip_norm)},
          {"train.augment", augment ? "true" : "false"},
          {"train.time_mask", time_mask ? "true" : "false"},
          {"train.sc_on_log_mel", sc_on_log_mel ? "true" : "false"},
          {"train.max_steps", std::to_string(max_steps)},
          {"train.num_workers", std::to_string(num_workers)},
          {"train.seed", std::to_string(seed)}};
}

TrainConfig TrainConfig::FromKeyValues(const KeyValues &kv) {
  TrainConfig c;
  c.peak_lr = GetDouble(kv, "train.peak_lr", c.peak_lr);
  c.beta1 = GetDouble(kv, "train.beta1", c.beta1);
  c.beta2 = GetDouble(kv, "train.beta2", c.beta2);
  c.weight_decay = GetDouble(kv, "train.weight_decay", c.weight_decay);
  c.adam_eps = GetDouble(kv, "train.adam_eps", c.adam_eps);
  c.warmup_fraction = GetDouble(kv, "train.warmup_fraction", c.warmup_fraction);
  c.epochs = GetInt(kv, "train.epochs", c.epochs);
  c.batch_size = GetInt(kv, "train.batch_size", c.batch_size);
  auto mode = kv.find("train.loss_mode");
  if (mode != kv.end()) c.loss_mode = ParseLossMode(mode->second);
  c.max_duration_s = GetDouble(kv, "train.max_duration_s", c.max_duration_s);
  c.grad_clip_norm = GetDouble(kv, "train.grad_clip_norm", c.grad_clip_norm);
  c.augment = GetBool(kv, "train.augment", c.augment);
  c.time_mask = GetBool(kv, "train.time_mask", c.time_mask);
  c.sc_on_log_mel = GetBool(kv, "train.sc_on_log_mel", c.sc_on_log_mel);
  c.max_steps = GetInt64(kv, "train.max_steps", c.max_steps);
  c.num_workers = GetInt(kv, "train.num_workers", c.num_workers);
  c.seed = static_cast<uint64_t>(GetInt64(kv, "train.seed", 0));
  c.Validate();
  return c;
}

TrainPreset LookupTrainPreset(const std::string &name) {
  // Peak learning rates and epoch budgets of the published recipes.
  if (name == "grid-seen") return {name, "S", 1e-3, 200, false};
  if (name == "grid-unseen") return {name, "S", 1e-3, 200, false};
  if (name == "lrw") return {name, "M", 1e-3, 150, false};
  if (name == "lrs3-seen") return {name, "L", 7e-3, 500, true};
  if (name == "lrs3-unseen") return {name, "L", 1e-3, 150, true};
  if (name == "lrs3-vox2") return {name, "L", 1e-3, 150, true};
  throw ValidationError("unknown preset '" + name + "'");
}

void WriteKeyValues(const std::string &path, const KeyValues &kv) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  for (const auto &[k, v] : kv) os << k << '=' << v << '\n';
  if (!os) throw IoError("write failed: " + path);
}

KeyValues ReadKeyValues(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path);
  KeyValues kv;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace svts

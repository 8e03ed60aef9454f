// src/training/trainer.cc

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

#include "svts/training/trainer.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json.hpp"
#include "svts/core/error.h"
#include "svts/model/checkpoint.h"
#include "svts/training/schedule.h"
#include "svts/video/augment.h"

namespace svts::training {

namespace fs = std::filesystem;

namespace {

std::unique_ptr<nn::Predictor> MakeModel(const ModelConfig &cfg, uint64_t seed) {
  Rng rng(seed);
  return std::make_unique<nn::Predictor>(cfg, rng);
}

}  // namespace

Trainer::Trainer(const ModelConfig &model, const TrainConfig &train)
    : model_cfg_(model),
      train_(train),
      model_(MakeModel(model, train.seed)),
      data_rng_(Rng(train.seed).Fork(1)),
      dropout_rng_(Rng(train.seed).Fork(2)) {
  train_.Validate();
  optimizer_ = std::make_unique<AdamW>(
      model_->Params(),
      AdamWOptions{train.beta1, train.beta2, train.adam_eps, train.weight_decay});
}

nn::PredictorBatch Trainer::PrepareBatch(const std::vector<const Example *> &batch, bool augment,
                                         Matrix *target, nn::Packing *mel_packing) {
  video::AugmentConfig aug;
  aug.time_mask = train_.time_mask;
  std::vector<VideoClip> clips;
  clips.reserve(batch.size());
  int mel_rows = 0;
  for (const Example *e : batch) {
    if (e->clip.width() == kModelCropSize)
      clips.push_back(e->clip);
    else if (augment)
      clips.push_back(video::Augment(e->clip, aug, data_rng_.NextU64()).clip);
    else
      clips.push_back(video::CenterCrop(e->clip));
    mel_rows += static_cast<int>(e->mel.rows());
  }
  std::vector<const VideoClip *> cp;
  std::vector<const SpeakerEmbedding *> ep;
  for (size_t i = 0; i < batch.size(); ++i) {
    cp.push_back(&clips[i]);
    ep.push_back(&batch[i]->embedding);
  }
  target->resize(mel_rows, kMelBands);
  mel_packing->lengths.clear();
  int row = 0;
  for (const Example *e : batch) {
    target->middleRows(row, e->mel.rows()) = e->mel;
    mel_packing->lengths.push_back(static_cast<int>(e->mel.rows()));
    row += static_cast<int>(e->mel.rows());
  }
  return nn::MakeBatch(cp, ep);
}

nn::LossValue Trainer::Step(const std::vector<const Example *> &batch, double lr) {
  if (batch.empty()) throw ValidationError("empty training batch");
  Matrix target;
  nn::Packing mel_packing;
  const nn::PredictorBatch input = PrepareBatch(batch, train_.augment, &target, &mel_packing);
  nn::Predictor::Cache cache;
  const Matrix mel = model_->ForwardBatch(input, nn::RunContext{true, &dropout_rng_}, &cache);
  Matrix dmel;
  const nn::LossValue loss =
      nn::BatchLoss(mel, target, mel_packing, train_.loss_mode, train_.sc_on_log_mel, &dmel);
  if (!std::isfinite(loss.total))
    throw Error("non-finite training loss at step " + std::to_string(steps_done() + 1) +
                " (l1 " + std::to_string(loss.l1) + ", sc " + std::to_string(loss.sc) + ")");
  const std::vector<nn::Param *> params = model_->Params();
  for (nn::Param *p : params) p->ZeroGrad();
  model_->Backward(cache, input, dmel);
  if (train_.grad_clip_norm > 0.0) ClipGradNorm(params, train_.grad_clip_norm);
  optimizer_->Step(lr);
  return loss;
}

double Trainer::ValidationLoss(const std::vector<Example> &examples) const {
  if (examples.empty()) throw ValidationError("validation set is empty");
  double sum = 0.0;
  const size_t bs = static_cast<size_t>(std::max(1, train_.batch_size));
  for (size_t begin = 0; begin < examples.size(); begin += bs) {
    const size_t end = std::min(examples.size(), begin + bs);
    std::vector<VideoClip> clips;
    std::vector<const VideoClip *> cp;
    std::vector<const SpeakerEmbedding *> ep;
    for (size_t i = begin; i < end; ++i)
      clips.push_back(examples[i].clip.width() == kModelCropSize ? examples[i].clip
                                                                  : video::CenterCrop(examples[i].clip));
    for (size_t i = begin; i < end; ++i) {
      cp.push_back(&clips[i - begin]);
      ep.push_back(&examples[i].embedding);
    }
    const Matrix mel = model_->ForwardBatch(nn::MakeBatch(cp, ep), nn::RunContext{}, nullptr);
    int row = 0;
    for (size_t i = begin; i < end; ++i) {
      const Matrix &target = examples[i].mel;
      sum += nn::CombinedLoss(MelSpectrogram(mel.middleRows(row, target.rows())),
                              MelSpectrogram(target), train_.loss_mode, train_.sc_on_log_mel);
      row += static_cast<int>(target.rows());
    }
  }
  return sum / static_cast<double>(examples.size());
}

void Trainer::SaveCheckpoint(const std::string &path, int epoch, double val_loss) const {
  nn::CheckpointState state;
  nn::CaptureModel(*model_, state);
  state.train = train_.ToKeyValues();
  state.epoch = epoch;
  state.step = steps_done();
  state.val_loss = val_loss;
  state.rng_state = data_rng_.SaveState() + "|" + dropout_rng_.SaveState();
  optimizer_->Save(state);
  nn::SaveCheckpoint(path, state);
}

void Trainer::Resume(const std::string &path) {
  const nn::CheckpointState state = nn::LoadCheckpoint(path);
  if (state.model.ToKeyValues() != model_cfg_.ToKeyValues())
    throw ValidationError(path + ": checkpoint was written for a different model config");
  nn::RestoreModel(state, *model_);
  optimizer_->Load(state);
  const size_t bar = state.rng_state.find('|');
  if (bar == std::string::npos) throw ParseError(path + ": malformed rng state", 1);
  data_rng_.LoadState(state.rng_state.substr(0, bar));
  dropout_rng_.LoadState(state.rng_state.substr(bar + 1));
}

FitResult Trainer::Fit(const std::vector<Example> &train, const std::vector<Example> &val,
                       const std::string &run_dir) {
  if (train.empty()) throw ValidationError("training split is empty");
  if (val.empty()) throw ValidationError("validation split is empty");
  const fs::path run(run_dir);
  std::error_code ec;
  fs::create_directories(run / "checkpoints", ec);
  if (ec) throw IoError("cannot create run directory " + run_dir + ": " + ec.message());

  KeyValues snapshot = model_cfg_.ToKeyValues();
  for (const auto &[k, v] : train_.ToKeyValues()) snapshot[k] = v;
  WriteKeyValues((run / "config.txt").string(), snapshot);

  const size_t bs = static_cast<size_t>(train_.batch_size);
  const int64_t per_epoch = static_cast<int64_t>((train.size() + bs - 1) / bs);
  int64_t total = per_epoch * train_.epochs;
  if (train_.max_steps > 0) total = std::min(total, train_.max_steps);
  const ScheduleState base = ScheduleState::Make(total, train_.peak_lr, train_.warmup_fraction);

  std::ofstream metrics(run / "metrics.jsonl");
  if (!metrics) throw IoError("cannot write metrics log in " + run_dir);

  FitResult result;
  int64_t step = 0;
  for (int epoch = 1; epoch <= train_.epochs && step < total; ++epoch) {
    std::vector<size_t> order(train.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Shuffle(order, data_rng_);
    for (size_t begin = 0; begin < order.size() && step < total; begin += bs) {
      std::vector<const Example *> batch;
      for (size_t i = begin; i < std::min(order.size(), begin + bs); ++i) batch.push_back(&train[order[i]]);
      ScheduleState s = base;
      s.step = step + 1;
      const double lr = LrAt(s);
      const nn::LossValue loss = Step(batch, lr);
      ++step;
      result.train_losses.push_back(loss.total);
      nlohmann::json line = {{"step", step}, {"epoch", epoch}, {"lr", lr},
                             {"train_loss", loss.total}, {"l1", loss.l1}, {"sc", loss.sc},
                             {"val_loss", nullptr}};
      metrics << line.dump() << "\n";
    }
    const double val_loss = ValidationLoss(val);
    if (!std::isfinite(val_loss))
      throw Error("non-finite validation loss after epoch " + std::to_string(epoch));
    char name[32];
    std::snprintf(name, sizeof name, "epoch_%03d.ckpt", epoch);
    const std::string path = (run / "checkpoints" / name).string();
    SaveCheckpoint(path, epoch, val_loss);
    nlohmann::json line = {{"step", step}, {"epoch", epoch}, {"lr", nullptr},
                           {"train_loss", nullptr}, {"val_loss", val_loss}};
    metrics << line.dump() << "\n";
    metrics.flush();
    result.checkpoints.push_back(path);
    result.val_losses.push_back(val_loss);
  }
  result.best_epoch = BestEpoch(result.val_losses);
  result.best_val_loss = result.val_losses[result.best_epoch - 1];
  result.best_checkpoint = result.checkpoints[result.best_epoch - 1];
  return result;
}

int BestEpoch(const std::vector<double> &val_losses) {
  int best = 0;
  for (size_t i = 0; i < val_losses.size(); ++i)
    if (best == 0 || val_losses[i] < val_losses[best - 1]) best = static_cast<int>(i) + 1;
  return best;
}

FitResult Fit(const std::string &manifest_path, const ModelConfig &model, const TrainConfig &train,
              const std::string &run_dir) {
  const std::vector<ManifestEntry> all =
      FilterMaxDuration(LoadManifest(manifest_path), train.max_duration_s);
  const std::vector<ManifestEntry> tr = SelectSplit(all, Split::kTrain);
  const std::vector<ManifestEntry> va = SelectSplit(all, Split::kVal);
  if (tr.empty()) throw ValidationError(manifest_path + ": train split is empty");
  if (va.empty()) throw ValidationError(manifest_path + ": val split is empty");
  Trainer trainer(model, train);
  return trainer.Fit(LoadExamples(tr, manifest_path), LoadExamples(va, manifest_path), run_dir);
}

}  // namespace svts::training

// include/svts/training/trainer.h

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

#ifndef SVTS_TRAINING_TRAINER_H_
#define SVTS_TRAINING_TRAINER_H_

#include <memory>
#include <string>
#include <vector>

#include "svts/core/config.h"
#include "svts/model/loss.h"
#include "svts/model/predictor.h"
#include "svts/training/adamw.h"
#include "svts/training/dataset.h"

namespace svts::training {

struct FitResult {
  std::string best_checkpoint;
  int best_epoch = 0;
  double best_val_loss = 0.0;
  std::vector<std::string> checkpoints;  // one per epoch
  std::vector<double> train_losses;      // one per step
  std::vector<double> val_losses;        // one per epoch
};

// Owns the model, optimizer and random streams of one training run.  The
// model is initialised from train.seed; batch order and augmentation use one
// derived stream and dropout another, both saved in checkpoints.
class Trainer {
 public:
  Trainer(const ModelConfig &model, const TrainConfig &train);

  nn::Predictor &model() { return *model_; }
  const nn::Predictor &model() const { return *model_; }
  const TrainConfig &config() const { return train_; }
  int64_t steps_done() const { return optimizer_->steps(); }

  // Augments (or centre-crops) the batch, runs forward and backward and
  // applies one AdamW update with learning rate lr.  Returns the loss
  // before the update.  Throws on a non-finite loss.
  nn::LossValue Step(const std::vector<const Example *> &batch, double lr);

  // Mean per-clip loss of the configured mode in evaluation mode on
  // centre-cropped clips.
  double ValidationLoss(const std::vector<Example> &examples) const;

  // Runs train.epochs epochs (or train.max_steps updates) writing
  // <run_dir>/config.txt, <run_dir>/metrics.jsonl and
  // <run_dir>/checkpoints/epoch_NNN.ckpt.  Returns the epoch with the lowest
  // validation loss.
  FitResult Fit(const std::vector<Example> &train, const std::vector<Example> &val,
                const std::string &run_dir);

  void SaveCheckpoint(const std::string &path, int epoch, double val_loss) const;
  // Restores weights, optimizer moments and random streams.
  void Resume(const std::string &path);

 private:
  nn::PredictorBatch PrepareBatch(const std::vector<const Example *> &batch, bool augment,
                                  Matrix *target, nn::Packing *mel_packing);

  ModelConfig model_cfg_;
  TrainConfig train_;
  std::unique_ptr<nn::Predictor> model_;
  std::unique_ptr<AdamW> optimizer_;
  Rng data_rng_;
  Rng dropout_rng_;
};

// Loads the manifest, drops utterances longer than train.max_duration_s and
// fits on the train split with the val split for checkpoint selection.
// 1-based index of the first minimum; 0 for an empty list.
int BestEpoch(const std::vector<double> &val_losses);

FitResult Fit(const std::string &manifest_path, const ModelConfig &model, const TrainConfig &train,
              const std::string &run_dir);

}  // namespace svts::training

#endif  // SVTS_TRAINING_TRAINER_H_

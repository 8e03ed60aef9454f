// include/svts/model/predictor.h

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

#ifndef SVTS_MODEL_PREDICTOR_H_
#define SVTS_MODEL_PREDICTOR_H_

#include <memory>
#include <vector>

#include "svts/core/config.h"
#include "svts/core/types.h"
#include "svts/model/conformer.h"
#include "svts/model/resnet.h"

namespace svts::nn {

struct PredictorOutput {
  MelSpectrogram mel;  // 4T x 80
};

// Several clips packed along time.  frames holds one 88x88 frame per row;
// speaker row i conditions clip i.
struct PredictorBatch {
  Matrix frames;
  Packing packing;
  Matrix speaker;
  int side = kModelCropSize;
};

PredictorBatch MakeBatch(const std::vector<const VideoClip *> &clips,
                         const std::vector<const SpeakerEmbedding *> &embeddings);

// Video-to-mel predictor: visual front-end, speaker concatenation, an
// initial linear layer and conformer blocks, then a 320-wide projection
// reshaped into four mel frames per video frame.
class Predictor : public Module {
 public:
  struct Cache {
    VisualFrontEnd::Cache visual;
    Matrix seq;  // conditioned input sequence
    std::vector<ConformerBlock::Cache> blocks;
    LayerNorm::Cache after_norm;
    Matrix encoded;  // after the final norm
  };

  Predictor(const ModelConfig &config, Rng &rng);

  const ModelConfig &config() const { return config_; }

  // T x visual_features.
  Matrix EncodeVisual(const VideoClip &clip) const;
  // Appends the embedding to every row.
  static Matrix ConditionOnSpeaker(const Matrix &features, const SpeakerEmbedding &embedding);
  // T x attention_dim, evaluation mode.
  Matrix Encode(const Matrix &seq) const;
  // T x attention_dim -> 4T x 80.
  MelSpectrogram ProjectAndReshape(const Matrix &encoded) const;
  // Evaluation-mode prediction for one clip.
  PredictorOutput Forward(const VideoClip &clip, const SpeakerEmbedding &embedding) const;

  // Packed prediction (4 * total frames) x 80.  Pass a cache to enable
  // Backward().
  Matrix ForwardBatch(const PredictorBatch &batch, const RunContext &ctx, Cache *cache) const;
  // Accumulates parameter gradients from dL/dmel.
  void Backward(Cache &cache, const PredictorBatch &batch, const Matrix &dmel);

  void CollectParams(std::vector<Param *> &out) override;
  void CollectBuffers(std::vector<Buffer *> &out) override;
  std::vector<Param *> Params();
  std::vector<Buffer *> Buffers();

  // Trainable scalars of visual encoder + conformer + projection.
  static int64_t CountParameters(const ModelConfig &config);

 private:
  Matrix EncodePacked(const Matrix &seq, const Packing &packing, const RunContext &ctx,
                      Cache *cache) const;
  Matrix Reshape(const Matrix &projected) const;

  ModelConfig config_;
  VisualFrontEnd visual_;
  Linear input_;
  std::vector<std::unique_ptr<ConformerBlock>> blocks_;
  LayerNorm after_norm_;
  Linear projection_;
};

}  // namespace svts::nn

#endif  // SVTS_MODEL_PREDICTOR_H_

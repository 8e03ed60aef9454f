// src/model/predictor.cc

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

#include "svts/model/predictor.h"

#include <cmath>

#include "svts/core/error.h"

namespace svts::nn {

PredictorBatch MakeBatch(const std::vector<const VideoClip *> &clips,
                         const std::vector<const SpeakerEmbedding *> &embeddings) {
  if (clips.empty() || clips.size() != embeddings.size())
    throw ValidationError("batch needs one embedding per clip");
  PredictorBatch batch;
  const int side = clips[0]->width();
  int total = 0;
  for (const VideoClip *c : clips) {
    if (c->width() != side) throw ShapeError("all clips in a batch must share a frame size");
    batch.packing.lengths.push_back(c->num_frames());
    total += c->num_frames();
  }
  batch.side = side;
  batch.frames.resize(total, static_cast<int64_t>(side) * side);
  int row = 0;
  for (const VideoClip *c : clips)
    for (int t = 0; t < c->num_frames(); ++t, ++row) {
      const auto f = c->frame(t);
      std::copy(f.begin(), f.end(), batch.frames.row(row).data());
    }
  const int dim = embeddings[0]->dim();
  batch.speaker.resize(static_cast<int64_t>(clips.size()), dim);
  for (size_t i = 0; i < embeddings.size(); ++i) {
    if (embeddings[i]->dim() != dim) throw ShapeError("speaker embeddings differ in size");
    batch.speaker.row(static_cast<int64_t>(i)) = embeddings[i]->vector().transpose();
  }
  return batch;
}

Predictor::Predictor(const ModelConfig &config, Rng &rng)
    : config_(config),
      visual_("encoder.frontend", config.visual_width, rng),
      input_("encoder.embed", config.visual_features() + config.speaker_dim, config.attention_dim,
             true, rng),
      after_norm_("encoder.after_norm", config.attention_dim),
      projection_("projection", config.attention_dim, config.projection_dim, true, rng) {
  config_.Validate();
  for (int b = 0; b < config.num_blocks; ++b)
    blocks_.push_back(std::make_unique<ConformerBlock>(
        "encoder.blocks." + std::to_string(b), config.attention_dim, config.attention_heads,
        config.ffn_dim, config.conv_kernel, config.dropout, rng));
}

int64_t Predictor::CountParameters(const ModelConfig &c) {
  return VisualFrontEnd::NumParams(c.visual_width) +
         Linear::NumParams(c.visual_features() + c.speaker_dim, c.attention_dim, true) +
         c.num_blocks *
             ConformerBlock::NumParams(c.attention_dim, c.attention_heads, c.ffn_dim, c.conv_kernel) +
         LayerNorm::NumParams(c.attention_dim) +
         Linear::NumParams(c.attention_dim, c.projection_dim, true);
}

Matrix Predictor::EncodeVisual(const VideoClip &clip) const {
  if (clip.width() != kModelCropSize)
    throw ShapeError("visual encoder expects " + std::to_string(kModelCropSize) + "x" +
                     std::to_string(kModelCropSize) + " frames, got " +
                     std::to_string(clip.width()));
  const VideoClip *p = &clip;
  Matrix frames(clip.num_frames(), kModelCropSize * kModelCropSize);
  for (int t = 0; t < clip.num_frames(); ++t) {
    const auto f = p->frame(t);
    std::copy(f.begin(), f.end(), frames.row(t).data());
  }
  return visual_.Forward(frames, kModelCropSize, Packing{{clip.num_frames()}}, RunContext{},
                         nullptr);
}

Matrix Predictor::ConditionOnSpeaker(const Matrix &features, const SpeakerEmbedding &embedding) {
  Matrix out(features.rows(), features.cols() + embedding.dim());
  out.leftCols(features.cols()) = features;
  out.rightCols(embedding.dim()).rowwise() = embedding.vector().transpose();
  return out;
}

Matrix Predictor::EncodePacked(const Matrix &seq, const Packing &packing, const RunContext &ctx,
                               Cache *cache) const {
  if (seq.rows() == 0) throw ShapeError("conformer input has no frames");
  if (seq.cols() != input_.in_dim())
    throw ShapeError("conformer expects " + std::to_string(input_.in_dim()) +
                     " features per frame, got " + std::to_string(seq.cols()));
  Matrix x = input_.Forward(seq) * std::sqrt(static_cast<double>(config_.attention_dim));
  if (cache) cache->blocks.assign(blocks_.size(), {});
  for (size_t b = 0; b < blocks_.size(); ++b)
    x = blocks_[b]->Forward(x, packing, ctx, cache ? &cache->blocks[b] : nullptr);
  return after_norm_.Forward(x, cache ? &cache->after_norm : nullptr);
}

Matrix Predictor::Encode(const Matrix &seq) const {
  return EncodePacked(seq, Packing{{static_cast<int>(seq.rows())}}, RunContext{}, nullptr);
}

Matrix Predictor::Reshape(const Matrix &projected) const {
  const int r = config_.reshape_factor, bands = config_.mel_bands;
  return Eigen::Map<const Matrix>(projected.data(), projected.rows() * r, bands);
}

MelSpectrogram Predictor::ProjectAndReshape(const Matrix &encoded) const {
  return MelSpectrogram(Reshape(projection_.Forward(encoded)));
}

PredictorOutput Predictor::Forward(const VideoClip &clip, const SpeakerEmbedding &embedding) const {
  if (embedding.dim() != config_.speaker_dim)
    throw ShapeError("speaker embedding has " + std::to_string(embedding.dim()) +
                     " dims, model expects " + std::to_string(config_.speaker_dim));
  return {ProjectAndReshape(Encode(ConditionOnSpeaker(EncodeVisual(clip), embedding)))};
}

Matrix Predictor::ForwardBatch(const PredictorBatch &batch, const RunContext &ctx,
                               Cache *cache) const {
  if (batch.side != kModelCropSize) throw ShapeError("batch frames must be 88x88");
  if (batch.speaker.rows() != batch.packing.count() || batch.speaker.cols() != config_.speaker_dim)
    throw ShapeError("batch speaker matrix does not match clips or model");
  Matrix feats =
      visual_.Forward(batch.frames, batch.side, batch.packing, ctx, cache ? &cache->visual : nullptr);
  Matrix seq(feats.rows(), feats.cols() + config_.speaker_dim);
  seq.leftCols(feats.cols()) = feats;
  int begin = 0;
  for (int c = 0; c < batch.packing.count(); ++c) {
    const int len = batch.packing.lengths[c];
    seq.block(begin, feats.cols(), len, config_.speaker_dim).rowwise() = batch.speaker.row(c);
    begin += len;
  }
  Matrix encoded = EncodePacked(seq, batch.packing, ctx, cache);
  Matrix mel = Reshape(projection_.Forward(encoded));
  if (cache) {
    cache->seq = std::move(seq);
    cache->encoded = std::move(encoded);
  }
  return mel;
}

void Predictor::Backward(Cache &cache, const PredictorBatch &batch, const Matrix &dmel) {
  const Matrix dproj = Eigen::Map<const Matrix>(dmel.data(), cache.encoded.rows(),
                                                config_.projection_dim);
  Matrix dx = projection_.Backward(cache.encoded, dproj);
  dx = after_norm_.Backward(cache.after_norm, dx);
  for (size_t b = blocks_.size(); b-- > 0;)
    dx = blocks_[b]->Backward(cache.blocks[b], batch.packing, dx);
  dx *= std::sqrt(static_cast<double>(config_.attention_dim));
  const Matrix dseq = input_.Backward(cache.seq, dx);
  visual_.Backward(cache.visual, dseq.leftCols(config_.visual_features()));
}

void Predictor::CollectParams(std::vector<Param *> &out) {
  visual_.CollectParams(out);
  input_.CollectParams(out);
  for (auto &b : blocks_) b->CollectParams(out);
  after_norm_.CollectParams(out);
  projection_.CollectParams(out);
}

void Predictor::CollectBuffers(std::vector<Buffer *> &out) {
  visual_.CollectBuffers(out);
  for (auto &b : blocks_) b->CollectBuffers(out);
}

std::vector<Param *> Predictor::Params() {
  std::vector<Param *> out;
  CollectParams(out);
  return out;
}

std::vector<Buffer *> Predictor::Buffers() {
  std::vector<Buffer *> out;
  CollectBuffers(out);
  return out;
}

}  // namespace svts::nn

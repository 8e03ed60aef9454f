// src/core/types.cc

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

#include "svts/core/types.h"

#include <algorithm>
#include <cmath>

#include "svts/core/error.h"

namespace svts {

VideoClip::VideoClip(int num_frames, int side, std::vector<double> pixels)
    : num_frames_(num_frames), side_(side), pixels_(std::move(pixels)) {
  if (num_frames_ < 1) throw ValidationError("VideoClip: need at least one frame");
  if (side_ != kStoredCropSize && side_ != kModelCropSize)
    throw ValidationError("VideoClip: side must be 96 or 88, got " +
                          std::to_string(side_));
  if (pixels_.size() != static_cast<size_t>(num_frames_) * side_ * side_)
    throw ValidationError("VideoClip: pixel count does not match T x H x W");
  for (double v : pixels_) {
    if (!(v >= 0.0 && v <= 1.0))
      throw ValidationError("VideoClip: pixel value outside [0, 1]");
  }
}

MelSpectrogram::MelSpectrogram(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1) throw ValidationError("MelSpectrogram: no frames");
  if (values_.cols() != kMelBands)
    throw ValidationError("MelSpectrogram: expected 80 bands, got " +
                          std::to_string(values_.cols()));
  if (!values_.allFinite())
    throw ValidationError("MelSpectrogram: non-finite value");
}

Waveform::Waveform(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) throw ValidationError("Waveform: empty");
  if (sample_rate_ != kSampleRate)
    throw ValidationError("Waveform: sample rate must be 24000, got " +
                          std::to_string(sample_rate_));
  for (double s : samples_) {
    if (!(s >= -1.0 && s <= 1.0))
      throw ValidationError("Waveform: sample outside [-1, 1]");
  }
}

Waveform Waveform::Clipped(std::vector<double> samples, int sample_rate) {
  for (double &s : samples) {
    if (std::isnan(s)) s = 0.0;
    s = std::clamp(s, -1.0, 1.0);
  }
  return Waveform(std::move(samples), sample_rate);
}

SpeakerEmbedding::SpeakerEmbedding(Vector vector, std::string speaker_id)
    : vector_(std::move(vector)), speaker_id_(std::move(speaker_id)) {
  if (vector_.size() == 0) throw ValidationError("SpeakerEmbedding: empty");
  const double norm = vector_.norm();
  if (!(std::abs(norm - 1.0) <= 1e-5))
    throw ValidationError("SpeakerEmbedding: norm must be 1 +- 1e-5, got " +
                          std::to_string(norm));
}

SpeakerEmbedding SpeakerEmbedding::Normalized(Vector vector,
                                              std::string speaker_id) {
  const double norm = vector.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw ValidationError("SpeakerEmbedding: cannot normalise a zero vector");
  return SpeakerEmbedding(vector / norm, std::move(speaker_id));
}

LandmarkTrack::LandmarkTrack(std::vector<LandmarkFrame> frames)
    : frames_(std::move(frames)) {
  if (frames_.empty()) throw ValidationError("LandmarkTrack: no frames");
  for (const auto &f : frames_)
    for (const auto &p : f)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw ValidationError("LandmarkTrack: non-finite coordinate");
}

void LandmarkTrack::CheckBounds(int width, int height) const {
  for (size_t t = 0; t < frames_.size(); ++t) {
    for (const auto &p : frames_[t]) {
      if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height)
        throw ValidationError("LandmarkTrack: frame " + std::to_string(t) +
                              " has a point outside the source frame");
    }
  }
}

}  // namespace svts

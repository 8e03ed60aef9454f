// include/svts/core/types.h

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

#ifndef SVTS_CORE_TYPES_H_
#define SVTS_CORE_TYPES_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace svts {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr int kVideoFps = 20;
inline constexpr int kSampleRate = 24000;
inline constexpr int kMelBands = 80;
inline constexpr int kMelFrameRate = 80;
inline constexpr int kMelFramesPerVideoFrame = kMelFrameRate / kVideoFps;
inline constexpr int kStoredCropSize = 96;
inline constexpr int kModelCropSize = 88;
inline constexpr int kNumLandmarks = 68;
inline constexpr int kDefaultSpeakerDim = 256;
// Audio samples covered by one video frame (24000 / 20).
inline constexpr int kSamplesPerVideoFrame = kSampleRate / kVideoFps;

// T grayscale square frames in [0, 1] at 20 fps.  Side is 96 (stored mouth
// crops) or 88 (model input).  Immutable once built.
class VideoClip {
 public:
  VideoClip(int num_frames, int side, std::vector<double> pixels);

  int num_frames() const { return num_frames_; }
  int height() const { return side_; }
  int width() const { return side_; }
  int fps() const { return kVideoFps; }
  double duration_s() const { return static_cast<double>(num_frames_) / kVideoFps; }

  double at(int t, int y, int x) const {
    return pixels_[(static_cast<size_t>(t) * side_ + y) * side_ + x];
  }
  std::span<const double> frame(int t) const {
    const size_t n = static_cast<size_t>(side_) * side_;
    return {pixels_.data() + t * n, n};
  }
  const std::vector<double> &pixels() const { return pixels_; }

 private:
  int num_frames_;
  int side_;
  std::vector<double> pixels_;
};

// F x 80 natural-log mel magnitudes at 80 frames/s.
class MelSpectrogram {
 public:
  explicit MelSpectrogram(Matrix values);

  int num_frames() const { return static_cast<int>(values_.rows()); }
  int num_bands() const { return static_cast<int>(values_.cols()); }
  int frame_rate() const { return kMelFrameRate; }
  const Matrix &values() const { return values_; }

 private:
  Matrix values_;
};

// Mono 24 kHz audio, samples in [-1, 1].
class Waveform {
 public:
  explicit Waveform(std::vector<double> samples, int sample_rate = kSampleRate);
  // Clamps samples into [-1, 1] before validating; used for synthesised audio.
  static Waveform Clipped(std::vector<double> samples,
                          int sample_rate = kSampleRate);

  size_t size() const { return samples_.size(); }
  int sample_rate() const { return sample_rate_; }
  double duration_s() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }
  const std::vector<double> &samples() const { return samples_; }

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

// Unit-norm voice vector from a speaker-verification encoder.
class SpeakerEmbedding {
 public:
  SpeakerEmbedding(Vector vector, std::string speaker_id = "");
  // Normalises a nonzero vector to unit length.
  static SpeakerEmbedding Normalized(Vector vector, std::string speaker_id = "");

  int dim() const { return static_cast<int>(vector_.size()); }
  const Vector &vector() const { return vector_; }
  const std::string &speaker_id() const { return speaker_id_; }

 private:
  Vector vector_;
  std::string speaker_id_;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

using LandmarkFrame = std::array<Point2, kNumLandmarks>;

// T x 68 pixel coordinates, one row of points per video frame.
class LandmarkTrack {
 public:
  explicit LandmarkTrack(std::vector<LandmarkFrame> frames);

  int num_frames() const { return static_cast<int>(frames_.size()); }
  const LandmarkFrame &frame(int t) const { return frames_[t]; }
  const std::vector<LandmarkFrame> &frames() const { return frames_; }

  // Throws ValidationError if any point lies outside [0, width) x [0, height).
  void CheckBounds(int width, int height) const;

 private:
  std::vector<LandmarkFrame> frames_;
};

}  // namespace svts

#endif  // SVTS_CORE_TYPES_H_

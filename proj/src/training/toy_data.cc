// src/training/toy_data.cc

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

#include "svts/training/toy_data.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "svts/core/error.h"
#include "svts/core/manifest.h"
#include "svts/core/rng.h"
#include "svts/core/speaker_embedding.h"
#include "svts/dsp/wav_io.h"
#include "svts/video/align.h"
#include "svts/video/clip_io.h"
#include "svts/video/landmarks.h"

namespace svts::training {

namespace fs = std::filesystem;

namespace {

constexpr double kMouthX = 128.0, kMouthY = 180.0;

struct ClipParams {
  double base_aperture;
  double mod_hz;
  double phase;
  video::SimilarityTransform face_to_frame;
};

ClipParams DrawClipParams(uint64_t seed, int index, int frame_size) {
  Rng rng = Rng(seed).Fork(static_cast<uint64_t>(index) + 1);
  ClipParams p;
  p.base_aperture = rng.Uniform(0.2, 1.0);
  p.mod_hz = rng.Uniform(1.0, 3.0);
  p.phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
  const double scale = rng.Uniform(0.40, 0.46) * frame_size / 128.0;
  const double angle = rng.Uniform(-0.08, 0.08);
  const double a = scale * std::cos(angle), b = scale * std::sin(angle);
  const double cx = frame_size / 2.0 + rng.Uniform(-3.0, 3.0);
  const double cy = frame_size / 2.0 + rng.Uniform(-3.0, 3.0);
  // Map the canvas centre (128, 140) to (cx, cy).
  p.face_to_frame = {a, b, cx - (a * 128.0 - b * 140.0), cy - (b * 128.0 + a * 140.0)};
  return p;
}

double Aperture(const ClipParams &p, double t_s) {
  return p.base_aperture * (0.75 + 0.25 * std::sin(2.0 * std::numbers::pi * p.mod_hz * t_s + p.phase));
}

// Soft inside-weight of an axis-aligned ellipse.
double Ellipse(double x, double y, double cx, double cy, double rx, double ry) {
  const double r = std::sqrt((x - cx) * (x - cx) / (rx * rx) + (y - cy) * (y - cy) / (ry * ry));
  return 1.0 / (1.0 + std::exp((r - 1.0) * 12.0));
}

// Face intensity at canvas coordinates for mouth aperture a.
double Shade(double x, double y, double a) {
  double v = 0.25 + 0.45 * Ellipse(x, y, 128.0, 135.0, 100.0, 125.0);
  v -= 0.35 * Ellipse(x, y, 88.0, 100.0, 14.0, 6.0);
  v -= 0.35 * Ellipse(x, y, 168.0, 100.0, 14.0, 6.0);
  v -= 0.25 * Ellipse(x, y, 88.0, 84.0, 18.0, 3.0);
  v -= 0.25 * Ellipse(x, y, 168.0, 84.0, 18.0, 3.0);
  v -= 0.15 * Ellipse(x, y, 128.0, 138.0, 8.0, 4.0);
  v -= 0.20 * Ellipse(x, y, kMouthX, kMouthY, 32.0, 8.0 + 10.0 * a);
  v -= 0.35 * Ellipse(x, y, kMouthX, kMouthY, 22.0, 1.0 + 9.0 * a);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

std::vector<double> ToyAperture(int num_frames, uint64_t seed, int index) {
  const ClipParams p = DrawClipParams(seed, index, 128);
  std::vector<double> a(num_frames);
  for (int t = 0; t < num_frames; ++t) a[t] = Aperture(p, (t + 0.5) / kVideoFps);
  return a;
}

std::string MakeToyDataset(int n_clips, double duration_s, uint64_t seed, const std::string &out_dir,
                           const ToyDataOptions &opts) {
  if (n_clips < 1) throw ValidationError("toy dataset needs at least one clip");
  const int T = static_cast<int>(std::lround(duration_s * kVideoFps));
  if (T < 1) throw ValidationError("toy clip duration must cover at least one frame");
  const int size = opts.frame_size;
  const int speakers =
      opts.num_speakers > 0 ? opts.num_speakers : std::min(4, std::max(1, n_clips / 2));
  std::error_code ec;
  for (const char *sub : {"raw", "landmarks", "audio", "embeddings"}) {
    fs::create_directories(fs::path(out_dir) / sub, ec);
    if (ec) throw IoError("cannot create " + (fs::path(out_dir) / sub).string() + ": " + ec.message());
  }

  for (int s = 0; s < speakers; ++s) {
    Rng rng = Rng(seed).Fork(1000003 + s);
    Vector v(kDefaultSpeakerDim);
    for (int i = 0; i < v.size(); ++i) v[i] = rng.Normal();
    SaveSpeakerEmbedding((fs::path(out_dir) / "embeddings" / ("spk" + std::to_string(s) + ".emb")).string(),
                         SpeakerEmbedding::Normalized(v));
  }

  const LandmarkFrame mean_face = video::LoadMeanFace();
  std::vector<ManifestEntry> entries;
  for (int i = 0; i < n_clips; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "toy%04d", i);
    const ClipParams p = DrawClipParams(seed, i, size);
    const video::SimilarityTransform inv = p.face_to_frame.Inverse();
    Rng noise = Rng(seed).Fork(5000011 + i);

    video::RawVideo raw{T, size, size, 1, std::vector<double>(static_cast<size_t>(T) * size * size)};
    std::vector<LandmarkFrame> track;
    for (int t = 0; t < T; ++t) {
      const double a = Aperture(p, (t + 0.5) / kVideoFps);
      for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
          const Point2 q = inv.Apply({static_cast<double>(x), static_cast<double>(y)});
          raw.pixels[(static_cast<size_t>(t) * size + y) * size + x] = Shade(q.x, q.y, a);
        }
      LandmarkFrame lm;
      for (int k = 0; k < kNumLandmarks; ++k) {
        Point2 q = mean_face[k];
        if (k >= video::kMouthFirst) q.y = kMouthY + (q.y - kMouthY) * (0.4 + 0.9 * a);
        Point2 r = p.face_to_frame.Apply(q);
        r.x = std::clamp(r.x + 0.2 * noise.Normal(), 0.0, size - 1.0);
        r.y = std::clamp(r.y + 0.2 * noise.Normal(), 0.0, size - 1.0);
        lm[k] = r;
      }
      track.push_back(lm);
    }

    const int n = T * kSamplesPerVideoFrame;
    std::vector<double> audio(n);
    double phase = 0.0;
    for (int s = 0; s < n; ++s) {
      const double a = Aperture(p, (s + 0.5) / kSampleRate);
      const double f0 = 100.0 + 150.0 * a;
      phase += 2.0 * std::numbers::pi * f0 / kSampleRate;
      double v = 0.0;
      for (int h = 1; h <= 10; ++h) v += std::sin(h * phase) / h;
      audio[s] = 0.25 * a * v + 0.0003 * noise.Normal();
    }
    double peak = 0.0;
    for (double v : audio) peak = std::max(peak, std::abs(v));
    if (peak > 0.9)
      for (double &v : audio) v *= 0.9 / peak;

    const std::string sid(id);
    video::SaveRawVideo((fs::path(out_dir) / "raw" / (sid + ".vid")).string(), raw);
    video::SaveLandmarks((fs::path(out_dir) / "landmarks" / (sid + ".lmk")).string(), LandmarkTrack(track));
    dsp::WriteWav((fs::path(out_dir) / "audio" / (sid + ".wav")).string(), Waveform::Clipped(audio));

    ManifestEntry e;
    e.id = sid;
    e.video_path = "raw/" + sid + ".vid";
    e.audio_path = "audio/" + sid + ".wav";
    e.landmarks_path = "landmarks/" + sid + ".lmk";
    e.speaker_id = "spk" + std::to_string(i % speakers);
    e.speaker_embedding_path = "embeddings/" + e.speaker_id + ".emb";
    e.split = Split::kTrain;
    e.duration_s = static_cast<double>(T) / kVideoFps;
    entries.push_back(e);
  }
  const std::string manifest = (fs::path(out_dir) / "manifest.txt").string();
  SaveManifest(manifest, entries);
  return manifest;
}

}  // namespace svts::training

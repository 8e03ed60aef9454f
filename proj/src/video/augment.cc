// src/video/augment.cc

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

#include "svts/video/augment.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "svts/core/error.h"
#include "svts/core/rng.h"

namespace svts::video {

void AugmentConfig::Validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(hflip_p) || !prob(erase_p))
    throw ValidationError("AugmentConfig: probabilities must lie in [0, 1]");
  if (!(erase_area_min > 0 && erase_area_min <= erase_area_max && erase_area_max < 1))
    throw ValidationError("AugmentConfig: erase area range must be ordered within (0, 1)");
  if (!(erase_aspect_min > 0 && erase_aspect_min <= erase_aspect_max))
    throw ValidationError("AugmentConfig: erase aspect range must be ordered and positive");
  if (crop < 1) throw ValidationError("AugmentConfig: crop must be positive");
  if (time_mask_max_s < 0) throw ValidationError("AugmentConfig: negative time mask");
}

VideoClip Crop(const VideoClip &clip, int top, int left, int size) {
  if (size > clip.height() || size > clip.width())
    throw ValidationError("Crop: input smaller than " + std::to_string(size));
  if (top < 0 || left < 0 || top + size > clip.height() || left + size > clip.width())
    throw ValidationError("Crop: window outside the frame");
  std::vector<double> out(static_cast<size_t>(clip.num_frames()) * size * size);
  size_t k = 0;
  for (int t = 0; t < clip.num_frames(); ++t)
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) out[k++] = clip.at(t, top + y, left + x);
  return VideoClip(clip.num_frames(), size, std::move(out));
}

VideoClip CenterCrop(const VideoClip &clip, int size) {
  if (clip.height() < size || clip.width() < size)
    throw ValidationError("CenterCrop: input smaller than " + std::to_string(size));
  return Crop(clip, (clip.height() - size) / 2, (clip.width() - size) / 2, size);
}

VideoClip FlipHorizontal(const VideoClip &clip) {
  const int side = clip.width();
  std::vector<double> out(clip.pixels().size());
  size_t k = 0;
  for (int t = 0; t < clip.num_frames(); ++t)
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) out[k++] = clip.at(t, y, side - 1 - x);
  return VideoClip(clip.num_frames(), side, std::move(out));
}

namespace {

// Draws a rectangle whose integer area fraction and aspect ratio (h / w) both
// fall inside the configured ranges; up to 10 attempts as in the usual
// random-erasing recipe.
std::optional<EraseRect> DrawEraseRect(int side, const AugmentConfig &cfg, Rng &rng) {
  const double frame_area = static_cast<double>(side) * side;
  const double log_lo = std::log(cfg.erase_aspect_min), log_hi = std::log(cfg.erase_aspect_max);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const double area = rng.Uniform(cfg.erase_area_min, cfg.erase_area_max) * frame_area;
    const double aspect = std::exp(rng.Uniform(log_lo, log_hi));
    const int h = static_cast<int>(std::lround(std::sqrt(area * aspect)));
    const int w = static_cast<int>(std::lround(std::sqrt(area / aspect)));
    if (h < 1 || w < 1 || h >= side || w >= side) continue;
    const double frac = h * w / frame_area;
    const double ratio = static_cast<double>(h) / w;
    if (frac < cfg.erase_area_min || frac > cfg.erase_area_max) continue;
    if (ratio < cfg.erase_aspect_min || ratio > cfg.erase_aspect_max) continue;
    EraseRect r;
    r.height = h;
    r.width = w;
    r.top = static_cast<int>(rng.UniformInt(side - h + 1));
    r.left = static_cast<int>(rng.UniformInt(side - w + 1));
    return r;
  }
  return std::nullopt;
}

}  // namespace

AugmentResult Augment(const VideoClip &clip, const AugmentConfig &cfg, uint64_t seed) {
  cfg.Validate();
  if (clip.height() < cfg.crop)
    throw ValidationError("Augment: input smaller than the crop size");
  Rng rng(seed);
  AugmentTrace trace;
  const int slack = clip.height() - cfg.crop;
  trace.crop_top = static_cast<int>(rng.UniformInt(slack + 1));
  trace.crop_left = static_cast<int>(rng.UniformInt(slack + 1));
  VideoClip out = Crop(clip, trace.crop_top, trace.crop_left, cfg.crop);

  trace.flipped = rng.Bernoulli(cfg.hflip_p);
  if (trace.flipped) out = FlipHorizontal(out);

  // The erase decision is always drawn so later draws do not shift with it.
  const bool erase = rng.Bernoulli(cfg.erase_p);
  if (erase) trace.erase = DrawEraseRect(cfg.crop, cfg, rng);
  if (trace.erase) {
    const EraseRect &r = *trace.erase;
    std::vector<double> px = out.pixels();
    const int side = cfg.crop;
    const size_t n = static_cast<size_t>(side) * side;
    for (int t = 0; t < out.num_frames(); ++t) {
      const double *frame = px.data() + t * n;
      const double mean = std::accumulate(frame, frame + n, 0.0) / static_cast<double>(n);
      for (int y = r.top; y < r.top + r.height; ++y)
        for (int x = r.left; x < r.left + r.width; ++x)
          px[t * n + static_cast<size_t>(y) * side + x] = mean;
    }
    out = VideoClip(out.num_frames(), side, std::move(px));
  }

  if (cfg.time_mask) {
    auto masked = TimeMask(out, cfg.time_mask_max_s, rng.NextU64());
    trace.time_masks = std::move(masked.runs);
    out = std::move(masked.clip);
  }
  return {std::move(out), std::move(trace)};
}

TimeMaskResult TimeMask(const VideoClip &clip, double max_mask_s, uint64_t seed) {
  if (max_mask_s < 0) throw ValidationError("TimeMask: negative max_mask_s");
  Rng rng(seed);
  const auto &src = clip.pixels();
  const double fill = std::accumulate(src.begin(), src.end(), 0.0) / static_cast<double>(src.size());
  const int fps = clip.fps();
  const int seconds = clip.num_frames() / fps;
  std::vector<double> px = src;
  const size_t n = static_cast<size_t>(clip.height()) * clip.width();
  TimeMaskResult result{clip, {}, fill};
  for (int s = 0; s < seconds; ++s) {
    const int length = std::min(fps, static_cast<int>(std::floor(rng.Uniform(0.0, max_mask_s) * fps)));
    const int start = s * fps + static_cast<int>(rng.UniformInt(fps - length + 1));
    if (length == 0) continue;
    for (int t = start; t < start + length; ++t)
      std::fill(px.begin() + t * n, px.begin() + (t + 1) * n, fill);
    result.runs.push_back({start, length});
  }
  result.clip = VideoClip(clip.num_frames(), clip.height(), std::move(px));
  return result;
}

}  // namespace svts::video

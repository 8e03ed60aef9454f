// include/svts/video/augment.h

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

#ifndef SVTS_VIDEO_AUGMENT_H_
#define SVTS_VIDEO_AUGMENT_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "svts/core/types.h"

namespace svts::video {

struct AugmentConfig {
  int crop = kModelCropSize;
  double hflip_p = 0.5;
  double erase_p = 0.5;
  double erase_area_min = 0.02;
  double erase_area_max = 0.33;
  double erase_aspect_min = 0.3;
  double erase_aspect_max = 3.3;
  // Long-sentence recipe only.
  bool time_mask = false;
  double time_mask_max_s = 0.4;

  void Validate() const;
};

struct EraseRect {
  int top = 0;
  int left = 0;
  int height = 0;
  int width = 0;
};

struct MaskRun {
  int start = 0;
  int length = 0;
};

// What a random draw did, for diagnostics and tests.
struct AugmentTrace {
  int crop_top = 0;
  int crop_left = 0;
  bool flipped = false;
  std::optional<EraseRect> erase;
  std::vector<MaskRun> time_masks;
};

struct AugmentResult {
  VideoClip clip;
  AugmentTrace trace;
};

// One random crop shared by all frames, then a clip-wide horizontal flip with
// probability hflip_p, then with probability erase_p one rectangle (same on
// every frame) filled with each frame's mean, then optional time masking.
AugmentResult Augment(const VideoClip &clip, const AugmentConfig &cfg,
                      uint64_t seed);

VideoClip CenterCrop(const VideoClip &clip, int size = kModelCropSize);
VideoClip Crop(const VideoClip &clip, int top, int left, int size);
VideoClip FlipHorizontal(const VideoClip &clip);

struct TimeMaskResult {
  VideoClip clip;
  std::vector<MaskRun> runs;
  double fill = 0.0;
};

// For each full second of video, replaces one contiguous run of
// floor(U(0, max_mask_s) * fps) frames, placed inside that second, with the
// clip-wide mean pixel value.
TimeMaskResult TimeMask(const VideoClip &clip, double max_mask_s, uint64_t seed);

}  // namespace svts::video

#endif  // SVTS_VIDEO_AUGMENT_H_

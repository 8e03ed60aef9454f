// include/svts/video/clip_io.h

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

#ifndef SVTS_VIDEO_CLIP_IO_H_
#define SVTS_VIDEO_CLIP_IO_H_

#include <string>
#include <vector>

#include "svts/core/types.h"

namespace svts::video {

// Source frames before alignment: T x H x W x C with C = 1 (gray) or 3 (RGB),
// values in [0, 1], channel-interleaved.
struct RawVideo {
  int num_frames = 0;
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<double> pixels;

  double at(int t, int y, int x, int c = 0) const {
    return pixels[((static_cast<size_t>(t) * height + y) * width + x) * channels + c];
  }
  void Validate() const;
  // Single-channel luma (ITU-R BT.601 weights).
  RawVideo ToGray() const;
};

// Video tensor file:
//   line 1: "SVTSVID <T> <H> <W> <C>\n"
//   body:   T*H*W*C little-endian float32 in [0, 1], row-major (t, y, x, c).
// LoadRawVideo also accepts a directory of binary PGM (P5) or PPM (P6) frames,
// read in lexicographic filename order.
RawVideo LoadRawVideo(const std::string &path);
void SaveRawVideo(const std::string &path, const RawVideo &video);

// Stored mouth crops use the same tensor format with C = 1.
VideoClip LoadClip(const std::string &path);
void SaveClip(const std::string &path, const VideoClip &clip);
RawVideo ClipToRaw(const VideoClip &clip);

// Writes one binary PGM per frame (frame_00000.pgm, ...).
void SaveFramesAsPgm(const std::string &dir, const RawVideo &video);

}  // namespace svts::video

#endif  // SVTS_VIDEO_CLIP_IO_H_

// include/svts/video/landmarks.h

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

#ifndef SVTS_VIDEO_LANDMARKS_H_
#define SVTS_VIDEO_LANDMARKS_H_

#include <string>

#include "svts/core/speaker_embedding.h"
#include "svts/core/types.h"

namespace svts::video {

// Landmark file:
//   line 1: "SVTSLMK <binary|text> <T>\n"
//   body:   T * 68 * 2 float32 values, frame-major then point then (x, y);
//           little-endian binary or whitespace-separated text.
LandmarkTrack LoadLandmarks(const std::string &path);
void SaveLandmarks(const std::string &path, const LandmarkTrack &track,
                   ArrayFormat format = ArrayFormat::kBinary);

// Reference face: 68 lines of "x y" (lines starting with '#' are skipped).
LandmarkFrame LoadMeanFace(const std::string &path = SVTS_DEFAULT_MEAN_FACE);

// Replaces every frame by the mean over frames [t - window/2, t + (window-1)/2]
// (i.e. [t-6, t+5] for the default 12), truncated at the clip boundaries.
LandmarkTrack SmoothLandmarks(const LandmarkTrack &track, int window = 12);

// Index ranges into the 68-point layout.
inline constexpr int kMouthFirst = 48;
inline constexpr int kMouthLast = 67;
// Eye corners and nose bridge; unaffected by articulation.
inline constexpr int kStablePoints[] = {27, 28, 29, 30, 36, 39, 42, 45};

}  // namespace svts::video

#endif  // SVTS_VIDEO_LANDMARKS_H_

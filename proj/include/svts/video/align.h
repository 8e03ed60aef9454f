// include/svts/video/align.h

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

#ifndef SVTS_VIDEO_ALIGN_H_
#define SVTS_VIDEO_ALIGN_H_

#include <optional>
#include <span>
#include <vector>

#include "svts/core/types.h"
#include "svts/video/clip_io.h"

namespace svts::video {

// p -> s R p + t with R a rotation: x' = a x - b y + tx, y' = b x + a y + ty.
struct SimilarityTransform {
  double a = 1.0;
  double b = 0.0;
  double tx = 0.0;
  double ty = 0.0;

  Point2 Apply(const Point2 &p) const;
  SimilarityTransform Inverse() const;
  double scale() const;
  double angle() const;
};

// Least-squares similarity mapping src onto dst (Umeyama, no reflection).
// Returns nullopt when the source points are coincident or collinear.
std::optional<SimilarityTransform> EstimateSimilarity(std::span<const Point2> src,
                                                      std::span<const Point2> dst);

struct AlignOptions {
  int crop_size = kStoredCropSize;
  int smoothing_window = 12;
};

struct AlignResult {
  VideoClip clip;
  // Frames whose landmarks were degenerate; they reuse the transform of the
  // nearest valid frame.
  std::vector<int> flagged_frames;
  std::vector<SimilarityTransform> transforms;
};

// Smooths the track, aligns every frame to `mean_face` with a similarity fit
// on the stable points, crops crop_size x crop_size around the aligned mouth
// centroid (points 48-67) with bilinear sampling, and converts to grayscale.
// Throws ValidationError if frame counts differ or no frame is usable.
AlignResult AlignAndCrop(const RawVideo &frames, const LandmarkTrack &track,
                         const LandmarkFrame &mean_face,
                         const AlignOptions &opts = {});

// Bilinear sample of one gray frame with clamp-to-edge; integer coordinates
// are pixel centres.
double SampleBilinear(const RawVideo &gray, int t, double x, double y);

}  // namespace svts::video

#endif  // SVTS_VIDEO_ALIGN_H_

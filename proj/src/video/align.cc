// src/video/align.cc

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

#include "svts/video/align.h"

#include <algorithm>
#include <cmath>

#include "svts/core/error.h"
#include "svts/video/landmarks.h"

namespace svts::video {

Point2 SimilarityTransform::Apply(const Point2 &p) const {
  return {a * p.x - b * p.y + tx, b * p.x + a * p.y + ty};
}

SimilarityTransform SimilarityTransform::Inverse() const {
  // (a + ib)^-1 = (a - ib) / (a^2 + b^2); t' = -w^-1 t.
  const double d = a * a + b * b;
  SimilarityTransform inv{a / d, -b / d, 0.0, 0.0};
  const Point2 t = inv.Apply({tx, ty});
  inv.tx = -t.x;
  inv.ty = -t.y;
  return inv;
}

double SimilarityTransform::scale() const { return std::hypot(a, b); }
double SimilarityTransform::angle() const { return std::atan2(b, a); }

std::optional<SimilarityTransform> EstimateSimilarity(std::span<const Point2> src,
                                                      std::span<const Point2> dst) {
  if (src.size() != dst.size() || src.size() < 2)
    throw ShapeError("EstimateSimilarity: need >= 2 matching points");
  const double n = static_cast<double>(src.size());
  Point2 ms, md;
  for (size_t i = 0; i < src.size(); ++i) {
    ms.x += src[i].x / n;
    ms.y += src[i].y / n;
    md.x += dst[i].x / n;
    md.y += dst[i].y / n;
  }
  double sxx = 0, syy = 0, sxy = 0, num_re = 0, num_im = 0;
  for (size_t i = 0; i < src.size(); ++i) {
    const double zx = src[i].x - ms.x, zy = src[i].y - ms.y;
    const double dx = dst[i].x - md.x, dy = dst[i].y - md.y;
    sxx += zx * zx;
    syy += zy * zy;
    sxy += zx * zy;
    // conj(z) * d
    num_re += zx * dx + zy * dy;
    num_im += zx * dy - zy * dx;
  }
  const double total = sxx + syy;
  if (!(total > 1e-9)) return std::nullopt;  // coincident
  // Eigenvalues of the 2x2 scatter matrix; a vanishing minor axis means the
  // points are collinear.
  const double half_tr = total / 2.0;
  const double disc = std::sqrt(std::max(0.0, half_tr * half_tr - (sxx * syy - sxy * sxy)));
  const double minor = half_tr - disc, major = half_tr + disc;
  if (minor < 1e-6 * major) return std::nullopt;
  SimilarityTransform t{num_re / total, num_im / total, 0.0, 0.0};
  const Point2 m = t.Apply(ms);
  t.tx = md.x - m.x;
  t.ty = md.y - m.y;
  return t;
}

double SampleBilinear(const RawVideo &gray, int t, double x, double y) {
  x = std::clamp(x, 0.0, static_cast<double>(gray.width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(gray.height - 1));
  const int x0 = std::min(static_cast<int>(x), gray.width - 1);
  const int y0 = std::min(static_cast<int>(y), gray.height - 1);
  const int x1 = std::min(x0 + 1, gray.width - 1);
  const int y1 = std::min(y0 + 1, gray.height - 1);
  const double fx = x - x0, fy = y - y0;
  const double top = gray.at(t, y0, x0) * (1 - fx) + gray.at(t, y0, x1) * fx;
  const double bottom = gray.at(t, y1, x0) * (1 - fx) + gray.at(t, y1, x1) * fx;
  return top * (1 - fy) + bottom * fy;
}

AlignResult AlignAndCrop(const RawVideo &frames, const LandmarkTrack &track,
                         const LandmarkFrame &mean_face, const AlignOptions &opts) {
  frames.Validate();
  if (frames.num_frames != track.num_frames())
    throw ValidationError("AlignAndCrop: video has " + std::to_string(frames.num_frames) +
                          " frames but landmarks have " + std::to_string(track.num_frames()));
  track.CheckBounds(frames.width, frames.height);
  const RawVideo gray = frames.ToGray();
  const LandmarkTrack smooth = SmoothLandmarks(track, opts.smoothing_window);
  const int T = frames.num_frames;

  std::vector<Point2> ref;
  for (int idx : kStablePoints) ref.push_back(mean_face[idx]);

  std::vector<std::optional<SimilarityTransform>> fits(T);
  std::vector<int> flagged;
  for (int t = 0; t < T; ++t) {
    std::vector<Point2> src;
    for (int idx : kStablePoints) src.push_back(smooth.frame(t)[idx]);
    fits[t] = EstimateSimilarity(src, ref);
    if (!fits[t]) flagged.push_back(t);
  }
  if (static_cast<int>(flagged.size()) == T)
    throw ValidationError("AlignAndCrop: landmarks degenerate in every frame");

  std::vector<SimilarityTransform> transforms(T);
  for (int t = 0; t < T; ++t) {
    if (fits[t]) {
      transforms[t] = *fits[t];
      continue;
    }
    for (int d = 1; d < T; ++d) {
      if (t - d >= 0 && fits[t - d]) { transforms[t] = *fits[t - d]; break; }
      if (t + d < T && fits[t + d]) { transforms[t] = *fits[t + d]; break; }
    }
  }

  const int size = opts.crop_size;
  const double half = (size - 1) / 2.0;
  std::vector<double> pixels(static_cast<size_t>(T) * size * size);
  for (int t = 0; t < T; ++t) {
    const SimilarityTransform &fwd = transforms[t];
    Point2 centre;
    for (int p = kMouthFirst; p <= kMouthLast; ++p) {
      const Point2 q = fwd.Apply(smooth.frame(t)[p]);
      centre.x += q.x;
      centre.y += q.y;
    }
    const double count = kMouthLast - kMouthFirst + 1;
    centre.x /= count;
    centre.y /= count;
    const SimilarityTransform inv = fwd.Inverse();
    for (int v = 0; v < size; ++v)
      for (int u = 0; u < size; ++u) {
        const Point2 src = inv.Apply({centre.x - half + u, centre.y - half + v});
        pixels[(static_cast<size_t>(t) * size + v) * size + u] =
            std::clamp(SampleBilinear(gray, t, src.x, src.y), 0.0, 1.0);
      }
  }
  return {VideoClip(T, size, std::move(pixels)), std::move(flagged), std::move(transforms)};
}

}  // namespace svts::video

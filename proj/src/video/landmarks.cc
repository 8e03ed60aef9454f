// src/video/landmarks.cc

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

#include "svts/video/landmarks.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "svts/core/binary_io.h"
#include "svts/core/error.h"

namespace svts::video {

LandmarkTrack LoadLandmarks(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open landmarks " + path);
  auto header = ReadHeaderTokens(is);
  if (header.size() != 3 || header[0] != "SVTSLMK")
    throw ParseError(path + ": expected 'SVTSLMK <format> <T>' header", 1);
  const ArrayFormat format = ParseArrayFormat(header[1]);
  const long frames = std::stol(header[2]);
  if (frames < 1) throw ParseError(path + ": T must be positive", 1);
  const size_t count = static_cast<size_t>(frames) * kNumLandmarks * 2;
  std::vector<double> values;
  if (format == ArrayFormat::kBinary) {
    values = ReadF32Array(is, count);
  } else {
    values.resize(count);
    for (size_t i = 0; i < count; ++i)
      if (!(is >> values[i])) throw ParseError(path + ": too few values");
  }
  std::vector<LandmarkFrame> out(frames);
  for (long t = 0; t < frames; ++t)
    for (int p = 0; p < kNumLandmarks; ++p) {
      const size_t base = (static_cast<size_t>(t) * kNumLandmarks + p) * 2;
      out[t][p] = {values[base], values[base + 1]};
    }
  return LandmarkTrack(std::move(out));
}

void SaveLandmarks(const std::string &path, const LandmarkTrack &track,
                   ArrayFormat format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << "SVTSLMK " << ArrayFormatName(format) << ' ' << track.num_frames() << '\n';
  std::vector<double> values;
  values.reserve(static_cast<size_t>(track.num_frames()) * kNumLandmarks * 2);
  for (const auto &f : track.frames())
    for (const auto &p : f) {
      values.push_back(p.x);
      values.push_back(p.y);
    }
  if (format == ArrayFormat::kBinary) {
    WriteF32Array(os, values);
  } else {
    os << std::setprecision(9);
    for (size_t i = 0; i < values.size(); ++i)
      os << static_cast<float>(values[i]) << ((i + 1) % 2 == 0 ? '\n' : ' ');
  }
  if (!os) throw IoError("write failed: " + path);
}

LandmarkFrame LoadMeanFace(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open mean face " + path);
  LandmarkFrame face{};
  std::string line;
  int n = 0;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (n >= kNumLandmarks) throw ParseError(path + ": more than 68 points", lineno);
    std::istringstream ss(line);
    if (!(ss >> face[n].x >> face[n].y)) throw ParseError(path + ": expected 'x y'", lineno);
    ++n;
  }
  if (n != kNumLandmarks) throw ParseError(path + ": expected 68 points, found " + std::to_string(n));
  return face;
}

LandmarkTrack SmoothLandmarks(const LandmarkTrack &track, int window) {
  if (window < 1) throw ValidationError("SmoothLandmarks: window must be >= 1");
  const int frames = track.num_frames();
  const int before = window / 2, after = (window - 1) / 2;
  std::vector<LandmarkFrame> out(frames);
  for (int t = 0; t < frames; ++t) {
    const int lo = std::max(0, t - before), hi = std::min(frames - 1, t + after);
    const double count = hi - lo + 1;
    for (int p = 0; p < kNumLandmarks; ++p) {
      double sx = 0, sy = 0;
      for (int s = lo; s <= hi; ++s) {
        sx += track.frame(s)[p].x;
        sy += track.frame(s)[p].y;
      }
      out[t][p] = {sx / count, sy / count};
    }
  }
  return LandmarkTrack(std::move(out));
}

}  // namespace svts::video

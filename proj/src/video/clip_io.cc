// src/video/clip_io.cc

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

#include "svts/video/clip_io.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "svts/core/binary_io.h"
#include "svts/core/error.h"

namespace svts::video {

namespace fs = std::filesystem;

void RawVideo::Validate() const {
  if (num_frames < 1 || height < 1 || width < 1)
    throw ValidationError("RawVideo: empty dimensions");
  if (channels != 1 && channels != 3)
    throw ValidationError("RawVideo: channels must be 1 or 3");
  if (pixels.size() != static_cast<size_t>(num_frames) * height * width * channels)
    throw ValidationError("RawVideo: pixel count mismatch");
  for (double v : pixels)
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("RawVideo: value outside [0, 1]");
}

RawVideo RawVideo::ToGray() const {
  if (channels == 1) return *this;
  RawVideo out{num_frames, height, width, 1, {}};
  const size_t n = static_cast<size_t>(num_frames) * height * width;
  out.pixels.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double *rgb = &pixels[3 * i];
    out.pixels[i] = std::clamp(0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2], 0.0, 1.0);
  }
  return out;
}

namespace {

// Netpbm header token, skipping '#' comments.
std::string PnmToken(std::istream &is) {
  std::string tok;
  char c;
  while (is.get(c)) {
    if (c == '#') {
      std::string rest;
      std::getline(is, rest);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

void ReadPnmFrame(const fs::path &path, RawVideo &video, bool first) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open frame " + path.string());
  const std::string magic = PnmToken(is);
  int channels;
  if (magic == "P5") channels = 1;
  else if (magic == "P6") channels = 3;
  else throw ParseError(path.string() + ": only binary PGM (P5) / PPM (P6) frames are supported");
  const int width = std::stoi(PnmToken(is));
  const int height = std::stoi(PnmToken(is));
  const int maxval = std::stoi(PnmToken(is));
  if (maxval < 1 || maxval > 65535) throw ParseError(path.string() + ": bad maxval");
  if (first) {
    video.width = width;
    video.height = height;
    video.channels = channels;
  } else if (width != video.width || height != video.height || channels != video.channels) {
    throw ValidationError(path.string() + ": frame size or type differs from the first frame");
  }
  const size_t count = static_cast<size_t>(width) * height * channels;
  const int bytes = maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(count * bytes);
  if (!is.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(raw.size())))
    throw ParseError(path.string() + ": truncated pixel data");
  for (size_t i = 0; i < count; ++i) {
    const int v = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
    video.pixels.push_back(static_cast<double>(v) / maxval);
  }
}

}  // namespace

RawVideo LoadRawVideo(const std::string &path) {
  RawVideo video;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(path)) {
      const auto ext = entry.path().extension().string();
      if (ext == ".pgm" || ext == ".ppm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError(path + ": no .pgm/.ppm frames");
    for (size_t i = 0; i < files.size(); ++i) ReadPnmFrame(files[i], video, i == 0);
    video.num_frames = static_cast<int>(files.size());
    video.Validate();
    return video;
  }
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open video " + path);
  auto header = ReadHeaderTokens(is);
  if (header.size() != 5 || header[0] != "SVTSVID")
    throw ParseError(path + ": expected 'SVTSVID <T> <H> <W> <C>' header", 1);
  video.num_frames = std::stoi(header[1]);
  video.height = std::stoi(header[2]);
  video.width = std::stoi(header[3]);
  video.channels = std::stoi(header[4]);
  if (video.num_frames < 1 || video.height < 1 || video.width < 1)
    throw ParseError(path + ": bad dimensions", 1);
  video.pixels = ReadF32Array(
      is, static_cast<size_t>(video.num_frames) * video.height * video.width * video.channels);
  video.Validate();
  return video;
}

void SaveRawVideo(const std::string &path, const RawVideo &video) {
  video.Validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << "SVTSVID " << video.num_frames << ' ' << video.height << ' ' << video.width
     << ' ' << video.channels << '\n';
  WriteF32Array(os, video.pixels);
  if (!os) throw IoError("write failed: " + path);
}

RawVideo ClipToRaw(const VideoClip &clip) {
  return RawVideo{clip.num_frames(), clip.height(), clip.width(), 1, clip.pixels()};
}

VideoClip LoadClip(const std::string &path) {
  RawVideo raw = LoadRawVideo(path);
  if (raw.channels != 1) raw = raw.ToGray();
  if (raw.height != raw.width)
    throw ValidationError(path + ": clip frames must be square");
  // float32 round-off can push values a hair outside [0, 1].
  for (auto &v : raw.pixels) v = std::clamp(v, 0.0, 1.0);
  return VideoClip(raw.num_frames, raw.height, std::move(raw.pixels));
}

void SaveClip(const std::string &path, const VideoClip &clip) {
  SaveRawVideo(path, ClipToRaw(clip));
}

void SaveFramesAsPgm(const std::string &dir, const RawVideo &video) {
  video.Validate();
  fs::create_directories(dir);
  for (int t = 0; t < video.num_frames; ++t) {
    std::ostringstream name;
    name << "frame_" << std::setw(5) << std::setfill('0') << t
         << (video.channels == 1 ? ".pgm" : ".ppm");
    std::ofstream os(fs::path(dir) / name.str(), std::ios::binary);
    if (!os) throw IoError("cannot write frame in " + dir);
    os << (video.channels == 1 ? "P5" : "P6") << '\n'
       << video.width << ' ' << video.height << "\n255\n";
    const size_t n = static_cast<size_t>(video.height) * video.width * video.channels;
    std::string buf(n, '\0');
    for (size_t i = 0; i < n; ++i)
      buf[i] = static_cast<char>(std::lround(video.pixels[t * n + i] * 255.0));
    os.write(buf.data(), static_cast<std::streamsize>(n));
  }
}

}  // namespace svts::video

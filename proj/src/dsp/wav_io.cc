// src/dsp/wav_io.cc

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

#include "svts/dsp/wav_io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "svts/core/binary_io.h"
#include "svts/core/error.h"

namespace svts::dsp {

namespace {

uint16_t ReadU16(std::istream &is) {
  unsigned char b[2];
  if (!is.read(reinterpret_cast<char *>(b), 2)) throw ParseError("truncated WAV");
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

void WriteU16(std::ostream &os, uint16_t v) {
  const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  os.write(b, 2);
}

std::string Tag(std::istream &is) {
  char t[4];
  if (!is.read(t, 4)) throw ParseError("truncated WAV");
  return std::string(t, 4);
}

}  // namespace

WavData ReadWavData(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open WAV " + path);
  if (Tag(is) != "RIFF") throw ParseError(path + ": not a RIFF file");
  ReadU32(is);
  if (Tag(is) != "WAVE") throw ParseError(path + ": not a WAVE file");
  int format = 0, channels = 0, rate = 0, bits = 0;
  bool have_fmt = false;
  while (true) {
    std::string tag = Tag(is);
    uint32_t size = ReadU32(is);
    if (tag == "fmt ") {
      format = ReadU16(is);
      channels = ReadU16(is);
      rate = static_cast<int>(ReadU32(is));
      ReadU32(is);
      ReadU16(is);
      bits = ReadU16(is);
      if (size > 16) is.ignore(size - 16);
      have_fmt = true;
    } else if (tag == "data") {
      if (!have_fmt) throw ParseError(path + ": data chunk before fmt chunk");
      WavData out;
      out.sample_rate = rate;
      out.channels = channels;
      if (format == 1 && bits == 16) {
        const size_t n = size / 2;
        std::vector<char> raw(size);
        if (!is.read(raw.data(), size)) throw ParseError(path + ": truncated data");
        out.samples.resize(n);
        for (size_t i = 0; i < n; ++i) {
          int16_t s;
          uint16_t u = static_cast<uint16_t>(static_cast<unsigned char>(raw[2 * i]) |
                                             (static_cast<unsigned char>(raw[2 * i + 1]) << 8));
          std::memcpy(&s, &u, 2);
          out.samples[i] = s / 32768.0;
        }
      } else if (format == 3 && bits == 32) {
        out.samples = ReadF32Array(is, size / 4);
      } else {
        throw ParseError(path + ": unsupported WAV encoding (format " +
                         std::to_string(format) + ", " + std::to_string(bits) + " bits)");
      }
      return out;
    } else {
      is.ignore(size + (size & 1));
    }
    if (!is) throw ParseError(path + ": no data chunk");
  }
}

Waveform ReadWav(const std::string &path) {
  WavData d = ReadWavData(path);
  if (d.channels != 1) throw ValidationError(path + ": expected mono audio");
  if (d.sample_rate != kSampleRate)
    throw ValidationError(path + ": expected 24000 Hz, found " + std::to_string(d.sample_rate));
  for (auto &s : d.samples) s = std::clamp(s, -1.0, 1.0);
  return Waveform(std::move(d.samples), d.sample_rate);
}

void WriteWav(const std::string &path, const Waveform &wav) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write WAV " + path);
  const uint32_t data_bytes = static_cast<uint32_t>(wav.size() * 2);
  os.write("RIFF", 4);
  WriteU32(os, 36 + data_bytes);
  os.write("WAVEfmt ", 8);
  WriteU32(os, 16);
  WriteU16(os, 1);
  WriteU16(os, 1);
  WriteU32(os, static_cast<uint32_t>(wav.sample_rate()));
  WriteU32(os, static_cast<uint32_t>(wav.sample_rate() * 2));
  WriteU16(os, 2);
  WriteU16(os, 16);
  os.write("data", 4);
  WriteU32(os, data_bytes);
  std::string buf(data_bytes, '\0');
  for (size_t i = 0; i < wav.size(); ++i) {
    const double v = std::clamp(wav.samples()[i], -1.0, 1.0);
    const auto s = static_cast<int16_t>(std::lround(v * 32767.0));
    const auto u = static_cast<uint16_t>(s);
    buf[2 * i] = static_cast<char>(u & 0xff);
    buf[2 * i + 1] = static_cast<char>(u >> 8);
  }
  os.write(buf.data(), data_bytes);
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace svts::dsp

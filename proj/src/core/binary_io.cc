// src/core/binary_io.cc

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

#include "svts/core/binary_io.h"

#include <bit>
#include <cstring>
#include <filesystem>
#include <istream>
#include <ostream>
#include <sstream>

#include "svts/core/error.h"

namespace svts {

namespace {

template <typename T>
void PutLe(std::ostream &os, T v) {
  unsigned char buf[sizeof(T)];
  for (size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char *>(buf), sizeof(T));
}

template <typename T>
T GetLe(std::istream &is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char *>(buf), sizeof(T)))
    throw ParseError("unexpected end of binary data");
  T v = 0;
  for (size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void WriteU32(std::ostream &os, uint32_t v) { PutLe(os, v); }
void WriteU64(std::ostream &os, uint64_t v) { PutLe(os, v); }
void WriteF32(std::ostream &os, float v) { PutLe(os, std::bit_cast<uint32_t>(v)); }
void WriteF64(std::ostream &os, double v) { PutLe(os, std::bit_cast<uint64_t>(v)); }

void WriteF32Array(std::ostream &os, std::span<const double> values) {
  std::string buf(values.size() * 4, '\0');
  for (size_t i = 0; i < values.size(); ++i) {
    uint32_t u = std::bit_cast<uint32_t>(static_cast<float>(values[i]));
    for (int b = 0; b < 4; ++b) buf[4 * i + b] = static_cast<char>((u >> (8 * b)) & 0xff);
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void WriteF64Array(std::ostream &os, std::span<const double> values) {
  for (double v : values) WriteF64(os, v);
}

uint32_t ReadU32(std::istream &is) { return GetLe<uint32_t>(is); }
uint64_t ReadU64(std::istream &is) { return GetLe<uint64_t>(is); }
float ReadF32(std::istream &is) { return std::bit_cast<float>(GetLe<uint32_t>(is)); }
double ReadF64(std::istream &is) { return std::bit_cast<double>(GetLe<uint64_t>(is)); }

std::vector<double> ReadF32Array(std::istream &is, size_t count) {
  std::string buf(count * 4, '\0');
  if (!is.read(buf.data(), static_cast<std::streamsize>(buf.size())))
    throw ParseError("unexpected end of float32 data");
  std::vector<double> out(count);
  for (size_t i = 0; i < count; ++i) {
    uint32_t u = 0;
    for (int b = 0; b < 4; ++b)
      u |= static_cast<uint32_t>(static_cast<unsigned char>(buf[4 * i + b])) << (8 * b);
    out[i] = std::bit_cast<float>(u);
  }
  return out;
}

std::vector<double> ReadF64Array(std::istream &is, size_t count) {
  std::vector<double> out(count);
  for (auto &v : out) v = ReadF64(is);
  return out;
}

std::vector<std::string> ReadHeaderTokens(std::istream &is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("missing header line", 1);
  std::istringstream ss(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

bool FileExists(const std::string &path) {
  std::error_code ec;
  return std::filesystem::exists(path, ec);
}

std::string ResolveRelative(const std::string &anchor_file,
                            const std::string &path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(anchor_file).parent_path() / p).string();
}

}  // namespace svts

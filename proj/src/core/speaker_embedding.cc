// src/core/speaker_embedding.cc

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

#include "svts/core/speaker_embedding.h"

#include <fstream>
#include <iomanip>

#include "svts/core/binary_io.h"
#include "svts/core/error.h"

namespace svts {

ArrayFormat ParseArrayFormat(const std::string &token) {
  if (token == "binary") return ArrayFormat::kBinary;
  if (token == "text") return ArrayFormat::kText;
  throw ParseError("unknown array format '" + token + "'", 1);
}

std::string ArrayFormatName(ArrayFormat format) {
  return format == ArrayFormat::kBinary ? "binary" : "text";
}

SpeakerEmbedding LoadSpeakerEmbedding(const std::string &path,
                                      const std::string &speaker_id) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open speaker embedding " + path);
  auto header = ReadHeaderTokens(is);
  if (header.size() != 3 || header[0] != "SVTSEMB")
    throw ParseError(path + ": expected 'SVTSEMB <format> <D>' header", 1);
  const ArrayFormat format = ParseArrayFormat(header[1]);
  long dim = std::stol(header[2]);
  if (dim < 1) throw ParseError(path + ": dimension must be positive", 1);
  Vector v(dim);
  if (format == ArrayFormat::kBinary) {
    auto values = ReadF32Array(is, static_cast<size_t>(dim));
    for (long i = 0; i < dim; ++i) v[i] = values[i];
  } else {
    for (long i = 0; i < dim; ++i) {
      if (!(is >> v[i])) throw ParseError(path + ": too few values", 2);
    }
  }
  // float32 storage rounds the norm by ~1e-7, well inside the tolerance.
  return SpeakerEmbedding(std::move(v), speaker_id);
}

void SaveSpeakerEmbedding(const std::string &path, const SpeakerEmbedding &emb,
                          ArrayFormat format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << "SVTSEMB " << ArrayFormatName(format) << ' ' << emb.dim() << '\n';
  const Vector &v = emb.vector();
  if (format == ArrayFormat::kBinary) {
    WriteF32Array(os, {v.data(), static_cast<size_t>(v.size())});
  } else {
    os << std::setprecision(9);
    for (long i = 0; i < v.size(); ++i) os << static_cast<float>(v[i]) << (i + 1 < v.size() ? ' ' : '\n');
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace svts

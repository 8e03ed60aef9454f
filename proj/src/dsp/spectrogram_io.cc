// src/dsp/spectrogram_io.cc

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

#include "svts/dsp/spectrogram_io.h"

#include <fstream>

#include "svts/core/binary_io.h"
#include "svts/core/error.h"

namespace svts::dsp {

void WriteMatrixFile(const std::string &path, const Matrix &m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  WriteU64(os, static_cast<uint64_t>(m.rows()));
  WriteU64(os, static_cast<uint64_t>(m.cols()));
  WriteF32Array(os, {m.data(), static_cast<size_t>(m.size())});
  if (!os) throw IoError("write failed: " + path);
}

Matrix ReadMatrixFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  const uint64_t rows = ReadU64(is), cols = ReadU64(is);
  if (rows > (1u << 28) || cols > (1u << 20) || rows * cols > (1ull << 31))
    throw ParseError(path + ": implausible dimensions");
  auto values = ReadF32Array(is, rows * cols);
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

void WriteMelFile(const std::string &path, const MelSpectrogram &mel) {
  WriteMatrixFile(path, mel.values());
}

MelSpectrogram ReadMelFile(const std::string &path) {
  return MelSpectrogram(ReadMatrixFile(path));
}

}  // namespace svts::dsp

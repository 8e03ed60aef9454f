// include/svts/core/binary_io.h

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

#ifndef SVTS_CORE_BINARY_IO_H_
#define SVTS_CORE_BINARY_IO_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace svts {

// Little-endian primitives.  Data files store IEEE-754 binary32; checkpoints
// store binary64 so that training resumes exactly.
void WriteU32(std::ostream &os, uint32_t v);
void WriteU64(std::ostream &os, uint64_t v);
void WriteF32(std::ostream &os, float v);
void WriteF64(std::ostream &os, double v);
void WriteF32Array(std::ostream &os, std::span<const double> values);
void WriteF64Array(std::ostream &os, std::span<const double> values);

uint32_t ReadU32(std::istream &is);
uint64_t ReadU64(std::istream &is);
float ReadF32(std::istream &is);
double ReadF64(std::istream &is);
std::vector<double> ReadF32Array(std::istream &is, size_t count);
std::vector<double> ReadF64Array(std::istream &is, size_t count);

// Reads one '\n'-terminated header line and splits it on whitespace.
std::vector<std::string> ReadHeaderTokens(std::istream &is);

bool FileExists(const std::string &path);
// Resolves `path` against the directory of `anchor_file` unless absolute.
std::string ResolveRelative(const std::string &anchor_file,
                            const std::string &path);

}  // namespace svts

#endif  // SVTS_CORE_BINARY_IO_H_

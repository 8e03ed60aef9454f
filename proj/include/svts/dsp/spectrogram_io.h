// include/svts/dsp/spectrogram_io.h

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

#ifndef SVTS_DSP_SPECTROGRAM_IO_H_
#define SVTS_DSP_SPECTROGRAM_IO_H_

#include <string>

#include "svts/core/types.h"

namespace svts::dsp {

// Spectrogram file: rows and cols as two little-endian uint64, followed by
// rows * cols little-endian float32 values in row-major order.  No magic.
void WriteMatrixFile(const std::string &path, const Matrix &m);
Matrix ReadMatrixFile(const std::string &path);

void WriteMelFile(const std::string &path, const MelSpectrogram &mel);
MelSpectrogram ReadMelFile(const std::string &path);

}  // namespace svts::dsp

#endif  // SVTS_DSP_SPECTROGRAM_IO_H_

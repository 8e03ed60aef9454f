// include/svts/dsp/wav_io.h

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

#ifndef SVTS_DSP_WAV_IO_H_
#define SVTS_DSP_WAV_IO_H_

#include <string>
#include <vector>

#include "svts/core/types.h"

namespace svts::dsp {

struct WavData {
  int sample_rate = 0;
  int channels = 0;
  // Interleaved samples scaled to [-1, 1).
  std::vector<double> samples;
};

// Reads RIFF/WAVE with 16-bit PCM or 32-bit IEEE float samples.
WavData ReadWavData(const std::string &path);
// Reads a mono 24 kHz file (other rates or channel counts are rejected).
Waveform ReadWav(const std::string &path);
// Writes mono 16-bit little-endian PCM.
void WriteWav(const std::string &path, const Waveform &wav);

}  // namespace svts::dsp

#endif  // SVTS_DSP_WAV_IO_H_

// include/svts/eval/stoi.h

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

#ifndef SVTS_EVAL_STOI_H_
#define SVTS_EVAL_STOI_H_

#include <span>

#include "svts/core/types.h"

namespace svts::eval {

// Short-time objective intelligibility of `deg` against the clean `ref`.
// Both signals are truncated to the shorter length and resampled to the
// 10 kHz analysis rate.  Frames more than 40 dB below the loudest reference
// frame are dropped before analysis (15 third-octave bands from 150 Hz,
// 256-sample frames, 30-frame segments).  Throws ValidationError when
// fewer than one segment of frames survives.
double Stoi(const Waveform &ref, const Waveform &deg);
double Stoi(std::span<const double> ref, std::span<const double> deg,
            int sample_rate);

// Extended STOI: correlations over spectro-temporal segments normalised
// first along time and then along frequency.
double Estoi(const Waveform &ref, const Waveform &deg);
double Estoi(std::span<const double> ref, std::span<const double> deg,
             int sample_rate);

}  // namespace svts::eval

#endif  // SVTS_EVAL_STOI_H_

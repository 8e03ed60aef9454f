// include/svts/dsp/resample.h

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

#ifndef SVTS_DSP_RESAMPLE_H_
#define SVTS_DSP_RESAMPLE_H_

#include <span>
#include <vector>

namespace svts::dsp {

// Rational resampling by up/down with the Kaiser-windowed sinc filter that
// Octave's resample() designs (60 dB rejection, roll-off of a tenth of the
// cut-off), applied polyphase with zero-phase alignment.  Output length is
// ceil(n * up / down).
std::vector<double> ResampleOctave(std::span<const double> x, int up, int down);

// Zeroth-order modified Bessel function of the first kind.
double BesselI0(double x);

}  // namespace svts::dsp

#endif  // SVTS_DSP_RESAMPLE_H_

// include/svts/dsp/griffin_lim.h

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

#ifndef SVTS_DSP_GRIFFIN_LIM_H_
#define SVTS_DSP_GRIFFIN_LIM_H_

#include <cstdint>
#include <vector>

#include "svts/core/types.h"
#include "svts/dsp/stft.h"

namespace svts::dsp {

struct GriffinLimOptions {
  int iterations = 30;
  // Fast Griffin-Lim acceleration; 0 gives the classic algorithm.
  double momentum = 0.99;
  uint64_t seed = 0;
  StftConfig stft;
};

struct GriffinLimResult {
  std::vector<double> samples;
  // history[i] = spectral convergence of the estimate after i+1 iterations,
  // measured on the consistent (re-analysed) spectrogram.
  std::vector<double> history;
};

// ||target - estimate||_F / ||target||_F (0 when the target is all zero and
// the estimate matches it).
double SpectralConvergence(const Matrix &estimate, const Matrix &target);

// Phase reconstruction from a magnitude spectrogram, random initial phase
// drawn from `seed`.  Output has F * hop samples.
GriffinLimResult GriffinLimDetailed(const LinearSpectrogram &mag,
                                    const GriffinLimOptions &opts = {},
                                    bool record_history = false);
// Same, clipped to [-1, 1] as a 24 kHz waveform.
Waveform GriffinLim(const LinearSpectrogram &mag, const GriffinLimOptions &opts = {});

}  // namespace svts::dsp

#endif  // SVTS_DSP_GRIFFIN_LIM_H_

// include/svts/dsp/mel.h

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

#ifndef SVTS_DSP_MEL_H_
#define SVTS_DSP_MEL_H_

#include "svts/core/types.h"
#include "svts/dsp/stft.h"

namespace svts::dsp {

struct MelConfig {
  StftConfig stft;
  int n_mels = kMelBands;
  double fmin = 0.0;
  double fmax = 12000.0;
  // ln(max(energy, log_floor)); ln(1e-10) ~= -23.03 for silence.
  double log_floor = 1e-10;

  void Validate() const;
};

// Slaney mel scale (linear below 1 kHz, logarithmic above).
double HzToMel(double hz);
double MelToHz(double mel);

// n_mels x (n_fft/2+1) triangular filters with Slaney area normalisation.
Matrix MelFilterbank(int n_mels = kMelBands, int n_fft = 2048,
                     int sample_rate = kSampleRate, double fmin = 0.0,
                     double fmax = 12000.0);
// Centre frequency (Hz) of each filter.
std::vector<double> MelCenterFrequencies(int n_mels, double fmin, double fmax);

// Natural-log mel magnitudes, F = floor(N / 300) frames.
MelSpectrogram LogMel(const Waveform &wav, const MelConfig &cfg = {});
// Same on a raw sample buffer (any length >= 1).
Matrix LogMelMatrix(std::span<const double> samples, const MelConfig &cfg = {});

// exp() followed by the pseudo-inverse of the filterbank, negatives clamped to
// zero.
LinearSpectrogram MelToLinear(const MelSpectrogram &mel, const MelConfig &cfg = {});
LinearSpectrogram MelToLinear(const Matrix &log_mel, const MelConfig &cfg = {});

// Trims or zero-pads audio to exactly num_video_frames * 1200 samples, so its
// log-mel has 4 frames per video frame.
Waveform HarmonizeLength(const Waveform &wav, int num_video_frames);

}  // namespace svts::dsp

#endif  // SVTS_DSP_MEL_H_

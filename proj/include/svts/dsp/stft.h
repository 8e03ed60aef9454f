// include/svts/dsp/stft.h

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

#ifndef SVTS_DSP_STFT_H_
#define SVTS_DSP_STFT_H_

#include <complex>
#include <span>
#include <vector>

#include "svts/core/types.h"

namespace svts::dsp {

using ComplexMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                                    Eigen::Dynamic, Eigen::RowMajor>;

// 2048-point FFT, 12.5 ms hop, 50 ms periodic Hann window at 24 kHz.
struct StftConfig {
  int n_fft = 2048;
  int hop_samples = 300;
  int win_samples = 1200;
  int sample_rate = kSampleRate;

  int num_bins() const { return n_fft / 2 + 1; }
  // Reflection padding applied on each side; centres frame f on samples
  // [f*hop, (f+1)*hop) of the input.
  int pad() const { return (n_fft - hop_samples) / 2; }
  void Validate() const;
};

// F x (n_fft/2+1) nonnegative magnitudes.
class LinearSpectrogram {
 public:
  explicit LinearSpectrogram(Matrix magnitudes);
  int num_frames() const { return static_cast<int>(magnitudes_.rows()); }
  int num_bins() const { return static_cast<int>(magnitudes_.cols()); }
  const Matrix &magnitudes() const { return magnitudes_; }

 private:
  Matrix magnitudes_;
};

// Periodic Hann window of the given length.
std::vector<double> HannWindow(int length);

// Frames produced for an input of n samples: floor(max(n, win) / hop).
int NumFrames(size_t num_samples, const StftConfig &cfg = {});

// Centred STFT.  Inputs shorter than the window are zero-padded to it, then
// (n_fft - hop)/2 samples of reflection padding are added on each side.
ComplexMatrix Stft(std::span<const double> samples, const StftConfig &cfg = {});
ComplexMatrix Stft(const Waveform &wav, const StftConfig &cfg = {});

// Least-squares inverse of Stft (weighted overlap-add divided by the summed
// squared window).  Returns `length` samples, default F * hop.
std::vector<double> Istft(const ComplexMatrix &spec, const StftConfig &cfg = {},
                          size_t length = 0);

// Uncentred transforms on the padded domain: frame f covers samples
// [f*hop, f*hop + n_fft).  Used by Griffin-Lim so that each iteration is an
// exact projection.
ComplexMatrix StftUncentered(std::span<const double> padded,
                             const StftConfig &cfg);
std::vector<double> IstftUncentered(const ComplexMatrix &spec,
                                    const StftConfig &cfg);

Matrix Magnitude(const ComplexMatrix &spec);

}  // namespace svts::dsp

#endif  // SVTS_DSP_STFT_H_

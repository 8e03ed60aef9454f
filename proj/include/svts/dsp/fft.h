// include/svts/dsp/fft.h

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

#ifndef SVTS_DSP_FFT_H_
#define SVTS_DSP_FFT_H_

#include <complex>
#include <span>

namespace svts::dsp {

// Real-to-complex FFT of a fixed size, backed by FFTW.  Each instance owns its
// buffers and plans, so an instance must not be shared between threads; create
// one per call site instead (plan creation is serialised internally).
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(const RealFft &) = delete;
  RealFft &operator=(const RealFft &) = delete;

  int size() const { return n_; }
  int num_bins() const { return n_ / 2 + 1; }

  // in: n real samples; out: n/2+1 bins.
  void Forward(std::span<const double> in, std::span<std::complex<double>> out);
  // in: n/2+1 bins; out: n samples, scaled by 1/n (true inverse).
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  int n_;
  double *real_;
  void *spec_;
  void *forward_plan_;
  void *inverse_plan_;
};

}  // namespace svts::dsp

#endif  // SVTS_DSP_FFT_H_

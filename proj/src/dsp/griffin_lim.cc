// src/dsp/griffin_lim.cc

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

#include "svts/dsp/griffin_lim.h"

#include <cmath>
#include <numbers>

#include "svts/core/error.h"
#include "svts/core/rng.h"

namespace svts::dsp {

double SpectralConvergence(const Matrix &estimate, const Matrix &target) {
  if (estimate.rows() != target.rows() || estimate.cols() != target.cols())
    throw ShapeError("SpectralConvergence: shape mismatch");
  const double denom = target.norm();
  const double num = (target - estimate).norm();
  if (denom == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return num / denom;
}

GriffinLimResult GriffinLimDetailed(const LinearSpectrogram &mag,
                                    const GriffinLimOptions &opts,
                                    bool record_history) {
  const StftConfig &cfg = opts.stft;
  cfg.Validate();
  if (mag.num_frames() < 1) throw ValidationError("GriffinLim: empty input");
  if (mag.num_bins() != cfg.num_bins())
    throw ShapeError("GriffinLim: expected " + std::to_string(cfg.num_bins()) + " bins");
  if (opts.iterations < 0) throw ValidationError("GriffinLim: negative iterations");

  const Matrix &target = mag.magnitudes();
  const int frames = mag.num_frames(), bins = mag.num_bins();
  Rng rng(opts.seed);
  ComplexMatrix angles(frames, bins);
  for (int f = 0; f < frames; ++f)
    for (int k = 0; k < bins; ++k)
      angles(f, k) = std::polar(1.0, 2.0 * std::numbers::pi * rng.Uniform());

  GriffinLimResult result;
  ComplexMatrix rebuilt, tprev = ComplexMatrix::Zero(frames, bins);
  const double accel = opts.momentum / (1.0 + opts.momentum);
  constexpr double kEps = 1e-16;
  for (int it = 0; it < opts.iterations; ++it) {
    // Project onto consistent spectrograms with the target magnitude.
    auto inverse = IstftUncentered(target.cast<std::complex<double>>().cwiseProduct(angles), cfg);
    rebuilt = StftUncentered(inverse, cfg);
    angles = rebuilt - accel * tprev;
    for (int f = 0; f < frames; ++f)
      for (int k = 0; k < bins; ++k) {
        const double a = std::abs(angles(f, k));
        angles(f, k) = angles(f, k) / (a + kEps);
      }
    tprev = rebuilt;
    if (record_history) {
      auto x = IstftUncentered(target.cast<std::complex<double>>().cwiseProduct(angles), cfg);
      result.history.push_back(
          SpectralConvergence(Magnitude(StftUncentered(x, cfg)), target));
    }
  }
  auto full = IstftUncentered(target.cast<std::complex<double>>().cwiseProduct(angles), cfg);
  const size_t length = static_cast<size_t>(frames) * cfg.hop_samples;
  result.samples.assign(length, 0.0);
  for (size_t i = 0; i < length; ++i) result.samples[i] = full[cfg.pad() + i];
  return result;
}

Waveform GriffinLim(const LinearSpectrogram &mag, const GriffinLimOptions &opts) {
  return Waveform::Clipped(GriffinLimDetailed(mag, opts).samples, opts.stft.sample_rate);
}

}  // namespace svts::dsp

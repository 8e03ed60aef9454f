// src/dsp/stft.cc

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

#include "svts/dsp/stft.h"

#include <cmath>
#include <numbers>

#include "svts/core/error.h"
#include "svts/dsp/fft.h"

namespace svts::dsp {

void StftConfig::Validate() const {
  if (n_fft < 2 || hop_samples < 1 || win_samples < 1)
    throw ValidationError("StftConfig: sizes must be positive");
  if (win_samples > n_fft)
    throw ValidationError("StftConfig: window longer than FFT");
  if (hop_samples > win_samples)
    throw ValidationError("StftConfig: hop longer than window");
  if ((n_fft - hop_samples) % 2 != 0)
    throw ValidationError("StftConfig: n_fft - hop must be even");
}

LinearSpectrogram::LinearSpectrogram(Matrix magnitudes)
    : magnitudes_(std::move(magnitudes)) {
  if (magnitudes_.size() == 0) throw ValidationError("LinearSpectrogram: empty");
  if (!magnitudes_.allFinite())
    throw ValidationError("LinearSpectrogram: non-finite value");
  if (magnitudes_.minCoeff() < 0.0)
    throw ValidationError("LinearSpectrogram: negative magnitude");
}

std::vector<double> HannWindow(int length) {
  std::vector<double> w(length);
  for (int i = 0; i < length; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / length);
  return w;
}

int NumFrames(size_t num_samples, const StftConfig &cfg) {
  size_t n = std::max(num_samples, static_cast<size_t>(cfg.win_samples));
  return static_cast<int>(n / cfg.hop_samples);
}

namespace {

// Window of length win centred in an n_fft frame.
std::vector<double> PaddedWindow(const StftConfig &cfg) {
  std::vector<double> w(cfg.n_fft, 0.0);
  auto hann = HannWindow(cfg.win_samples);
  const int offset = (cfg.n_fft - cfg.win_samples) / 2;
  for (int i = 0; i < cfg.win_samples; ++i) w[offset + i] = hann[i];
  return w;
}

}  // namespace

ComplexMatrix StftUncentered(std::span<const double> padded,
                             const StftConfig &cfg) {
  cfg.Validate();
  if (padded.size() < static_cast<size_t>(cfg.n_fft))
    throw ShapeError("StftUncentered: input shorter than n_fft");
  const int frames = 1 + static_cast<int>((padded.size() - cfg.n_fft) / cfg.hop_samples);
  const auto window = PaddedWindow(cfg);
  RealFft fft(cfg.n_fft);
  ComplexMatrix out(frames, cfg.num_bins());
  std::vector<double> buf(cfg.n_fft);
  std::vector<std::complex<double>> bins(cfg.num_bins());
  for (int f = 0; f < frames; ++f) {
    const double *src = padded.data() + static_cast<size_t>(f) * cfg.hop_samples;
    for (int i = 0; i < cfg.n_fft; ++i) buf[i] = src[i] * window[i];
    fft.Forward(buf, bins);
    for (int k = 0; k < cfg.num_bins(); ++k) out(f, k) = bins[k];
  }
  return out;
}

std::vector<double> IstftUncentered(const ComplexMatrix &spec,
                                    const StftConfig &cfg) {
  cfg.Validate();
  if (spec.rows() < 1) throw ShapeError("Istft: no frames");
  if (spec.cols() != cfg.num_bins()) throw ShapeError("Istft: bin count mismatch");
  const int frames = static_cast<int>(spec.rows());
  const size_t length = static_cast<size_t>(frames - 1) * cfg.hop_samples + cfg.n_fft;
  const auto window = PaddedWindow(cfg);
  std::vector<double> out(length, 0.0), wsum(length, 0.0);
  RealFft fft(cfg.n_fft);
  std::vector<double> buf(cfg.n_fft);
  std::vector<std::complex<double>> bins(cfg.num_bins());
  for (int f = 0; f < frames; ++f) {
    for (int k = 0; k < cfg.num_bins(); ++k) bins[k] = spec(f, k);
    fft.Inverse(bins, buf);
    const size_t base = static_cast<size_t>(f) * cfg.hop_samples;
    for (int i = 0; i < cfg.n_fft; ++i) {
      out[base + i] += buf[i] * window[i];
      wsum[base + i] += window[i] * window[i];
    }
  }
  for (size_t i = 0; i < length; ++i) out[i] = wsum[i] > 1e-12 ? out[i] / wsum[i] : 0.0;
  return out;
}

ComplexMatrix Stft(std::span<const double> samples, const StftConfig &cfg) {
  cfg.Validate();
  if (samples.empty()) throw ValidationError("Stft: empty waveform");
  std::vector<double> x(samples.begin(), samples.end());
  if (x.size() < static_cast<size_t>(cfg.win_samples)) x.resize(cfg.win_samples, 0.0);
  const int frames = NumFrames(x.size(), cfg);
  const int pad = cfg.pad();
  if (static_cast<size_t>(pad) >= x.size())
    throw ValidationError("Stft: input too short for reflection padding");
  // Only the samples the frames touch are materialised.
  const size_t needed = static_cast<size_t>(frames - 1) * cfg.hop_samples + cfg.n_fft;
  std::vector<double> padded(needed);
  const long n = static_cast<long>(x.size());
  for (size_t i = 0; i < needed; ++i) {
    long j = static_cast<long>(i) - pad;
    // Reflect without repeating the edge sample; period 2(n-1).
    const long period = 2 * (n - 1);
    if (period > 0) {
      j %= period;
      if (j < 0) j += period;
      if (j >= n) j = period - j;
    } else {
      j = 0;
    }
    padded[i] = x[j];
  }
  return StftUncentered(padded, cfg);
}

ComplexMatrix Stft(const Waveform &wav, const StftConfig &cfg) {
  if (wav.sample_rate() != cfg.sample_rate)
    throw ValidationError("Stft: sample rate mismatch");
  return Stft(std::span<const double>(wav.samples()), cfg);
}

std::vector<double> Istft(const ComplexMatrix &spec, const StftConfig &cfg,
                          size_t length) {
  auto full = IstftUncentered(spec, cfg);
  if (length == 0) length = static_cast<size_t>(spec.rows()) * cfg.hop_samples;
  std::vector<double> out(length, 0.0);
  const size_t pad = cfg.pad();
  for (size_t i = 0; i < length && pad + i < full.size(); ++i) out[i] = full[pad + i];
  return out;
}

Matrix Magnitude(const ComplexMatrix &spec) { return spec.cwiseAbs(); }

}  // namespace svts::dsp

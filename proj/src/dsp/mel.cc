// src/dsp/mel.cc

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

#include "svts/dsp/mel.h"

#include <algorithm>
#include <cmath>

#include "svts/core/error.h"

namespace svts::dsp {

namespace {

constexpr double kFSp = 200.0 / 3.0;
constexpr double kMinLogHz = 1000.0;
constexpr double kMinLogMel = kMinLogHz / kFSp;
const double kLogStep = std::log(6.4) / 27.0;

}  // namespace

void MelConfig::Validate() const {
  stft.Validate();
  if (n_mels < 1) throw ValidationError("MelConfig: n_mels < 1");
  if (!(fmin >= 0 && fmin < fmax))
    throw ValidationError("MelConfig: need 0 <= fmin < fmax");
  if (fmax > stft.sample_rate / 2.0)
    throw ValidationError("MelConfig: fmax above Nyquist");
  if (!(log_floor > 0)) throw ValidationError("MelConfig: log_floor must be > 0");
}

double HzToMel(double hz) {
  if (hz < kMinLogHz) return hz / kFSp;
  return kMinLogMel + std::log(hz / kMinLogHz) / kLogStep;
}

double MelToHz(double mel) {
  if (mel < kMinLogMel) return kFSp * mel;
  return kMinLogHz * std::exp(kLogStep * (mel - kMinLogMel));
}

std::vector<double> MelCenterFrequencies(int n_mels, double fmin, double fmax) {
  const double lo = HzToMel(fmin), hi = HzToMel(fmax);
  std::vector<double> out(n_mels);
  for (int m = 0; m < n_mels; ++m)
    out[m] = MelToHz(lo + (hi - lo) * (m + 1) / (n_mels + 1));
  return out;
}

Matrix MelFilterbank(int n_mels, int n_fft, int sample_rate, double fmin,
                     double fmax) {
  if (!(fmin >= 0 && fmin < fmax))
    throw ValidationError("MelFilterbank: need 0 <= fmin < fmax");
  if (fmax > sample_rate / 2.0)
    throw ValidationError("MelFilterbank: fmax above Nyquist");
  const int bins = n_fft / 2 + 1;
  std::vector<double> hz(n_mels + 2);
  const double lo = HzToMel(fmin), hi = HzToMel(fmax);
  for (int i = 0; i < n_mels + 2; ++i)
    hz[i] = MelToHz(lo + (hi - lo) * i / (n_mels + 1));
  Matrix fb = Matrix::Zero(n_mels, bins);
  for (int m = 0; m < n_mels; ++m) {
    const double left = hz[m], centre = hz[m + 1], right = hz[m + 2];
    const double enorm = 2.0 / (right - left);
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / n_fft;
      const double rise = (f - left) / (centre - left);
      const double fall = (right - f) / (right - centre);
      fb(m, k) = std::max(0.0, std::min(rise, fall)) * enorm;
    }
  }
  return fb;
}

Matrix LogMelMatrix(std::span<const double> samples, const MelConfig &cfg) {
  cfg.Validate();
  const Matrix mag = Magnitude(Stft(samples, cfg.stft));
  const Matrix fb = MelFilterbank(cfg.n_mels, cfg.stft.n_fft,
                                  cfg.stft.sample_rate, cfg.fmin, cfg.fmax);
  Matrix mel = mag * fb.transpose();
  return mel.unaryExpr([&](double v) { return std::log(std::max(v, cfg.log_floor)); });
}

MelSpectrogram LogMel(const Waveform &wav, const MelConfig &cfg) {
  if (wav.sample_rate() != cfg.stft.sample_rate)
    throw ValidationError("LogMel: sample rate mismatch");
  return MelSpectrogram(LogMelMatrix(wav.samples(), cfg));
}

LinearSpectrogram MelToLinear(const Matrix &log_mel, const MelConfig &cfg) {
  cfg.Validate();
  const Matrix fb = MelFilterbank(cfg.n_mels, cfg.stft.n_fft,
                                  cfg.stft.sample_rate, cfg.fmin, cfg.fmax);
  if (log_mel.cols() != fb.rows()) throw ShapeError("MelToLinear: band count mismatch");
  // The filters are linearly independent, so pinv(fb) = fb^T (fb fb^T)^-1.
  const Matrix gram = fb * fb.transpose();
  const Matrix pinv_t = gram.ldlt().solve(fb);  // (fb fb^T)^-1 fb
  // Overflow guard for adversarial inputs.
  const Matrix energy = log_mel.unaryExpr([](double v) {
    return std::exp(std::min(v, 80.0));
  });
  Matrix lin = energy * pinv_t;
  lin = lin.cwiseMax(0.0);
  return LinearSpectrogram(std::move(lin));
}

LinearSpectrogram MelToLinear(const MelSpectrogram &mel, const MelConfig &cfg) {
  return MelToLinear(mel.values(), cfg);
}

Waveform HarmonizeLength(const Waveform &wav, int num_video_frames) {
  if (num_video_frames < 1) throw ValidationError("HarmonizeLength: no video frames");
  std::vector<double> s = wav.samples();
  s.resize(static_cast<size_t>(num_video_frames) * kSamplesPerVideoFrame, 0.0);
  return Waveform(std::move(s), wav.sample_rate());
}

}  // namespace svts::dsp

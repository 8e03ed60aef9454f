// src/eval/stoi.cc

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

#include "svts/eval/stoi.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

#include "svts/core/error.h"
#include "svts/dsp/fft.h"
#include "svts/dsp/resample.h"

namespace svts::eval {

namespace {

constexpr int kFs = 10000;
constexpr int kFrame = 256;
constexpr int kHop = kFrame / 2;
constexpr int kNfft = 512;
constexpr int kBands = 15;
constexpr double kMinFreq = 150.0;
constexpr int kSegment = 30;
constexpr double kBeta = -15.0;
constexpr double kDynRange = 40.0;
constexpr double kEps = 2.220446049250313e-16;

const std::vector<double> &Window() {
  static const std::vector<double> w = [] {
    std::vector<double> v(kFrame);
    for (int n = 0; n < kFrame; ++n)
      v[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (n + 1) / (kFrame + 1));
    return v;
  }();
  return w;
}

// Frame starts 0, hop, ... strictly below len - frame.
int CountFrames(size_t len) {
  if (len <= static_cast<size_t>(kFrame)) return 0;
  return static_cast<int>((len - kFrame + kHop - 1) / kHop);
}

// Band b covers FFT bins [lo[b], hi[b]).
struct BandEdges {
  int lo[kBands];
  int hi[kBands];
};

const BandEdges &Bands() {
  static const BandEdges edges = [] {
    BandEdges e;
    const int bins = kNfft / 2 + 1;
    auto nearest = [&](double hz) {
      int best = 0;
      double best_d = 1e300;
      for (int i = 0; i < bins; ++i) {
        const double f = static_cast<double>(kFs) * i / kNfft;
        const double d = (f - hz) * (f - hz);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      return best;
    };
    for (int k = 0; k < kBands; ++k) {
      e.lo[k] = nearest(kMinFreq * std::pow(2.0, (2.0 * k - 1.0) / 6.0));
      e.hi[k] = nearest(kMinFreq * std::pow(2.0, (2.0 * k + 1.0) / 6.0));
    }
    return e;
  }();
  return edges;
}

std::vector<double> ToAnalysisRate(std::span<const double> x, int sample_rate) {
  if (sample_rate == kFs) return {x.begin(), x.end()};
  const int g = std::gcd(kFs, sample_rate);
  return dsp::ResampleOctave(x, kFs / g, sample_rate / g);
}

// Drops frames of both signals where the reference is more than the dynamic
// range below its loudest frame, then overlap-adds the windowed survivors.
void RemoveSilentFrames(std::vector<double> &x, std::vector<double> &y) {
  const auto &w = Window();
  const int frames = CountFrames(x.size());
  std::vector<double> energy(frames);
  for (int i = 0; i < frames; ++i) {
    double s = 0.0;
    for (int n = 0; n < kFrame; ++n) {
      const double v = w[n] * x[static_cast<size_t>(i) * kHop + n];
      s += v * v;
    }
    energy[i] = 20.0 * std::log10(std::sqrt(s) + kEps);
  }
  std::vector<int> keep;
  if (frames > 0) {
    const double top = *std::max_element(energy.begin(), energy.end());
    for (int i = 0; i < frames; ++i)
      if (top - kDynRange - energy[i] < 0.0) keep.push_back(i);
  }
  const size_t out_len =
      keep.empty() ? 0 : (keep.size() - 1) * kHop + kFrame;
  std::vector<double> xs(out_len, 0.0), ys(out_len, 0.0);
  for (size_t j = 0; j < keep.size(); ++j) {
    const size_t src = static_cast<size_t>(keep[j]) * kHop;
    const size_t dst = j * kHop;
    for (int n = 0; n < kFrame; ++n) {
      xs[dst + n] += w[n] * x[src + n];
      ys[dst + n] += w[n] * y[src + n];
    }
  }
  x.swap(xs);
  y.swap(ys);
}

// Third-octave band envelopes, kBands x frames.
Matrix BandEnvelopes(const std::vector<double> &x) {
  const auto &w = Window();
  const auto &bands = Bands();
  const int frames = CountFrames(x.size());
  Matrix tob(kBands, frames);
  dsp::RealFft fft(kNfft);
  std::vector<double> buf(kNfft, 0.0);
  std::vector<std::complex<double>> spec(fft.num_bins());
  for (int t = 0; t < frames; ++t) {
    const size_t start = static_cast<size_t>(t) * kHop;
    for (int n = 0; n < kFrame; ++n) buf[n] = w[n] * x[start + n];
    fft.Forward(buf, spec);
    for (int b = 0; b < kBands; ++b) {
      double s = 0.0;
      for (int k = bands.lo[b]; k < bands.hi[b]; ++k) s += std::norm(spec[k]);
      tob(b, t) = std::sqrt(s);
    }
  }
  return tob;
}

struct Envelopes {
  Matrix x;
  Matrix y;
};

Envelopes Analyse(std::span<const double> ref, std::span<const double> deg,
                  int sample_rate) {
  if (sample_rate <= 0) throw ValidationError("stoi: invalid sample rate");
  const size_t len = std::min(ref.size(), deg.size());
  std::vector<double> x = ToAnalysisRate(ref.first(len), sample_rate);
  std::vector<double> y = ToAnalysisRate(deg.first(len), sample_rate);
  RemoveSilentFrames(x, y);
  Envelopes env{BandEnvelopes(x), BandEnvelopes(y)};
  if (env.x.cols() < kSegment)
    throw ValidationError("stoi: signal too short, " +
                          std::to_string(env.x.cols()) +
                          " active frames after silence removal, need " +
                          std::to_string(kSegment));
  return env;
}

}  // namespace

double Stoi(std::span<const double> ref, std::span<const double> deg,
            int sample_rate) {
  const Envelopes env = Analyse(ref, deg, sample_rate);
  const int frames = static_cast<int>(env.x.cols());
  const double clip = std::pow(10.0, -kBeta / 20.0);
  double total = 0.0;
  int count = 0;
  Eigen::VectorXd xs(kSegment), ys(kSegment);
  for (int m = kSegment; m <= frames; ++m) {
    for (int b = 0; b < kBands; ++b) {
      xs = env.x.row(b).segment(m - kSegment, kSegment).transpose();
      ys = env.y.row(b).segment(m - kSegment, kSegment).transpose();
      const double scale = xs.norm() / (ys.norm() + kEps);
      for (int n = 0; n < kSegment; ++n)
        ys[n] = std::min(ys[n] * scale, xs[n] * (1.0 + clip));
      ys.array() -= ys.mean();
      xs.array() -= xs.mean();
      ys /= ys.norm() + kEps;
      xs /= xs.norm() + kEps;
      total += xs.dot(ys);
      ++count;
    }
  }
  return total / count;
}

double Estoi(std::span<const double> ref, std::span<const double> deg,
             int sample_rate) {
  const Envelopes env = Analyse(ref, deg, sample_rate);
  const int frames = static_cast<int>(env.x.cols());
  auto normalize = [](Matrix &s) {
    for (int b = 0; b < s.rows(); ++b) {
      s.row(b).array() -= s.row(b).mean();
      const double n = s.row(b).norm();
      if (n > 0.0) s.row(b) /= n;
    }
    for (int t = 0; t < s.cols(); ++t) {
      s.col(t).array() -= s.col(t).mean();
      const double n = s.col(t).norm();
      if (n > 0.0) s.col(t) /= n;
    }
  };
  double total = 0.0;
  int count = 0;
  for (int m = kSegment; m <= frames; ++m) {
    Matrix xs = env.x.middleCols(m - kSegment, kSegment);
    Matrix ys = env.y.middleCols(m - kSegment, kSegment);
    normalize(xs);
    normalize(ys);
    total += (xs.array() * ys.array()).sum() / kSegment;
    ++count;
  }
  return total / count;
}

double Stoi(const Waveform &ref, const Waveform &deg) {
  return Stoi(ref.samples(), deg.samples(), ref.sample_rate());
}

double Estoi(const Waveform &ref, const Waveform &deg) {
  return Estoi(ref.samples(), deg.samples(), ref.sample_rate());
}

}  // namespace svts::eval

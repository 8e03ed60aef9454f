// tests/unit/dsp_test.cc

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

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "svts/core/error.h"
#include "svts/core/rng.h"
#include "svts/dsp/fft.h"
#include "svts/dsp/griffin_lim.h"
#include "svts/dsp/mel.h"
#include "svts/dsp/resample.h"
#include "svts/dsp/spectrogram_io.h"
#include "svts/dsp/stft.h"
#include "svts/dsp/wav_io.h"

using namespace svts;
using namespace svts::dsp;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

// Harmonic source with vibrato, a syllable envelope and a little noise.
std::vector<double> SpeechLike(Rng &rng, double seconds) {
  const size_t n = static_cast<size_t>(kSampleRate * seconds);
  const double f0 = 90.0 + 120.0 * rng.Uniform();
  const double syl = 3.0 + 3.0 * rng.Uniform(), p = 6.0 * rng.Uniform();
  std::vector<double> x(n);
  double phase = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    phase += 2.0 * pi * f0 * (1.0 + 0.05 * std::sin(2.0 * pi * 1.3 * t)) / kSampleRate;
    double v = 0.0;
    for (int h = 1; h <= 25; ++h) v += std::sin(h * phase) / (h * h);
    const double env = 0.2 + 0.8 * std::pow(std::max(0.0, std::sin(2.0 * pi * syl * t + p)), 2);
    x[i] = 0.4 * env * v + 0.002 * rng.Normal();
  }
  return x;
}

std::vector<double> Sine(double hz, double seconds, double amp = 0.5) {
  std::vector<double> x(static_cast<size_t>(kSampleRate * seconds));
  for (size_t i = 0; i < x.size(); ++i) x[i] = amp * std::sin(2.0 * pi * hz * i / kSampleRate);
  return x;
}

fs::path TempDir(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("svts_dsp_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("real fft matches a direct dft") {
  Rng rng(1);
  const int n = 64;
  std::vector<double> x(n);
  for (double &v : x) v = rng.Normal();
  RealFft fft(n);
  std::vector<std::complex<double>> X(fft.num_bins());
  fft.Forward(x, X);
  for (int k = 0; k <= n / 2; ++k) {
    std::complex<double> ref = 0.0;
    for (int i = 0; i < n; ++i) ref += x[i] * std::polar(1.0, -2.0 * pi * k * i / n);
    CHECK(std::abs(X[k] - ref) < 1e-10);
  }
  std::vector<double> back(n);
  fft.Inverse(X, back);
  for (int i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("stft frame counts") {
  CHECK(Stft(std::vector<double>(kSampleRate, 0.0)).rows() == 80);
  CHECK(Stft(std::vector<double>(kSampleRate, 0.0)).cols() == 1025);
  CHECK(Magnitude(Stft(std::vector<double>(kSampleRate, 0.0))).maxCoeff() == 0.0);
  // Frames are centred on consecutive hops; count those whose hop lies inside.
  for (size_t n : {size_t{24 * kSampleRate}, size_t{1200}, size_t{12345}, size_t{30001}}) {
    int brute = 0;
    for (size_t start = 0; start + 300 <= n; start += 300) ++brute;
    CHECK(NumFrames(n) == brute);
    CHECK(Stft(std::vector<double>(n, 0.1)).rows() == brute);
  }
  CHECK(NumFrames(24 * kSampleRate) == 1920);
  CHECK_THROWS_AS(Stft(std::vector<double>{}), ValidationError);
  CHECK(Stft(std::vector<double>(100, 0.1)).rows() == 4);  // zero-padded to one window
}

TEST_CASE("1 kHz sine peaks at bin 85 and matches a direct dft") {
  const auto x = Sine(1000.0, 1.0);
  const ComplexMatrix spec = Stft(x);
  const Matrix mag = Magnitude(spec);
  // Frames whose window lies inside the signal; the first and last reach into
  // the reflected padding, where the mirrored sine is discontinuous.
  for (int f = 2; f < mag.rows() - 2; ++f) {
    Eigen::Index arg;
    mag.row(f).maxCoeff(&arg);
    CHECK_MESSAGE(arg == 85, "frame " << f);
  }
  Eigen::Index arg;
  mag.colwise().sum().maxCoeff(&arg);
  CHECK(arg == 85);
  // Frame 40: Hann window of 1200 samples starting 450 samples before the
  // frame's hop, placed 424 samples into the 2048-point frame.
  const int f = 40;
  const auto w = HannWindow(1200);
  for (int k : {0, 84, 85, 86, 300, 1024}) {
    std::complex<double> ref = 0.0;
    for (int i = 0; i < 1200; ++i)
      ref += x[f * 300 - 450 + i] * w[i] * std::polar(1.0, -2.0 * pi * k * (i + 424) / 2048.0);
    CHECK(std::abs(spec(f, k) - ref) < 1e-8);
  }
}

TEST_CASE("stft energy scales with amplitude squared") {
  Rng rng(2);
  const auto x = SpeechLike(rng, 0.7);
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = 1.7 * x[i];
  const double ex = Magnitude(Stft(x)).squaredNorm(), ey = Magnitude(Stft(y)).squaredNorm();
  CHECK(std::abs(ey / ex - 1.7 * 1.7) / (1.7 * 1.7) < 1e-6);
}

TEST_CASE("istft reconstructs the interior") {
  Rng rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> x = SpeechLike(rng, 1.0 + 0.3 * trial);
    for (double &v : x) v += 0.1 * rng.Normal();
    const auto y = Istft(Stft(x), {}, x.size());
    double err = 0.0;
    for (size_t i = 1200; i + 1200 < x.size(); ++i) err = std::max(err, std::abs(x[i] - y[i]));
    CHECK(err < 1e-6);
  }
}

TEST_CASE("mel filterbank") {
  const Matrix fb = MelFilterbank();
  CHECK(fb.rows() == 80);
  CHECK(fb.cols() == 1025);
  CHECK(fb.minCoeff() >= 0.0);
  for (int r = 0; r < 80; ++r) CHECK(fb.row(r).sum() > 0.0);
  const auto centres = MelCenterFrequencies(80, 0.0, 12000.0);
  for (size_t i = 1; i < centres.size(); ++i) CHECK(centres[i] > centres[i - 1]);
  CHECK_THROWS_AS(MelFilterbank(80, 2048, kSampleRate, 0.0, 13000.0), ValidationError);
  CHECK_THROWS_AS(MelFilterbank(80, 2048, kSampleRate, 500.0, 400.0), ValidationError);
  CHECK(MelToHz(HzToMel(1234.5)) == doctest::Approx(1234.5));
}

TEST_CASE("log mel") {
  const MelSpectrogram silence = LogMel(Waveform(std::vector<double>(kSampleRate, 0.0)));
  CHECK(silence.num_frames() == 80);
  CHECK(silence.num_bands() == 80);
  CHECK((silence.values().array() == std::log(1e-10)).all());

  Rng rng(4);
  const MelSpectrogram m = LogMel(Waveform(SpeechLike(rng, 1.0)));
  CHECK(m.values().allFinite());
  CHECK(m.num_frames() == 4 * 20);

  // Harmonising to T video frames gives exactly 4T mel frames.
  for (int t : {1, 7, 20, 33}) {
    const Waveform w = HarmonizeLength(Waveform(SpeechLike(rng, 0.9)), t);
    CHECK(w.size() == static_cast<size_t>(t) * 1200);
    CHECK(LogMel(w).num_frames() == 4 * t);
  }
}

TEST_CASE("mel inversion") {
  const LinearSpectrogram zero = MelToLinear(Matrix::Constant(10, 80, std::log(1e-10)));
  CHECK(zero.magnitudes().maxCoeff() < 1e-8);

  Rng rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix m = LogMel(Waveform(SpeechLike(rng, 1.0))).values();
    const Matrix fb = MelFilterbank();
    const Matrix back = MelToLinear(m).magnitudes() * fb.transpose();
    const Matrix target = m.array().exp();
    const double rel = (back - target).norm() / target.norm();
    worst = std::max(worst, rel);
    CHECK(rel < 0.15);
  }
  MESSAGE("worst mel round-trip relative error " << worst);

  Matrix adversarial(20, 80);
  for (int64_t i = 0; i < adversarial.size(); ++i) adversarial.data()[i] = 200.0 * rng.Normal();
  const LinearSpectrogram lin = MelToLinear(adversarial);
  CHECK(lin.magnitudes().minCoeff() >= 0.0);
  CHECK(lin.magnitudes().allFinite());
}

TEST_CASE("griffin-lim") {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = SpeechLike(rng, 0.6);
    const LinearSpectrogram mag(Magnitude(Stft(x)));
    GriffinLimOptions opts;
    opts.seed = trial;
    const GriffinLimResult r = GriffinLimDetailed(mag, opts, true);
    REQUIRE(r.history.size() == 30);
    CHECK(r.history.back() < r.history.front());
  }

  // Classic algorithm: non-increasing error.
  const LinearSpectrogram mag(Magnitude(Stft(SpeechLike(rng, 0.6))));
  GriffinLimOptions classic;
  classic.momentum = 0.0;
  const GriffinLimResult c = GriffinLimDetailed(mag, classic, true);
  for (size_t i = 1; i < c.history.size(); ++i) CHECK(c.history[i] <= c.history[i - 1] + 1e-12);

  const Waveform a = GriffinLim(mag), b = GriffinLim(mag);
  CHECK(a.samples() == b.samples());
  GriffinLimOptions other;
  other.seed = 99;
  CHECK(GriffinLim(mag, other).samples() != a.samples());
  CHECK(a.size() == static_cast<size_t>(mag.num_frames()) * 300);

  const Waveform z = GriffinLim(LinearSpectrogram(Matrix::Zero(20, 1025)));
  for (double v : z.samples()) CHECK(v == 0.0);
  CHECK_THROWS_AS(LinearSpectrogram(Matrix(0, 1025)), ValidationError);
}

TEST_CASE("wav round trip") {
  const fs::path dir = TempDir("wav");
  Rng rng(7);
  const Waveform w(SpeechLike(rng, 0.25));
  const std::string path = (dir / "a.wav").string();
  WriteWav(path, w);
  const WavData d = ReadWavData(path);
  CHECK(d.sample_rate == kSampleRate);
  CHECK(d.channels == 1);
  REQUIRE(d.samples.size() == w.size());
  for (size_t i = 0; i < w.size(); ++i) CHECK(std::abs(d.samples[i] - w.samples()[i]) <= 1.0 / 32768);
  // 16-bit PCM: header plus two bytes per sample.
  CHECK(fs::file_size(path) == 44 + 2 * w.size());
  // Re-writing what was read gives the same bytes.
  WriteWav((dir / "b.wav").string(), ReadWav(path));
  std::ifstream fa(path, std::ios::binary), fb(dir / "b.wav", std::ios::binary);
  CHECK(std::string(std::istreambuf_iterator<char>(fa), {}) ==
        std::string(std::istreambuf_iterator<char>(fb), {}));
  std::ofstream(dir / "junk.wav") << "RIFFxxxxWAVE";
  CHECK_THROWS(ReadWav((dir / "junk.wav").string()));
  fs::remove_all(dir);
}

TEST_CASE("spectrogram file layout") {
  const fs::path dir = TempDir("mel");
  Matrix m(3, 80);
  for (int64_t i = 0; i < m.size(); ++i) m.data()[i] = 0.25 * i - 7.0;
  const std::string path = (dir / "m.mel").string();
  WriteMelFile(path, MelSpectrogram(m));
  CHECK(fs::file_size(path) == 16 + 4 * 3 * 80);
  std::ifstream in(path, std::ios::binary);
  uint64_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char *>(&rows), 8);
  in.read(reinterpret_cast<char *>(&cols), 8);
  CHECK(rows == 3);
  CHECK(cols == 80);
  float second = 0.0f;
  in.read(reinterpret_cast<char *>(&second), 4);
  in.read(reinterpret_cast<char *>(&second), 4);
  CHECK(second == -6.75f);
  CHECK(ReadMelFile(path).values() == m);
  fs::remove_all(dir);
}

TEST_CASE("octave-style resampler") {
  const auto x = Sine(440.0, 0.5);
  const auto y = ResampleOctave(x, 5, 12);
  CHECK(y.size() == (x.size() * 5 + 11) / 12);
  // A tone well inside the passband keeps its amplitude and phase.
  double err = 0.0;
  for (size_t i = 200; i + 200 < y.size(); ++i)
    err = std::max(err, std::abs(y[i] - 0.5 * std::sin(2.0 * pi * 440.0 * i / 10000.0)));
  CHECK(err < 5e-3);
  // Identity ratio is a no-op.
  const auto same = ResampleOctave(x, 3, 3);
  CHECK(same.size() == x.size());
  CHECK(BesselI0(0.0) == 1.0);
  CHECK(BesselI0(2.0) == doctest::Approx(2.2795853023360673));
}

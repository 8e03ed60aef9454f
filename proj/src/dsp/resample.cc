// src/dsp/resample.cc

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

#include "svts/dsp/resample.h"

#include <cmath>
#include <numbers>
#include <numeric>

#include "svts/core/error.h"

namespace svts::dsp {

double BesselI0(double x) {
  // Power series; converges quickly for the beta values used here.
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

namespace {

std::vector<double> DesignFilter(int up, int down) {
  const double stopband = 1.0 / (2.0 * std::max(up, down));
  const double roll_off = stopband / 10.0;
  const double rejection_db = 60.0;
  const long half = static_cast<long>(std::ceil((rejection_db - 8.0) / (28.714 * roll_off)));
  const double beta = 0.1102 * (rejection_db - 8.7);
  const long len = 2 * half + 1;
  std::vector<double> h(len);
  const double i0_beta = BesselI0(beta);
  for (long i = 0; i < len; ++i) {
    const double t = static_cast<double>(i - half);
    const double arg = 2.0 * stopband * t;
    const double sinc = arg == 0.0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
    const double r = 2.0 * i / (len - 1) - 1.0;
    const double kaiser = BesselI0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
    h[i] = kaiser * 2.0 * up * stopband * sinc;
  }
  const double total = std::accumulate(h.begin(), h.end(), 0.0);
  for (auto &v : h) v = v / total * up;
  return h;
}

}  // namespace

std::vector<double> ResampleOctave(std::span<const double> x, int up, int down) {
  if (up < 1 || down < 1) throw ValidationError("ResampleOctave: factors must be >= 1");
  const int g = std::gcd(up, down);
  up /= g;
  down /= g;
  if (up == 1 && down == 1) return {x.begin(), x.end()};
  auto h = DesignFilter(up, down);
  const long half_len = (static_cast<long>(h.size()) - 1) / 2;
  const long n_in = static_cast<long>(x.size());
  const long n_out = (n_in * up + down - 1) / down;
  // Pre-pad so output sample 0 lands on the filter centre.
  const long pre_pad = down - half_len % down;
  const long pre_remove = (half_len + pre_pad) / down;
  const long hlen = static_cast<long>(h.size()) + pre_pad;
  std::vector<double> out(n_out, 0.0);
  for (long i = 0; i < n_out; ++i) {
    // Position on the upsampled grid.
    const long m = (i + pre_remove) * down;
    // Input j contributes h_padded[m - j*up] when 0 <= m - j*up < hlen.
    long j_hi = m / up;
    long j_lo = (m - hlen + up) / up;
    if (m - hlen + 1 > 0) j_lo = (m - hlen + 1 + up - 1) / up;
    else j_lo = 0;
    j_hi = std::min(j_hi, n_in - 1);
    double acc = 0.0;
    for (long j = j_lo; j <= j_hi; ++j) {
      const long k = m - j * up - pre_pad;
      if (k >= 0 && k < static_cast<long>(h.size())) acc += h[k] * x[j];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace svts::dsp

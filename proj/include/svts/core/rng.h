// include/svts/core/rng.h

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

#ifndef SVTS_CORE_RNG_H_
#define SVTS_CORE_RNG_H_

#include <cstdint>
#include <random>
#include <string>

namespace svts {

// Seeded random source.  The standard distributions are not portable across
// library implementations, so the draws below are computed by hand from the
// raw mt19937_64 stream; a given seed yields the same sequence everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform();
  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n).  n must be positive.
  int64_t UniformInt(int64_t n);
  // Standard normal (Box-Muller, no cached second value).
  double Normal();
  bool Bernoulli(double p) { return Uniform() < p; }

  // Derive an independent stream, e.g. one per clip.
  Rng Fork(uint64_t salt);

  std::string SaveState() const;
  void LoadState(const std::string &state);

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates shuffle driven by Rng.
template <typename T>
void Shuffle(T &items, Rng &rng) {
  for (int64_t i = static_cast<int64_t>(items.size()) - 1; i > 0; --i) {
    int64_t j = rng.UniformInt(i + 1);
    using std::swap;
    swap(items[i], items[j]);
  }
}

}  // namespace svts

#endif  // SVTS_CORE_RNG_H_

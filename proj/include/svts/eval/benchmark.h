// include/svts/eval/benchmark.h

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

#ifndef SVTS_EVAL_BENCHMARK_H_
#define SVTS_EVAL_BENCHMARK_H_

#include <string>
#include <vector>

#include "svts/core/types.h"
#include "svts/eval/adapters.h"

namespace svts::eval {

struct BenchmarkResult {
  std::string adapter;
  int clips = 0;
  double seconds = 0.0;
  double clips_per_second = 0.0;
  std::string hardware;
};

// CPU model and logical core count, e.g. "Intel(R) Xeon(R) ... (4 threads)".
std::string HardwareDescription();

// Synthesizes every clip once after `warmup` untimed runs on the first clip.
// Needs at least 10 clips; adapter failures propagate.
BenchmarkResult BenchmarkVocoder(const VocoderAdapter &adapter,
                                 const std::vector<Matrix> &mels, int warmup = 1);

std::string BenchmarkJson(const BenchmarkResult &r);

}  // namespace svts::eval

#endif  // SVTS_EVAL_BENCHMARK_H_

// src/eval/benchmark.cc

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

#include "svts/eval/benchmark.h"

#include <chrono>
#include <fstream>
#include <thread>

#include "json.hpp"

#include "svts/core/error.h"

namespace svts::eval {

std::string HardwareDescription() {
  std::string model;
  std::ifstream in("/proc/cpuinfo");
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("model name", 0) == 0) {
      const size_t colon = line.find(':');
      if (colon != std::string::npos) {
        model = line.substr(colon + 1);
        model.erase(0, model.find_first_not_of(" \t"));
      }
      break;
    }
  }
  if (model.empty()) model = "unknown CPU";
  const unsigned threads = std::thread::hardware_concurrency();
  return model + " (" + std::to_string(threads) + " threads)";
}

BenchmarkResult BenchmarkVocoder(const VocoderAdapter &adapter,
                                 const std::vector<Matrix> &mels, int warmup) {
  if (mels.size() < 10)
    throw ValidationError("benchmark needs at least 10 clips, got " +
                          std::to_string(mels.size()));
  for (int i = 0; i < warmup; ++i) adapter.Synthesize(mels.front(), "warmup");
  const auto start = std::chrono::steady_clock::now();
  for (size_t i = 0; i < mels.size(); ++i)
    adapter.Synthesize(mels[i], "bench" + std::to_string(i));
  const auto stop = std::chrono::steady_clock::now();
  BenchmarkResult r;
  r.adapter = adapter.name;
  r.clips = static_cast<int>(mels.size());
  r.seconds = std::chrono::duration<double>(stop - start).count();
  r.clips_per_second = r.clips / std::max(r.seconds, 1e-9);
  r.hardware = HardwareDescription();
  return r;
}

std::string BenchmarkJson(const BenchmarkResult &r) {
  nlohmann::json j{{"adapter", r.adapter},
                   {"clips", r.clips},
                   {"seconds", r.seconds},
                   {"clips_per_sec", r.clips_per_second},
                   {"hardware", r.hardware}};
  return j.dump();
}

}  // namespace svts::eval

// src/core/manifest.cc

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

#include "svts/core/manifest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "svts/core/binary_io.h"
#include "svts/core/error.h"
#include "svts/core/rng.h"

namespace svts {

namespace {

constexpr size_t kNumFields = 8;

std::vector<std::string> SplitFields(const std::string &line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t bar = line.find('|', start);
    fields.push_back(line.substr(start, bar - start));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return fields;
}

// Cumulative rounding of n items into three counts that sum to n.
std::array<int, 3> Partition(int n, const SplitRatios &r) {
  int train = static_cast<int>(std::lround(n * r[0]));
  int train_val = static_cast<int>(std::lround(n * (r[0] + r[1])));
  train = std::clamp(train, 0, n);
  train_val = std::clamp(train_val, train, n);
  return {train, train_val - train, n - train_val};
}

void CheckRatios(const SplitRatios &r) {
  for (double v : r)
    if (!(v >= 0.0)) throw ValidationError("split ratios must be non-negative");
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9)
    throw ValidationError("split ratios must sum to 1");
}

}  // namespace

std::string SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "train";
}

Split ParseSplit(const std::string &name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw ValidationError("unknown split '" + name + "'");
}

ManifestEntry ParseManifestLine(const std::string &line, size_t lineno) {
  auto f = SplitFields(line);
  if (f.size() != kNumFields)
    throw ParseError("expected 8 '|'-separated fields, found " +
                         std::to_string(f.size()), lineno);
  ManifestEntry e;
  e.id = f[0];
  e.video_path = f[1];
  e.audio_path = f[2];
  e.landmarks_path = f[3];
  e.speaker_embedding_path = f[4];
  e.speaker_id = f[5];
  if (e.id.empty()) throw ParseError("empty id", lineno);
  if (e.speaker_id.empty()) throw ParseError("empty speaker_id", lineno);
  try {
    e.split = ParseSplit(f[6]);
  } catch (const ValidationError &err) {
    throw ParseError(err.what(), lineno);
  }
  try {
    size_t pos = 0;
    e.duration_s = std::stod(f[7], &pos);
    if (pos != f[7].size()) throw std::invalid_argument("trailing");
  } catch (const std::exception &) {
    throw ParseError("bad duration '" + f[7] + "'", lineno);
  }
  return e;
}

std::string FormatManifestLine(const ManifestEntry &e) {
  std::ostringstream os;
  os.precision(17);
  os << e.id << '|' << e.video_path << '|' << e.audio_path << '|'
     << e.landmarks_path << '|' << e.speaker_embedding_path << '|'
     << e.speaker_id << '|' << SplitName(e.split) << '|' << e.duration_s;
  return os.str();
}

std::vector<ManifestEntry> LoadManifest(const std::string &path,
                                        const ManifestLoadOptions &opts) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open manifest " + path);
  std::vector<ManifestEntry> entries;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    ManifestEntry e = ParseManifestLine(line, lineno);
    if (!(e.duration_s > 0.0) || !std::isfinite(e.duration_s))
      throw ValidationError("line " + std::to_string(lineno) + ": duration_s must be > 0 for '" +
                            e.id + "'");
    if (opts.check_files) {
      std::vector<std::string> missing;
      for (const auto *p : {&e.video_path, &e.audio_path, &e.landmarks_path,
                            &e.speaker_embedding_path}) {
        if (!FileExists(ResolveRelative(path, *p))) missing.push_back(*p);
      }
      if (!missing.empty()) {
        std::string msg = "line " + std::to_string(lineno) + ": missing file(s) for '" + e.id + "':";
        for (const auto &m : missing) msg += " " + m;
        throw ValidationError(msg);
      }
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void SaveManifest(const std::string &path,
                  const std::vector<ManifestEntry> &entries) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write manifest " + path);
  for (const auto &e : entries) os << FormatManifestLine(e) << '\n';
  if (!os) throw IoError("write failed: " + path);
}

ManifestEntry ResolveEntryPaths(const ManifestEntry &entry,
                                const std::string &manifest_path) {
  ManifestEntry e = entry;
  e.video_path = ResolveRelative(manifest_path, e.video_path);
  e.audio_path = ResolveRelative(manifest_path, e.audio_path);
  e.landmarks_path = ResolveRelative(manifest_path, e.landmarks_path);
  e.speaker_embedding_path = ResolveRelative(manifest_path, e.speaker_embedding_path);
  return e;
}

std::vector<ManifestEntry> FilterMaxDuration(
    const std::vector<ManifestEntry> &entries, double max_s) {
  std::vector<ManifestEntry> out;
  for (const auto &e : entries)
    if (e.duration_s <= max_s) out.push_back(e);
  return out;
}

std::vector<ManifestEntry> MakeSplit(const std::vector<ManifestEntry> &entries,
                                     SplitMode mode, const SplitRatios &ratios,
                                     uint64_t seed) {
  CheckRatios(ratios);
  Rng rng(seed);
  std::vector<ManifestEntry> out = entries;
  // Speakers in first-appearance order, utterance indices per speaker.
  std::vector<std::string> speakers;
  std::map<std::string, std::vector<size_t>> by_speaker;
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i].speaker_id.empty())
      throw ValidationError("entry '" + out[i].id + "' has no speaker_id");
    auto [it, inserted] = by_speaker.try_emplace(out[i].speaker_id);
    if (inserted) speakers.push_back(out[i].speaker_id);
    it->second.push_back(i);
  }

  if (mode == SplitMode::kSeen) {
    // Val and test quotas are rounded on running totals so that small
    // per-speaker shares still add up to the corpus-level fractions.
    int seen = 0;
    for (const auto &spk : speakers) {
      auto idx = by_speaker[spk];
      Shuffle(idx, rng);
      const int n = static_cast<int>(idx.size());
      auto quota = [&](double r, int upto) { return static_cast<int>(std::lround(upto * r)); };
      int val = quota(ratios[1], seen + n) - quota(ratios[1], seen);
      int test = quota(ratios[2], seen + n) - quota(ratios[2], seen);
      test = std::min(test, n);
      val = std::min(val, n - test);
      seen += n;
      const std::array<int, 3> counts = {n - val - test, val, test};
      size_t k = 0;
      for (int s = 0; s < 3; ++s)
        for (int c = 0; c < counts[s]; ++c) out[idx[k++]].split = static_cast<Split>(s);
    }
    return out;
  }

  const int n = static_cast<int>(speakers.size());
  if (n < 3)
    throw ValidationError("unseen split needs at least 3 speakers, found " +
                          std::to_string(n));
  std::sort(speakers.begin(), speakers.end());
  Shuffle(speakers, rng);
  auto counts = Partition(n, ratios);
  // Every split gets at least one speaker.
  counts[0] = std::clamp(counts[0], 1, n - 2);
  counts[1] = std::clamp(counts[1], 1, n - counts[0] - 1);
  counts[2] = n - counts[0] - counts[1];
  size_t k = 0;
  for (int s = 0; s < 3; ++s) {
    for (int c = 0; c < counts[s]; ++c) {
      for (size_t i : by_speaker[speakers[k]]) out[i].split = static_cast<Split>(s);
      ++k;
    }
  }
  return out;
}

std::vector<ManifestEntry> SelectSplit(const std::vector<ManifestEntry> &entries,
                                       Split split) {
  std::vector<ManifestEntry> out;
  for (const auto &e : entries)
    if (e.split == split) out.push_back(e);
  return out;
}

}  // namespace svts

// include/svts/core/manifest.h

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

#ifndef SVTS_CORE_MANIFEST_H_
#define SVTS_CORE_MANIFEST_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace svts {

enum class Split { kTrain, kVal, kTest };

std::string SplitName(Split split);
Split ParseSplit(const std::string &name);

// One utterance.  Paths are stored as written in the manifest; relative paths
// are relative to the manifest file's directory (see ResolveEntryPaths).
struct ManifestEntry {
  std::string id;
  std::string video_path;
  std::string audio_path;
  std::string landmarks_path;
  std::string speaker_embedding_path;
  std::string speaker_id;
  Split split = Split::kTrain;
  double duration_s = 0.0;

  bool operator==(const ManifestEntry &) const = default;
};

struct ManifestLoadOptions {
  // Require every referenced file to exist.
  bool check_files = true;
};

// Manifest text format, one record per line:
//   id|video_path|audio_path|landmarks_path|speaker_embedding_path|speaker_id|split|duration_s
// Blank lines and lines starting with '#' are ignored.
std::vector<ManifestEntry> LoadManifest(const std::string &path,
                                        const ManifestLoadOptions &opts = {});
void SaveManifest(const std::string &path,
                  const std::vector<ManifestEntry> &entries);
std::string FormatManifestLine(const ManifestEntry &entry);
ManifestEntry ParseManifestLine(const std::string &line, size_t lineno = 0);

// Returns a copy with all four paths resolved against the manifest location.
ManifestEntry ResolveEntryPaths(const ManifestEntry &entry,
                                const std::string &manifest_path);

// Entries with duration_s <= max_s, order preserved.
std::vector<ManifestEntry> FilterMaxDuration(
    const std::vector<ManifestEntry> &entries, double max_s = 24.0);

enum class SplitMode { kSeen, kUnseen };

using SplitRatios = std::array<double, 3>;  // train, val, test

// Seen: every speaker's utterances are shuffled and partitioned by the ratios,
// with val/test quotas rounded on running totals over speakers.
// Unseen: whole speakers are assigned to splits so the three speaker sets are
// pairwise disjoint (needs >= 3 speakers).  Deterministic for a given seed.
std::vector<ManifestEntry> MakeSplit(const std::vector<ManifestEntry> &entries,
                                     SplitMode mode,
                                     const SplitRatios &ratios = {0.8, 0.1, 0.1},
                                     uint64_t seed = 0);

std::vector<ManifestEntry> SelectSplit(const std::vector<ManifestEntry> &entries,
                                       Split split);

}  // namespace svts

#endif  // SVTS_CORE_MANIFEST_H_

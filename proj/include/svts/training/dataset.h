// include/svts/training/dataset.h

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

#ifndef SVTS_TRAINING_DATASET_H_
#define SVTS_TRAINING_DATASET_H_

#include <string>
#include <vector>

#include "svts/core/manifest.h"
#include "svts/core/types.h"

namespace svts::training {

// A preprocessed utterance held in memory.
struct Example {
  std::string id;
  VideoClip clip;  // 96x96 stored crop
  Matrix mel;      // 4T x 80 target
  SpeakerEmbedding embedding;
};

// Loads clips, targets and embeddings for `entries` (paths relative to
// manifest_path).  The target is <clip>.mel next to the clip when present,
// otherwise it is computed from the audio.  Throws if F != 4T.
std::vector<Example> LoadExamples(const std::vector<ManifestEntry> &entries,
                                  const std::string &manifest_path);

}  // namespace svts::training

#endif  // SVTS_TRAINING_DATASET_H_

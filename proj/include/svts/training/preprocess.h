// include/svts/training/preprocess.h

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

#ifndef SVTS_TRAINING_PREPROCESS_H_
#define SVTS_TRAINING_PREPROCESS_H_

#include <string>
#include <vector>

#include "svts/video/align.h"

namespace svts::training {

struct PreprocessOptions {
  // Override the directories that relative video / landmark paths resolve
  // against (default: the manifest's directory).
  std::string raw_dir;
  std::string landmarks_dir;
  std::string mean_face_path;  // empty: bundled reference face
  video::AlignOptions align;
};

struct PreprocessFailure {
  std::string id;
  std::string message;
};

struct PreprocessReport {
  std::string manifest_path;
  int processed = 0;
  std::vector<PreprocessFailure> failures;
  // Total frames whose landmarks were unusable and borrowed a neighbour's
  // alignment.
  int flagged_frames = 0;
};

// For every manifest entry: aligns and crops the mouth region to a 96x96
// grayscale clip, brings the audio to 24 kHz mono of exactly T * 1200
// samples and extracts its log-mel (4T x 80).  Writes
//   <out>/clips/<id>.vid, <out>/clips/<id>.mel, <out>/audio/<id>.wav
// and <out>/manifest.txt listing the successful entries.  An entry that
// fails is recorded and skipped.
PreprocessReport PreprocessCorpus(const std::string &manifest_path, const std::string &out_dir,
                                  const PreprocessOptions &opts = {});

}  // namespace svts::training

#endif  // SVTS_TRAINING_PREPROCESS_H_

// include/svts/training/toy_data.h

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

#ifndef SVTS_TRAINING_TOY_DATA_H_
#define SVTS_TRAINING_TOY_DATA_H_

#include <cstdint>
#include <string>
#include <vector>

#include "svts/core/types.h"

namespace svts::training {

struct ToyDataOptions {
  int frame_size = 128;
  int num_speakers = 0;  // 0: min(4, max(1, n_clips / 2))
};

// Writes a synthetic paired corpus under out_dir:
//   raw/<id>.vid          128x128 gray video of a face whose mouth opens
//                         and closes with an aperture a(t) in (0, 1]
//   landmarks/<id>.lmk    68-point track of the same face
//   audio/<id>.wav        24 kHz harmonic tone, f0 = 100 + 150 a(t) Hz,
//                         amplitude following a(t)
//   embeddings/<spk>.emb  unit-norm pseudo-speaker vectors (256-d)
//   manifest.txt          all clips in the train split
// Returns the manifest path.  Output is a pure function of the arguments.
std::string MakeToyDataset(int n_clips, double duration_s, uint64_t seed,
                           const std::string &out_dir, const ToyDataOptions &opts = {});

// Per-frame aperture of clip `index` (exposed for tests).
std::vector<double> ToyAperture(int num_frames, uint64_t seed, int index);

}  // namespace svts::training

#endif  // SVTS_TRAINING_TOY_DATA_H_

// include/svts/core/speaker_embedding.h

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

#ifndef SVTS_CORE_SPEAKER_EMBEDDING_H_
#define SVTS_CORE_SPEAKER_EMBEDDING_H_

#include <string>

#include "svts/core/types.h"

namespace svts {

enum class ArrayFormat { kBinary, kText };

// Speaker embedding file:
//   line 1: "SVTSEMB <binary|text> <D>\n"
//   body:   D little-endian float32 values (binary) or D whitespace-separated
//           decimal values (text).
// The loaded vector must have unit norm (+-1e-5).
SpeakerEmbedding LoadSpeakerEmbedding(const std::string &path,
                                      const std::string &speaker_id = "");
void SaveSpeakerEmbedding(const std::string &path, const SpeakerEmbedding &emb,
                          ArrayFormat format = ArrayFormat::kBinary);

ArrayFormat ParseArrayFormat(const std::string &token);
std::string ArrayFormatName(ArrayFormat format);

}  // namespace svts

#endif  // SVTS_CORE_SPEAKER_EMBEDDING_H_

// src/training/dataset.cc

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

#include "svts/training/dataset.h"

#include <filesystem>
#include <map>

#include "svts/core/binary_io.h"
#include "svts/core/error.h"
#include "svts/core/speaker_embedding.h"
#include "svts/dsp/mel.h"
#include "svts/dsp/spectrogram_io.h"
#include "svts/dsp/wav_io.h"
#include "svts/video/clip_io.h"

namespace svts::training {

std::vector<Example> LoadExamples(const std::vector<ManifestEntry> &entries,
                                  const std::string &manifest_path) {
  std::map<std::string, SpeakerEmbedding> embeddings;
  std::vector<Example> out;
  out.reserve(entries.size());
  for (const ManifestEntry &raw : entries) {
    const ManifestEntry e = ResolveEntryPaths(raw, manifest_path);
    VideoClip clip = video::LoadClip(e.video_path);
    const std::string mel_path = std::filesystem::path(e.video_path).replace_extension(".mel").string();
    Matrix mel;
    if (FileExists(mel_path))
      mel = dsp::ReadMelFile(mel_path).values();
    else
      mel = dsp::LogMel(dsp::HarmonizeLength(dsp::ReadWav(e.audio_path), clip.num_frames())).values();
    if (mel.rows() != kMelFramesPerVideoFrame * clip.num_frames() || mel.cols() != kMelBands)
      throw ShapeError(e.id + ": target mel is " + std::to_string(mel.rows()) + "x" +
                       std::to_string(mel.cols()) + " for " + std::to_string(clip.num_frames()) +
                       " video frames");
    auto it = embeddings.find(e.speaker_embedding_path);
    if (it == embeddings.end())
      it = embeddings
               .emplace(e.speaker_embedding_path,
                        LoadSpeakerEmbedding(e.speaker_embedding_path, e.speaker_id))
               .first;
    out.push_back({e.id, std::move(clip), std::move(mel), it->second});
  }
  return out;
}

}  // namespace svts::training

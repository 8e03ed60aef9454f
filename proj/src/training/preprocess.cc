// src/training/preprocess.cc

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

#include "svts/training/preprocess.h"

#include <filesystem>
#include <iostream>
#include <numeric>

#include "svts/core/binary_io.h"
#include "svts/core/error.h"
#include "svts/core/manifest.h"
#include "svts/dsp/mel.h"
#include "svts/dsp/resample.h"
#include "svts/dsp/spectrogram_io.h"
#include "svts/dsp/wav_io.h"
#include "svts/video/clip_io.h"
#include "svts/video/landmarks.h"

namespace svts::training {

namespace fs = std::filesystem;

namespace {

std::string Resolve(const std::string &path, const std::string &dir, const std::string &manifest) {
  if (fs::path(path).is_absolute()) return path;
  if (!dir.empty()) return (fs::path(dir) / path).string();
  return ResolveRelative(manifest, path);
}

Waveform LoadAudio24k(const std::string &path) {
  const dsp::WavData wav = dsp::ReadWavData(path);
  const size_t frames = wav.samples.size() / wav.channels;
  std::vector<double> mono(frames);
  for (size_t i = 0; i < frames; ++i) {
    double s = 0.0;
    for (int c = 0; c < wav.channels; ++c) s += wav.samples[i * wav.channels + c];
    mono[i] = s / wav.channels;
  }
  if (wav.sample_rate != kSampleRate) {
    const int g = std::gcd(kSampleRate, wav.sample_rate);
    mono = dsp::ResampleOctave(mono, kSampleRate / g, wav.sample_rate / g);
  }
  return Waveform::Clipped(std::move(mono));
}

std::string RelativeTo(const std::string &path, const std::string &dir) {
  return fs::relative(fs::absolute(path), fs::absolute(dir)).generic_string();
}

}  // namespace

PreprocessReport PreprocessCorpus(const std::string &manifest_path, const std::string &out_dir,
                                  const PreprocessOptions &opts) {
  const std::vector<ManifestEntry> entries = LoadManifest(manifest_path, {.check_files = false});
  const LandmarkFrame mean_face =
      opts.mean_face_path.empty() ? video::LoadMeanFace() : video::LoadMeanFace(opts.mean_face_path);
  std::error_code ec;
  for (const char *sub : {"clips", "audio"}) {
    fs::create_directories(fs::path(out_dir) / sub, ec);
    if (ec) throw IoError("cannot create " + (fs::path(out_dir) / sub).string() + ": " + ec.message());
  }

  PreprocessReport report;
  std::vector<ManifestEntry> done;
  for (const ManifestEntry &e : entries) {
    try {
      const std::string video_path = Resolve(e.video_path, opts.raw_dir, manifest_path);
      const std::string lmk_path = Resolve(e.landmarks_path, opts.landmarks_dir, manifest_path);
      const std::string audio_path = ResolveRelative(manifest_path, e.audio_path);
      const std::string emb_path = ResolveRelative(manifest_path, e.speaker_embedding_path);
      for (const std::string &p : {video_path, lmk_path, audio_path, emb_path})
        if (!FileExists(p)) throw IoError("missing file " + p);

      const video::RawVideo raw = video::LoadRawVideo(video_path);
      const LandmarkTrack track = video::LoadLandmarks(lmk_path);
      track.CheckBounds(raw.width, raw.height);
      video::AlignResult aligned = video::AlignAndCrop(raw, track, mean_face, opts.align);
      const int T = aligned.clip.num_frames();
      const Waveform audio = dsp::HarmonizeLength(LoadAudio24k(audio_path), T);
      const MelSpectrogram mel = dsp::LogMel(audio);
      if (mel.num_frames() != 4 * T)
        throw ValidationError("mel has " + std::to_string(mel.num_frames()) + " frames, expected " +
                              std::to_string(4 * T));

      const fs::path clip_out = fs::path(out_dir) / "clips" / (e.id + ".vid");
      const fs::path mel_out = fs::path(out_dir) / "clips" / (e.id + ".mel");
      const fs::path wav_out = fs::path(out_dir) / "audio" / (e.id + ".wav");
      video::SaveClip(clip_out.string(), aligned.clip);
      dsp::WriteMelFile(mel_out.string(), mel);
      dsp::WriteWav(wav_out.string(), audio);

      ManifestEntry out = e;
      out.video_path = "clips/" + e.id + ".vid";
      out.audio_path = "audio/" + e.id + ".wav";
      out.landmarks_path = RelativeTo(lmk_path, out_dir);
      out.speaker_embedding_path = RelativeTo(emb_path, out_dir);
      out.duration_s = static_cast<double>(T) / kVideoFps;
      done.push_back(out);
      report.flagged_frames += static_cast<int>(aligned.flagged_frames.size());
      ++report.processed;
    } catch (const std::exception &ex) {
      std::cerr << "preprocess: skipping " << e.id << ": " << ex.what() << "\n";
      report.failures.push_back({e.id, ex.what()});
    }
  }
  report.manifest_path = (fs::path(out_dir) / "manifest.txt").string();
  SaveManifest(report.manifest_path, done);
  return report;
}

}  // namespace svts::training

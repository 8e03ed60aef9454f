// include/svts/eval/adapters.h

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

#ifndef SVTS_EVAL_ADAPTERS_H_
#define SVTS_EVAL_ADAPTERS_H_

#include <optional>
#include <string>

#include "svts/core/types.h"
#include "svts/dsp/griffin_lim.h"
#include "svts/dsp/mel.h"

namespace svts::eval {

struct CommandResult {
  int exit_code = 0;
  std::string output;  // standard output
};

// Runs `command` through /bin/sh and captures standard output.
CommandResult RunCommand(const std::string &command);

// Replaces every "{key}" in `pattern` with the shell-quoted value.
std::string ExpandCommand(std::string pattern,
                          const std::vector<std::pair<std::string, std::string>> &vars);
std::string ShellQuote(const std::string &s);

enum class VocoderKind { kGriffinLim, kExternal };

// Turns a log-mel (4T x 80) into 24 kHz audio.  The external form runs a
// command template containing {mel} and {wav}; the mel is written in the
// mel-file layout and the command must write a 24 kHz WAV to {wav}.
struct VocoderAdapter {
  VocoderKind kind = VocoderKind::kGriffinLim;
  std::string name = "griffin-lim";
  std::string command;
  dsp::GriffinLimOptions griffin_lim;
  dsp::MelConfig mel;
  std::string work_dir;  // scratch files for the external form; empty = temp dir

  static VocoderAdapter GriffinLim(int iterations = 30, uint64_t seed = 0);
  static VocoderAdapter External(const std::string &name, const std::string &command);

  // Throws IoError if the external command fails or writes no valid WAV.
  Waveform Synthesize(const Matrix &log_mel, const std::string &tag = "clip") const;
};

// Command template with {wav}; the first non-empty stdout line is the
// transcript.
struct AsrAdapter {
  std::string command;
  std::vector<std::string> Transcribe(const std::string &wav_path) const;
};

// Command template with {ref} and {deg}; the last number printed on stdout is
// the score.
struct PesqAdapter {
  std::string command;
  double Score(const std::string &ref_wav, const std::string &deg_wav) const;
};

}  // namespace svts::eval

#endif  // SVTS_EVAL_ADAPTERS_H_

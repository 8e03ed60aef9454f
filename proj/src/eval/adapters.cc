// src/eval/adapters.cc

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

#include "svts/eval/adapters.h"

#include <sys/wait.h>

#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <unistd.h>

#include "svts/core/error.h"
#include "svts/dsp/spectrogram_io.h"
#include "svts/dsp/wav_io.h"
#include "svts/eval/wer.h"

namespace svts::eval {

namespace fs = std::filesystem;

CommandResult RunCommand(const std::string &command) {
  FILE *pipe = ::popen(command.c_str(), "r");
  if (!pipe) throw IoError("cannot run command: " + command);
  CommandResult result;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    result.output.append(buf.data(), n);
  const int status = ::pclose(pipe);
  if (status == -1)
    result.exit_code = -1;
  else if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else
    result.exit_code = 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  return result;
}

std::string ShellQuote(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

std::string ExpandCommand(
    std::string pattern,
    const std::vector<std::pair<std::string, std::string>> &vars) {
  for (const auto &[key, value] : vars) {
    const std::string token = "{" + key + "}";
    const std::string quoted = ShellQuote(value);
    for (size_t pos = pattern.find(token); pos != std::string::npos;
         pos = pattern.find(token, pos + quoted.size()))
      pattern.replace(pos, token.size(), quoted);
  }
  return pattern;
}

VocoderAdapter VocoderAdapter::GriffinLim(int iterations, uint64_t seed) {
  VocoderAdapter a;
  a.griffin_lim.iterations = iterations;
  a.griffin_lim.seed = seed;
  return a;
}

VocoderAdapter VocoderAdapter::External(const std::string &name,
                                        const std::string &command) {
  if (command.find("{mel}") == std::string::npos ||
      command.find("{wav}") == std::string::npos)
    throw ValidationError("vocoder command must contain {mel} and {wav}: " +
                          command);
  VocoderAdapter a;
  a.kind = VocoderKind::kExternal;
  a.name = name;
  a.command = command;
  return a;
}

Waveform VocoderAdapter::Synthesize(const Matrix &log_mel,
                                    const std::string &tag) const {
  if (log_mel.cols() != mel.n_mels)
    throw ShapeError("vocoder: mel has " + std::to_string(log_mel.cols()) +
                     " bands, expected " + std::to_string(mel.n_mels));
  if (kind == VocoderKind::kGriffinLim) {
    dsp::GriffinLimOptions opts = griffin_lim;
    opts.stft = mel.stft;
    return dsp::GriffinLim(dsp::MelToLinear(log_mel, mel), opts);
  }
  static std::atomic<int> counter{0};
  const fs::path dir = work_dir.empty() ? fs::temp_directory_path() : fs::path(work_dir);
  fs::create_directories(dir);
  const std::string stem = "svts_voc_" + std::to_string(::getpid()) + "_" +
                           std::to_string(counter++) + "_" + tag;
  const fs::path mel_path = dir / (stem + ".mel");
  const fs::path wav_path = dir / (stem + ".wav");
  dsp::WriteMelFile(mel_path.string(), MelSpectrogram(log_mel));
  const CommandResult r = RunCommand(ExpandCommand(
      command, {{"mel", mel_path.string()}, {"wav", wav_path.string()}}));
  std::error_code ec;
  if (r.exit_code != 0) {
    fs::remove(mel_path, ec);
    fs::remove(wav_path, ec);
    throw IoError("vocoder '" + name + "' exited with status " +
                  std::to_string(r.exit_code));
  }
  Waveform wav = [&] {
    try {
      return dsp::ReadWav(wav_path.string());
    } catch (const Error &e) {
      fs::remove(mel_path, ec);
      fs::remove(wav_path, ec);
      throw IoError("vocoder '" + name + "' produced no readable WAV: " + e.what());
    }
  }();
  fs::remove(mel_path, ec);
  fs::remove(wav_path, ec);
  if (wav.sample_rate() != kSampleRate)
    throw IoError("vocoder '" + name + "' wrote " +
                  std::to_string(wav.sample_rate()) + " Hz audio, expected " +
                  std::to_string(kSampleRate));
  return wav;
}

std::vector<std::string> AsrAdapter::Transcribe(const std::string &wav_path) const {
  const CommandResult r = RunCommand(ExpandCommand(command, {{"wav", wav_path}}));
  if (r.exit_code != 0)
    throw IoError("asr exited with status " + std::to_string(r.exit_code) +
                  " for " + wav_path);
  std::istringstream in(r.output);
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      return Tokenize(line);
  }
  return {};
}

double PesqAdapter::Score(const std::string &ref_wav,
                          const std::string &deg_wav) const {
  const CommandResult r = RunCommand(
      ExpandCommand(command, {{"ref", ref_wav}, {"deg", deg_wav}}));
  if (r.exit_code != 0)
    throw IoError("pesq exited with status " + std::to_string(r.exit_code));
  std::istringstream in(r.output);
  std::optional<double> last;
  for (std::string tok; in >> tok;) {
    try {
      size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used == tok.size()) last = v;
    } catch (const std::exception &) {
    }
  }
  if (!last) throw IoError("pesq printed no score");
  return *last;
}

}  // namespace svts::eval

// include/svts/eval/evaluate.h

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

#ifndef SVTS_EVAL_EVALUATE_H_
#define SVTS_EVAL_EVALUATE_H_

#include <optional>
#include <string>
#include <vector>

#include "svts/core/types.h"
#include "svts/eval/adapters.h"
#include "svts/eval/wer.h"

namespace svts::eval {

struct UtteranceMetrics {
  std::string id;
  double stoi = 0.0;
  double estoi = 0.0;
  std::optional<double> pesq;
  std::optional<double> wer;
  std::optional<EditCounts> edits;
  std::vector<std::string> errors;  // adapter failures for this utterance
};

// Aggregates are means over `rows`; WER is the corpus rate over the summed
// edit counts of the rows that were transcribed.  Optional fields are empty
// when the corresponding adapter was not configured or failed everywhere.
struct MetricReport {
  std::vector<UtteranceMetrics> rows;
  double stoi = 0.0;
  double estoi = 0.0;
  std::optional<double> pesq;
  std::optional<double> wer;
  bool pesq_configured = false;
  bool asr_configured = false;
  int pesq_excluded = 0;
  int wer_excluded = 0;
  // Utterances dropped entirely (e.g. too short to score), with the reason.
  std::vector<std::pair<std::string, std::string>> failures;
};

struct UtterancePair {
  std::string id;
  Waveform real;
  Waveform generated;
  // WAV files holding the two signals; needed by the PESQ/ASR adapters.
  std::string real_path;
  std::string generated_path;
};

struct EvaluateOptions {
  VocoderAdapter vocoder;
  std::optional<AsrAdapter> asr;
  std::optional<PesqAdapter> pesq;
  int jobs = 1;  // concurrent utterances (and adapter processes)
  std::string out_dir;  // generated WAVs go to <out_dir>/wav
  // Score the real audio against itself instead of running the model.
  bool ground_truth = false;
};

struct WerOutcome {
  std::optional<double> wer;
  EditCounts counts;
  int excluded = 0;
  std::vector<std::optional<EditCounts>> per_utterance;
  std::vector<std::string> errors;
};

// Transcribes both sides with the same ASR and scores generated against real
// transcriptions.  Failed utterances are excluded and counted.
WerOutcome WerProtocol(const std::vector<std::string> &real_wavs,
                       const std::vector<std::string> &generated_wavs,
                       const AsrAdapter &asr, int jobs = 1);

MetricReport EvaluatePairs(const std::vector<UtterancePair> &pairs,
                           const EvaluateOptions &opts);

// Test split of the manifest through model + vocoder.  Throws on an empty
// test split or an unloadable checkpoint.
MetricReport EvaluateCorpus(const std::string &manifest_path,
                            const std::string &checkpoint_path,
                            const EvaluateOptions &opts);

// One JSON object per utterance followed by a {"summary": ...} line.
void WriteReport(const MetricReport &report, const std::string &path);
std::string FormatTable(const MetricReport &report);

}  // namespace svts::eval

#endif  // SVTS_EVAL_EVALUATE_H_

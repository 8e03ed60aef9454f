// src/eval/evaluate.cc

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

#include "svts/eval/evaluate.h"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "svts/core/error.h"
#include "svts/core/manifest.h"
#include "svts/dsp/wav_io.h"
#include "svts/eval/stoi.h"
#include "svts/model/checkpoint.h"
#include "svts/training/dataset.h"
#include "svts/video/augment.h"

namespace svts::eval {

namespace fs = std::filesystem;

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads.  The first exception is
// rethrown after all workers finish.
template <typename Fn>
void ParallelFor(size_t n, int jobs, Fn fn) {
  const size_t workers = std::min<size_t>(std::max(jobs, 1), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> threads;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (size_t i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto &t : threads) t.join();
  if (first) std::rethrow_exception(first);
}

std::string WavDir(const EvaluateOptions &opts) {
  const fs::path dir = opts.out_dir.empty()
                           ? fs::temp_directory_path() / "svts_eval"
                           : fs::path(opts.out_dir) / "wav";
  fs::create_directories(dir);
  return dir.string();
}

}  // namespace

WerOutcome WerProtocol(const std::vector<std::string> &real_wavs,
                       const std::vector<std::string> &generated_wavs,
                       const AsrAdapter &asr, int jobs) {
  if (real_wavs.size() != generated_wavs.size())
    throw ValidationError("wer protocol: " + std::to_string(real_wavs.size()) +
                          " real vs " + std::to_string(generated_wavs.size()) +
                          " generated files");
  const size_t n = real_wavs.size();
  WerOutcome out;
  out.per_utterance.resize(n);
  std::vector<std::string> errors(n);
  ParallelFor(n, jobs, [&](size_t i) {
    try {
      const auto ref = asr.Transcribe(real_wavs[i]);
      if (ref.empty())
        throw ValidationError("empty transcription of real audio " + real_wavs[i]);
      const auto hyp = asr.Transcribe(generated_wavs[i]);
      out.per_utterance[i] = AlignWords(ref, hyp);
    } catch (const std::exception &e) {
      errors[i] = e.what();
    }
  });
  for (size_t i = 0; i < n; ++i) {
    if (out.per_utterance[i]) {
      out.counts += *out.per_utterance[i];
    } else {
      ++out.excluded;
      out.errors.push_back(errors[i]);
    }
  }
  if (out.counts.ref_words > 0) out.wer = CorpusWer(out.counts);
  return out;
}

MetricReport EvaluatePairs(const std::vector<UtterancePair> &pairs,
                           const EvaluateOptions &opts) {
  if (pairs.empty()) throw ValidationError("evaluate: no utterances");
  const size_t n = pairs.size();
  const bool need_files = opts.asr.has_value() || opts.pesq.has_value();
  std::vector<std::string> real_paths(n), gen_paths(n);
  if (need_files) {
    const std::string dir = WavDir(opts);
    for (size_t i = 0; i < n; ++i) {
      real_paths[i] = pairs[i].real_path;
      gen_paths[i] = pairs[i].generated_path;
      if (real_paths[i].empty()) {
        real_paths[i] = (fs::path(dir) / (pairs[i].id + ".real.wav")).string();
        dsp::WriteWav(real_paths[i], pairs[i].real);
      }
      if (gen_paths[i].empty()) {
        gen_paths[i] = (fs::path(dir) / (pairs[i].id + ".wav")).string();
        dsp::WriteWav(gen_paths[i], pairs[i].generated);
      }
    }
  }

  std::vector<std::optional<UtteranceMetrics>> rows(n);
  std::vector<std::string> failures(n);
  ParallelFor(n, opts.jobs, [&](size_t i) {
    UtteranceMetrics row;
    row.id = pairs[i].id;
    try {
      row.stoi = Stoi(pairs[i].real, pairs[i].generated);
      row.estoi = Estoi(pairs[i].real, pairs[i].generated);
    } catch (const std::exception &e) {
      failures[i] = e.what();
      return;
    }
    if (opts.pesq) {
      try {
        row.pesq = opts.pesq->Score(real_paths[i], gen_paths[i]);
      } catch (const std::exception &e) {
        row.errors.push_back(std::string("pesq: ") + e.what());
      }
    }
    rows[i] = std::move(row);
  });

  MetricReport report;
  report.pesq_configured = opts.pesq.has_value();
  report.asr_configured = opts.asr.has_value();
  std::vector<std::string> kept_real, kept_gen;
  for (size_t i = 0; i < n; ++i) {
    if (!rows[i]) {
      report.failures.emplace_back(pairs[i].id, failures[i]);
      continue;
    }
    report.rows.push_back(std::move(*rows[i]));
    if (need_files) {
      kept_real.push_back(real_paths[i]);
      kept_gen.push_back(gen_paths[i]);
    }
  }
  if (report.rows.empty())
    throw ValidationError("evaluate: every utterance failed, first: " +
                          report.failures.front().second);

  if (opts.asr) {
    const WerOutcome w = WerProtocol(kept_real, kept_gen, *opts.asr, opts.jobs);
    for (size_t i = 0; i < report.rows.size(); ++i) {
      if (w.per_utterance[i]) {
        report.rows[i].edits = *w.per_utterance[i];
        report.rows[i].wer = CorpusWer(*w.per_utterance[i]);
      } else {
        report.rows[i].errors.push_back("asr failed");
      }
    }
    report.wer = w.wer;
    report.wer_excluded = w.excluded;
    for (const auto &e : w.errors) std::cerr << "asr: " << e << "\n";
  }

  double stoi = 0.0, estoi = 0.0, pesq = 0.0;
  int pesq_count = 0;
  for (const auto &r : report.rows) {
    stoi += r.stoi;
    estoi += r.estoi;
    if (r.pesq) {
      pesq += *r.pesq;
      ++pesq_count;
    } else if (opts.pesq) {
      ++report.pesq_excluded;
    }
  }
  report.stoi = stoi / report.rows.size();
  report.estoi = estoi / report.rows.size();
  if (pesq_count > 0) report.pesq = pesq / pesq_count;
  return report;
}

MetricReport EvaluateCorpus(const std::string &manifest_path,
                            const std::string &checkpoint_path,
                            const EvaluateOptions &opts) {
  const auto entries = SelectSplit(LoadManifest(manifest_path), Split::kTest);
  if (entries.empty())
    throw ValidationError("evaluate: test split of " + manifest_path + " is empty");

  std::unique_ptr<nn::Predictor> model;
  if (!opts.ground_truth) model = nn::LoadPredictor(checkpoint_path);

  std::vector<UtterancePair> pairs;
  pairs.reserve(entries.size());
  const std::string dir = opts.ground_truth ? "" : WavDir(opts);
  for (const auto &raw : entries) {
    const ManifestEntry entry = ResolveEntryPaths(raw, manifest_path);
    Waveform real = dsp::ReadWav(entry.audio_path);
    if (opts.ground_truth) {
      pairs.push_back({entry.id, real, real, entry.audio_path, entry.audio_path});
      continue;
    }
    const auto examples = training::LoadExamples({raw}, manifest_path);
    const auto &ex = examples.front();
    const VideoClip clip = ex.clip.width() == kModelCropSize
                               ? ex.clip
                               : video::CenterCrop(ex.clip);
    const Matrix mel = model->Forward(clip, ex.embedding).mel.values();
    Waveform gen = opts.vocoder.Synthesize(mel, entry.id);
    const std::string gen_path = (fs::path(dir) / (entry.id + ".wav")).string();
    dsp::WriteWav(gen_path, gen);
    pairs.push_back({entry.id, std::move(real), std::move(gen), entry.audio_path,
                     gen_path});
  }
  return EvaluatePairs(pairs, opts);
}

void WriteReport(const MetricReport &report, const std::string &path) {
  using nlohmann::json;
  std::ostringstream out;
  for (const auto &r : report.rows) {
    json j{{"id", r.id}, {"stoi", r.stoi}, {"estoi", r.estoi}};
    if (r.pesq) j["pesq"] = *r.pesq;
    if (r.wer) {
      j["wer"] = *r.wer;
      j["substitutions"] = r.edits->substitutions;
      j["deletions"] = r.edits->deletions;
      j["insertions"] = r.edits->insertions;
      j["ref_words"] = r.edits->ref_words;
    }
    if (!r.errors.empty()) j["errors"] = r.errors;
    out << j.dump() << "\n";
  }
  json s{{"utterances", report.rows.size()},
         {"stoi", report.stoi},
         {"estoi", report.estoi},
         {"failed", report.failures.size()}};
  if (report.pesq)
    s["pesq"] = *report.pesq;
  else
    s["pesq"] = report.pesq_configured ? "failed" : "absent";
  if (report.wer)
    s["wer"] = *report.wer;
  else
    s["wer"] = report.asr_configured ? "failed" : "absent";
  if (report.pesq_configured) s["pesq_excluded"] = report.pesq_excluded;
  if (report.asr_configured) s["wer_excluded"] = report.wer_excluded;
  out << json{{"summary", s}}.dump() << "\n";

  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw IoError("cannot write " + tmp);
    f << out.str();
    if (!f) throw IoError("write failed: " + tmp);
  }
  fs::rename(tmp, path);
}

std::string FormatTable(const MetricReport &report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  auto opt = [&](const std::optional<double> &v, bool configured) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4);
    if (v)
      s << *v;
    else
      s << (configured ? "failed" : "absent");
    return s.str();
  };
  out << std::left << std::setw(24) << "id" << std::setw(10) << "PESQ"
      << std::setw(10) << "STOI" << std::setw(10) << "ESTOI" << "WER\n";
  for (const auto &r : report.rows) {
    out << std::setw(24) << r.id << std::setw(10)
        << opt(r.pesq, report.pesq_configured) << std::setw(10) << r.stoi
        << std::setw(10) << r.estoi << opt(r.wer, report.asr_configured) << "\n";
  }
  out << std::setw(24) << "mean" << std::setw(10)
      << opt(report.pesq, report.pesq_configured) << std::setw(10) << report.stoi
      << std::setw(10) << report.estoi << opt(report.wer, report.asr_configured)
      << "\n";
  if (!report.failures.empty())
    out << report.failures.size() << " utterance(s) failed\n";
  return out.str();
}

}  // namespace svts::eval

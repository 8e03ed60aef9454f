// tools/svts.cc

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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "svts/core/config.h"
#include "svts/core/error.h"
#include "svts/core/manifest.h"
#include "svts/core/speaker_embedding.h"
#include "svts/dsp/spectrogram_io.h"
#include "svts/dsp/wav_io.h"
#include "svts/eval/benchmark.h"
#include "svts/eval/evaluate.h"
#include "svts/model/checkpoint.h"
#include "svts/training/preprocess.h"
#include "svts/training/toy_data.h"
#include "svts/training/trainer.h"
#include "svts/video/augment.h"
#include "svts/video/clip_io.h"

namespace fs = std::filesystem;

namespace svts {
namespace {

// Records every option of `cmd` (given or defaulted) as key=value.
void WriteSnapshot(const CLI::App &cmd, const fs::path &dir) {
  KeyValues kv;
  kv["command"] = cmd.get_name();
  for (const CLI::Option *opt : cmd.get_options()) {
    if (opt == cmd.get_help_ptr()) continue;
    std::string value;
    if (opt->get_expected_max() == 0) {
      value = opt->count() > 0 ? "true" : "false";
    } else if (opt->count() > 0) {
      for (const std::string &r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    kv[opt->get_single_name()] = value;
  }
  fs::create_directories(dir);
  WriteKeyValues((dir / (cmd.get_name() + ".config.txt")).string(), kv);
}

fs::path ParentOf(const std::string &file) {
  fs::path p = fs::path(file).parent_path();
  return p.empty() ? fs::path(".") : p;
}

struct VocoderFlags {
  std::string kind = "griffin-lim";
  std::string command;
  int iterations = 30;
  uint64_t seed = 0;

  void Register(CLI::App *cmd) {
    cmd->add_option("--vocoder", kind, "griffin-lim or external")
        ->check(CLI::IsMember({"griffin-lim", "external"}))
        ->capture_default_str();
    cmd->add_option("--vocoder-cmd", command,
                    "External vocoder command; {mel} and {wav} are substituted");
    cmd->add_option("--gl-iters", iterations, "Griffin-Lim iterations")->capture_default_str();
    cmd->add_option("--gl-seed", seed, "Griffin-Lim phase seed")->capture_default_str();
  }

  eval::VocoderAdapter Make() const {
    if (kind == "external") {
      if (command.empty()) throw ValidationError("--vocoder external needs --vocoder-cmd");
      return eval::VocoderAdapter::External("external", command);
    }
    return eval::VocoderAdapter::GriffinLim(iterations, seed);
  }
};

int RunToyData(const CLI::App &cmd, const std::string &out, int clips, double duration,
               uint64_t seed, int speakers) {
  WriteSnapshot(cmd, out);
  training::ToyDataOptions opts;
  opts.num_speakers = speakers;
  std::cout << training::MakeToyDataset(clips, duration, seed, out, opts) << '\n';
  return 0;
}

int RunPreprocess(const CLI::App &cmd, const std::string &manifest, const std::string &out,
                  const training::PreprocessOptions &opts) {
  WriteSnapshot(cmd, out);
  const training::PreprocessReport r = training::PreprocessCorpus(manifest, out, opts);
  for (const auto &f : r.failures) std::cerr << "svts preprocess: " << f.id << ": " << f.message << '\n';
  std::cerr << "svts preprocess: " << r.processed << " processed, " << r.failures.size()
            << " failed, " << r.flagged_frames << " frames with unusable landmarks\n";
  std::cout << r.manifest_path << '\n';
  return r.failures.empty() ? 0 : 1;
}

int RunSplit(const CLI::App &cmd, const std::string &in, const std::string &out,
             const std::string &mode, const std::vector<double> &ratios, uint64_t seed) {
  WriteSnapshot(cmd, ParentOf(out));
  std::vector<ManifestEntry> entries = LoadManifest(in);
  // Keep relative paths only when the new manifest sits next to the old one.
  const bool same_dir = fs::weakly_canonical(ParentOf(in)) == fs::weakly_canonical(ParentOf(out));
  if (!same_dir)
    for (ManifestEntry &e : entries) e = ResolveEntryPaths(e, in);
  const SplitRatios r = {ratios[0], ratios[1], ratios[2]};
  const auto split = MakeSplit(entries, mode == "seen" ? SplitMode::kSeen : SplitMode::kUnseen, r, seed);
  SaveManifest(out, split);
  int counts[3] = {0, 0, 0};
  for (const auto &e : split) ++counts[static_cast<int>(e.split)];
  std::cerr << "svts split: train " << counts[0] << ", val " << counts[1] << ", test " << counts[2]
            << '\n';
  return 0;
}

struct TrainFlags {
  std::string manifest, run_dir, model, preset, loss = "combined";
  double lr = 0.0, weight_decay = 0.01, warmup = 0.1, max_duration = 24.0, grad_clip_norm = 0.0;
  int epochs = 0, batch_size = 8, workers = 0;
  int64_t max_steps = 0;
  uint64_t seed = 0;
  bool grad_clip = false, no_augment = false, time_mask = false, no_time_mask = false;
  bool sc_log_mel = false, dry_run = false;
};

int RunTrain(const CLI::App &cmd, const TrainFlags &f) {
  std::string model_name = "S";
  TrainConfig train;
  if (!f.preset.empty()) {
    const TrainPreset p = LookupTrainPreset(f.preset);
    model_name = p.model;
    train.peak_lr = p.peak_lr;
    train.epochs = p.epochs;
    train.time_mask = p.time_mask;
  }
  if (!f.model.empty()) model_name = f.model;
  if (cmd.count("--lr")) train.peak_lr = f.lr;
  if (cmd.count("--epochs")) train.epochs = f.epochs;
  if (f.time_mask) train.time_mask = true;
  if (f.no_time_mask) train.time_mask = false;
  train.weight_decay = f.weight_decay;
  train.warmup_fraction = f.warmup;
  train.batch_size = f.batch_size;
  train.loss_mode = ParseLossMode(f.loss);
  train.max_duration_s = f.max_duration;
  train.grad_clip_norm = f.grad_clip ? 5.0 : 0.0;
  if (cmd.count("--grad-clip-norm")) train.grad_clip_norm = f.grad_clip_norm;
  train.augment = !f.no_augment;
  train.sc_on_log_mel = f.sc_log_mel;
  train.max_steps = f.max_steps;
  train.num_workers = f.workers;
  train.seed = f.seed;
  const ModelConfig model = model_name == "tiny" ? ModelConfig::Tiny() : ModelConfig::Preset(model_name);

  model.Validate();
  train.Validate();
  WriteSnapshot(cmd, f.run_dir);
  if (f.dry_run) {
    KeyValues resolved = model.ToKeyValues();
    for (const auto &[k, v] : train.ToKeyValues()) resolved[k] = v;
    WriteKeyValues((fs::path(f.run_dir) / "config.txt").string(), resolved);
    return 0;
  }
  std::cerr << "svts train: model " << model.name << " ("
            << nn::Predictor::CountParameters(model) << " parameters), peak lr " << train.peak_lr
            << ", " << train.epochs << " epochs, loss " << LossModeName(train.loss_mode) << '\n';
  const training::FitResult r = training::Fit(f.manifest, model, train, f.run_dir);
  std::cerr << "svts train: best epoch " << r.best_epoch << ", validation loss " << r.best_val_loss
            << '\n';
  std::cout << r.best_checkpoint << '\n';
  return 0;
}

int RunInfer(const CLI::App &cmd, const std::string &ckpt, const std::string &clip_path,
             const std::string &embedding_path, const std::string &out, const std::string &mel_out,
             const VocoderFlags &vf) {
  WriteSnapshot(cmd, ParentOf(out));
  const SpeakerEmbedding embedding = LoadSpeakerEmbedding(embedding_path);
  VideoClip clip = video::LoadClip(clip_path);
  if (clip.width() != kModelCropSize) clip = video::CenterCrop(clip);
  const eval::VocoderAdapter vocoder = vf.Make();
  const auto model = nn::LoadPredictor(ckpt);
  const MelSpectrogram mel = model->Forward(clip, embedding).mel;
  if (!mel_out.empty()) dsp::WriteMelFile(mel_out, mel);
  const Waveform wav = vocoder.Synthesize(mel.values(), fs::path(out).stem().string());
  dsp::WriteWav(out, wav);
  std::cerr << "svts infer: " << clip.num_frames() << " frames -> " << wav.duration_s() << " s\n";
  return 0;
}

int RunEvaluate(const CLI::App &cmd, const std::string &manifest, const std::string &ckpt,
                const std::string &out_dir, const VocoderFlags &vf, const std::string &asr_cmd,
                const std::string &pesq_cmd, int jobs, bool ground_truth) {
  WriteSnapshot(cmd, out_dir);
  if (!ground_truth && ckpt.empty()) throw ValidationError("--checkpoint is required");
  eval::EvaluateOptions opts;
  opts.vocoder = vf.Make();
  if (!asr_cmd.empty()) opts.asr = eval::AsrAdapter{asr_cmd};
  if (!pesq_cmd.empty()) opts.pesq = eval::PesqAdapter{pesq_cmd};
  opts.jobs = jobs;
  opts.out_dir = out_dir;
  opts.ground_truth = ground_truth;
  const eval::MetricReport report = eval::EvaluateCorpus(manifest, ckpt, opts);
  eval::WriteReport(report, (fs::path(out_dir) / "report.jsonl").string());
  std::cout << eval::FormatTable(report);
  bool failed = !report.failures.empty();
  for (const auto &[id, why] : report.failures) std::cerr << "svts evaluate: " << id << ": " << why << '\n';
  for (const auto &row : report.rows)
    for (const std::string &e : row.errors) {
      std::cerr << "svts evaluate: " << row.id << ": " << e << '\n';
      failed = true;
    }
  return failed ? 1 : 0;
}

int RunBench(const CLI::App &cmd, const std::string &mel_dir, const std::vector<std::string> &external,
             const std::string &out, int iterations, int warmup) {
  WriteSnapshot(cmd, ParentOf(out));
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(mel_dir))
    if (e.path().extension() == ".mel") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<Matrix> mels;
  for (const fs::path &p : files) mels.push_back(dsp::ReadMelFile(p.string()).values());

  std::vector<eval::VocoderAdapter> adapters = {eval::VocoderAdapter::GriffinLim(iterations)};
  for (const std::string &spec : external) {
    const size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("--external expects NAME=COMMAND, got '" + spec + "'");
    adapters.push_back(eval::VocoderAdapter::External(spec.substr(0, eq), spec.substr(eq + 1)));
  }
  std::ostringstream lines;
  int status = 0;
  for (const auto &a : adapters) {
    try {
      const eval::BenchmarkResult r = eval::BenchmarkVocoder(a, mels, warmup);
      lines << eval::BenchmarkJson(r) << '\n';
      std::cout << r.adapter << ": " << r.clips << " clips in " << r.seconds << " s, "
                << r.clips_per_second << " clips/sec on " << r.hardware << '\n';
    } catch (const Error &e) {
      std::cerr << "svts bench-vocoder: " << a.name << ": " << e.what() << '\n';
      status = 1;
    }
  }
  std::ofstream os(out);
  os << lines.str();
  if (!os) throw IoError("cannot write " + out);
  return status;
}

}  // namespace
}  // namespace svts

int main(int argc, char *argv[]) {
  using namespace svts;
  CLI::App app{"Video-to-speech synthesis: data preparation, training, inference and evaluation."};
  app.require_subcommand(1);

  CLI::App *toy = app.add_subcommand("toy-data", "Write a synthetic paired corpus");
  std::string toy_out;
  int toy_clips = 8, toy_speakers = 0;
  double toy_duration = 1.0;
  uint64_t toy_seed = 0;
  toy->add_option("--out", toy_out, "Output directory")->required();
  toy->add_option("--clips", toy_clips, "Number of clips")->capture_default_str();
  toy->add_option("--duration", toy_duration, "Clip duration in seconds")->capture_default_str();
  toy->add_option("--speakers", toy_speakers, "Pseudo-speakers (0: automatic)")->capture_default_str();
  toy->add_option("--seed", toy_seed, "Random seed")->capture_default_str();

  CLI::App *pre = app.add_subcommand("preprocess", "Align mouth crops and extract log-mel targets");
  std::string pre_manifest, pre_out;
  training::PreprocessOptions pre_opts;
  pre->add_option("--manifest", pre_manifest, "Raw corpus manifest")->required()->check(CLI::ExistingFile);
  pre->add_option("--out", pre_out, "Output directory")->required();
  pre->add_option("--raw-dir", pre_opts.raw_dir, "Directory that relative video paths resolve against");
  pre->add_option("--landmarks-dir", pre_opts.landmarks_dir,
                  "Directory that relative landmark paths resolve against");
  pre->add_option("--mean-face", pre_opts.mean_face_path, "68-point reference face");
  pre->add_option("--smoothing-window", pre_opts.align.smoothing_window, "Landmark smoothing frames")
      ->capture_default_str();

  CLI::App *split = app.add_subcommand("split", "Assign train/val/test splits");
  std::string split_in, split_out, split_mode = "seen";
  std::vector<double> split_ratios = {0.8, 0.1, 0.1};
  uint64_t split_seed = 0;
  split->add_option("--manifest", split_in, "Input manifest")->required()->check(CLI::ExistingFile);
  split->add_option("--out", split_out, "Output manifest")->required();
  split->add_option("--mode", split_mode, "seen or unseen speakers")
      ->check(CLI::IsMember({"seen", "unseen"}))
      ->capture_default_str();
  split->add_option("--ratios", split_ratios, "train,val,test fractions")
      ->expected(3)
      ->delimiter(',')
      ->capture_default_str();
  split->add_option("--seed", split_seed, "Random seed")->capture_default_str();

  CLI::App *train = app.add_subcommand("train", "Train the spectrogram predictor");
  TrainFlags tf;
  train->add_option("--manifest", tf.manifest, "Preprocessed manifest")->required()->check(CLI::ExistingFile);
  train->add_option("--run-dir", tf.run_dir, "Run directory")->required();
  train->add_option("--model", tf.model, "S, M, L or tiny (overrides the preset)")
      ->check(CLI::IsMember({"S", "M", "L", "tiny"}));
  train->add_option("--preset", tf.preset, "grid-seen, grid-unseen, lrw, lrs3-seen, lrs3-unseen, lrs3-vox2")
      ->check(CLI::IsMember({"grid-seen", "grid-unseen", "lrw", "lrs3-seen", "lrs3-unseen", "lrs3-vox2"}));
  train->add_option("--loss", tf.loss, "combined, l1_only or sc_only")
      ->check(CLI::IsMember({"combined", "l1_only", "sc_only"}))
      ->capture_default_str();
  train->add_option("--lr", tf.lr, "Peak learning rate (overrides the preset)");
  train->add_option("--epochs", tf.epochs, "Epochs (overrides the preset)");
  train->add_option("--batch-size", tf.batch_size, "Clips per batch")->capture_default_str();
  train->add_option("--weight-decay", tf.weight_decay, "AdamW weight decay")->capture_default_str();
  train->add_option("--warmup-fraction", tf.warmup, "Warmup share of all steps")->capture_default_str();
  train->add_option("--max-duration", tf.max_duration, "Drop longer utterances (seconds)")
      ->capture_default_str();
  train->add_option("--max-steps", tf.max_steps, "Stop after this many updates (0: no limit)")
      ->capture_default_str();
  train->add_option("--seed", tf.seed, "Random seed")->capture_default_str();
  train->add_option("--workers", tf.workers, "Loader workers (recorded)")->capture_default_str();
  train->add_flag("--grad-clip", tf.grad_clip, "Clip gradients at global norm 5");
  train->add_option("--grad-clip-norm", tf.grad_clip_norm, "Clip gradients at this global norm");
  train->add_flag("--no-augment", tf.no_augment, "Centre crops instead of random augmentation");
  train->add_flag("--time-mask", tf.time_mask, "Enable temporal masking");
  train->add_flag("--no-time-mask", tf.no_time_mask, "Disable temporal masking");
  train->add_flag("--dry-run", tf.dry_run, "Write the resolved configuration and stop");
  train->add_flag("--sc-log-mel", tf.sc_log_mel, "Spectral convergence on log-mel values");

  CLI::App *infer = app.add_subcommand("infer", "Synthesize speech for one clip");
  std::string inf_ckpt, inf_clip, inf_emb, inf_out, inf_mel;
  VocoderFlags inf_voc;
  infer->add_option("--checkpoint", inf_ckpt, "Model checkpoint")->required();
  infer->add_option("--clip", inf_clip, "Mouth clip (.vid, 96x96 or 88x88)")->required();
  infer->add_option("--embedding", inf_emb, "Speaker embedding")->required();
  infer->add_option("--out", inf_out, "Output WAV")->required();
  infer->add_option("--mel-out", inf_mel, "Also write the predicted log-mel");
  inf_voc.Register(infer);

  CLI::App *evaluate = app.add_subcommand("evaluate", "Score the test split");
  std::string ev_manifest, ev_ckpt, ev_out, ev_asr, ev_pesq;
  int ev_jobs = 1;
  bool ev_gt = false;
  VocoderFlags ev_voc;
  evaluate->add_option("--manifest", ev_manifest, "Preprocessed manifest")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--checkpoint", ev_ckpt, "Model checkpoint");
  evaluate->add_option("--out-dir", ev_out, "Report and WAV directory")->required();
  evaluate->add_option("--asr-cmd", ev_asr, "ASR command; {wav} is substituted");
  evaluate->add_option("--pesq-cmd", ev_pesq, "PESQ command; {ref} and {deg} are substituted");
  evaluate->add_option("--jobs", ev_jobs, "Concurrent utterances")->capture_default_str()->check(CLI::PositiveNumber);
  evaluate->add_flag("--ground-truth", ev_gt, "Score the real audio against itself");
  ev_voc.Register(evaluate);

  CLI::App *bench = app.add_subcommand("bench-vocoder", "Measure vocoder throughput");
  std::string bench_mels, bench_out;
  std::vector<std::string> bench_ext;
  int bench_iters = 30, bench_warmup = 1;
  bench->add_option("--mel-dir", bench_mels, "Directory of .mel files")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--out", bench_out, "Result file (one JSON line per adapter)")->required();
  bench->add_option("--external", bench_ext, "NAME=COMMAND external adapter; {mel} and {wav} are substituted");
  bench->add_option("--gl-iters", bench_iters, "Griffin-Lim iterations")->capture_default_str();
  bench->add_option("--warmup", bench_warmup, "Untimed warmup runs")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*toy) return RunToyData(*toy, toy_out, toy_clips, toy_duration, toy_seed, toy_speakers);
    if (*pre) return RunPreprocess(*pre, pre_manifest, pre_out, pre_opts);
    if (*split) return RunSplit(*split, split_in, split_out, split_mode, split_ratios, split_seed);
    if (*train) return RunTrain(*train, tf);
    if (*infer) return RunInfer(*infer, inf_ckpt, inf_clip, inf_emb, inf_out, inf_mel, inf_voc);
    if (*evaluate)
      return RunEvaluate(*evaluate, ev_manifest, ev_ckpt, ev_out, ev_voc, ev_asr, ev_pesq, ev_jobs, ev_gt);
    if (*bench) return RunBench(*bench, bench_mels, bench_ext, bench_out, bench_iters, bench_warmup);
  } catch (const std::exception &e) {
    std::cerr << "svts " << app.get_subcommands().front()->get_name() << ": " << e.what() << '\n';
    return 1;
  }
  return 1;
}

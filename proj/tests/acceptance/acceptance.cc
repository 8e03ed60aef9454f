// tests/acceptance/acceptance.cc

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

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "svts/core/error.h"
#include "svts/core/manifest.h"
#include "svts/core/rng.h"
#include "svts/dsp/griffin_lim.h"
#include "svts/dsp/stft.h"
#include "svts/dsp/wav_io.h"
#include "svts/eval/adapters.h"
#include "svts/eval/stoi.h"
#include "svts/eval/wer.h"
#include "svts/model/loss.h"
#include "svts/model/predictor.h"
#include "svts/training/dataset.h"
#include "svts/training/preprocess.h"
#include "svts/training/schedule.h"
#include "svts/training/toy_data.h"
#include "svts/training/trainer.h"
#include "svts/video/augment.h"

using namespace svts;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

fs::path Scratch(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("svts_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Toy corpus, aligned and paired with log-mel targets.
std::string PreparedToy(int clips, const std::string &name) {
  const fs::path root = Scratch(name);
  const std::string raw = training::MakeToyDataset(clips, 1.0, 5, (root / "raw").string());
  const auto report = training::PreprocessCorpus(raw, (root / "prep").string());
  if (!report.failures.empty()) throw Error("toy preprocessing failed: " + report.failures[0].message);
  return report.manifest_path;
}

VideoClip RandomClip(int frames, Rng &rng, int side = kModelCropSize) {
  std::vector<double> px(static_cast<size_t>(frames) * side * side);
  for (double &p : px) p = rng.Uniform();
  return VideoClip(frames, side, std::move(px));
}

SpeakerEmbedding RandomEmbedding(Rng &rng) {
  Vector v(kDefaultSpeakerDim);
  for (int i = 0; i < v.size(); ++i) v[i] = rng.Normal();
  return SpeakerEmbedding::Normalized(v);
}

Outcome ParameterCounts() {
  const std::map<std::string, double> published = {{"S", 27.3e6}, {"M", 43.1e6}, {"L", 87.6e6}};
  Outcome o{true, ""};
  for (const auto &[name, target] : published) {
    const int64_t n = nn::Predictor::CountParameters(ModelConfig::Preset(name));
    const double dev = (n - target) / target;
    o.pass = o.pass && std::abs(dev) < 0.05;
    o.detail += name + " " + Fmt(n / 1e6) + "M (" + Fmt(100 * dev) + "%) ";
  }
  return o;
}

Outcome ShapeContract() {
  Rng rng(2);
  const VideoClip clip = RandomClip(20, rng);
  const SpeakerEmbedding e = RandomEmbedding(rng);
  Outcome o{true, ""};
  for (const std::string name : {"S", "M", "L", "tiny"}) {
    const ModelConfig cfg = name == "tiny" ? ModelConfig::Tiny() : ModelConfig::Preset(name);
    const nn::Predictor model(cfg, rng);
    const MelSpectrogram mel = model.Forward(clip, e).mel;
    o.pass = o.pass && mel.num_frames() == 80 && mel.num_bands() == 80;
    o.detail += name + " " + std::to_string(mel.num_frames()) + "x" + std::to_string(mel.num_bands()) + " ";
  }
  return o;
}

double Objective(const nn::Predictor &model, const nn::PredictorBatch &batch, const Matrix &target,
                 const nn::Packing &mel_packing) {
  Rng rng(1);
  const Matrix mel = model.ForwardBatch(batch, nn::RunContext{true, &rng}, nullptr);
  return nn::BatchLoss(mel, target, mel_packing, LossMode::kCombined, false, nullptr).total;
}

Outcome GradientCheck() {
  Rng rng(31);
  const ModelConfig cfg = ModelConfig::Tiny();
  nn::Predictor model(cfg, rng);
  const VideoClip a = RandomClip(4, rng), b = RandomClip(3, rng);
  const SpeakerEmbedding ea = RandomEmbedding(rng), eb = RandomEmbedding(rng);
  const nn::PredictorBatch batch = nn::MakeBatch({&a, &b}, {&ea, &eb});
  nn::Packing mel_packing{{16, 12}};
  Matrix target(28, kMelBands);
  for (int64_t i = 0; i < target.size(); ++i) target.data()[i] = 0.5 * rng.Normal();

  for (nn::Param *p : model.Params()) p->ZeroGrad();
  Rng drop(1);
  nn::Predictor::Cache cache;
  const Matrix mel = model.ForwardBatch(batch, nn::RunContext{true, &drop}, &cache);
  Matrix dmel;
  nn::BatchLoss(mel, target, mel_packing, LossMode::kCombined, false, &dmel);
  model.Backward(cache, batch, dmel);

  const std::vector<nn::Param *> params = model.Params();
  const double h = 1e-6;
  const int samples = 60;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    nn::Param *p = params[rng.UniformInt(params.size())];
    const int64_t idx = static_cast<int64_t>(rng.UniformInt(static_cast<uint64_t>(p->size())));
    double &w = p->value.data()[idx];
    const double orig = w;
    w = orig + h;
    const double up = Objective(model, batch, target, mel_packing);
    w = orig - h;
    const double down = Objective(model, batch, target, mel_packing);
    w = orig;
    const double numeric = (up - down) / (2 * h), analytic = p->grad.data()[idx];
    const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
    worst = std::max(worst, std::abs(numeric - analytic) / denom);
  }
  return {worst < 1e-3, std::to_string(cfg.num_blocks) + " blocks, " + std::to_string(samples) +
                            " parameters, worst relative error " + Fmt(worst)};
}

Outcome OverfitToy(const std::string &manifest) {
  const auto entries = LoadManifest(manifest);
  const std::vector<training::Example> examples = training::LoadExamples(entries, manifest);
  TrainConfig cfg;
  cfg.peak_lr = 3e-3;
  cfg.batch_size = static_cast<int>(examples.size());
  cfg.augment = false;
  training::Trainer trainer(ModelConfig::Tiny(), cfg);
  std::vector<const training::Example *> batch;
  for (const auto &e : examples) batch.push_back(&e);

  const ManifestEntry first = ResolveEntryPaths(entries[0], manifest);
  const Waveform real = dsp::ReadWav(first.audio_path);
  const VideoClip crop = video::CenterCrop(examples[0].clip);
  const eval::VocoderAdapter gl = eval::VocoderAdapter::GriffinLim(30);
  auto stoi_now = [&] {
    const Matrix mel = trainer.model().Forward(crop, examples[0].embedding).mel.values();
    return eval::Stoi(real, gl.Synthesize(mel));
  };

  const int64_t budget = 2000;
  training::ScheduleState sched = training::ScheduleState::Make(budget, cfg.peak_lr, cfg.warmup_fraction);
  double initial = 0.0, last = 0.0, stoi = 0.0;
  int64_t reached = 0;
  for (int64_t step = 0; step < budget; ++step) {
    sched.step = step + 1;
    last = trainer.Step(batch, training::LrAt(sched)).total;
    if (step == 0) initial = last;
    if (reached == 0 && last < 0.1 * initial) reached = step + 1;
    if (reached > 0 && (step + 1 - reached) % 50 == 0) {
      stoi = stoi_now();
      if (stoi > 0.6) break;
    }
  }
  if (reached == 0) stoi = stoi_now();
  return {reached > 0 && stoi > 0.6,
          "initial loss " + Fmt(initial) + ", below 10% at step " +
              (reached > 0 ? std::to_string(reached) : std::string("never")) + ", final ratio " +
              Fmt(last / initial) + " after " + std::to_string(trainer.steps_done()) +
              " steps, Griffin-Lim STOI " + Fmt(stoi)};
}

// Harmonic source with vibrato and a syllable envelope.
std::vector<double> SpeechLike(Rng &rng, double seconds) {
  const size_t n = static_cast<size_t>(kSampleRate * seconds);
  const double f0 = 90.0 + 120.0 * rng.Uniform();
  const double syl = 3.0 + 3.0 * rng.Uniform(), p = 6.0 * rng.Uniform();
  std::vector<double> x(n);
  double phase = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kSampleRate;
    phase += 2.0 * pi * f0 * (1.0 + 0.05 * std::sin(2.0 * pi * 1.3 * t)) / kSampleRate;
    double v = 0.0;
    for (int h = 1; h <= 25; ++h) v += std::sin(h * phase) / (h * h);
    const double env = 0.2 + 0.8 * std::pow(std::max(0.0, std::sin(2.0 * pi * syl * t + p)), 2);
    x[i] = 0.4 * env * v + 0.002 * rng.Normal();
  }
  return x;
}

Outcome DspOracles() {
  Rng rng(41);
  double istft_err = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> x = SpeechLike(rng, 1.0 + 0.3 * trial);
    for (double &v : x) v += 0.1 * rng.Normal();
    const auto y = dsp::Istft(dsp::Stft(x), {}, x.size());
    for (size_t i = 1200; i + 1200 < x.size(); ++i) istft_err = std::max(istft_err, std::abs(x[i] - y[i]));
  }

  std::vector<double> sine(kSampleRate);
  for (size_t i = 0; i < sine.size(); ++i) sine[i] = 0.5 * std::sin(2.0 * pi * 1000.0 * i / kSampleRate);
  const Matrix mag = dsp::Magnitude(dsp::Stft(sine));
  int off_peak = 0;
  for (int f = 2; f < mag.rows() - 2; ++f) {
    Eigen::Index arg;
    mag.row(f).maxCoeff(&arg);
    off_peak += arg != 85;
  }
  Eigen::Index summed;
  mag.colwise().sum().maxCoeff(&summed);

  int improved = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const dsp::LinearSpectrogram target(dsp::Magnitude(dsp::Stft(SpeechLike(rng, 0.6))));
    dsp::GriffinLimOptions opts;
    opts.seed = trial;
    const auto r = dsp::GriffinLimDetailed(target, opts, true);
    improved += r.history.size() == 30 && r.history.back() < r.history.front();
  }
  return {istft_err < 1e-6 && off_peak == 0 && summed == 85 && improved == 10,
          "istft interior error " + Fmt(istft_err) + ", peak bin " + std::to_string(summed) + " (" +
              std::to_string(off_peak) + " interior frames elsewhere), Griffin-Lim 30 < 1 iteration on " +
              std::to_string(improved) + "/10"};
}

std::string StoiData(const std::string &name) { return std::string(SVTS_TEST_DATA_DIR) + "/stoi/" + name; }

int EditDistance(const std::vector<std::string> &a, const std::vector<std::string> &b) {
  std::map<std::pair<size_t, size_t>, int> memo;
  std::function<int(size_t, size_t)> d = [&](size_t i, size_t j) -> int {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    const auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int best = d(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min({best, d(i + 1, j) + 1, d(i, j + 1) + 1});
    return memo[key] = best;
  };
  return d(0, 0);
}

Outcome MetricOracles() {
  std::ifstream in(StoiData("oracle.tsv"));
  if (!in) return {false, "missing oracle table"};
  double identity = 0.0, worst = 0.0;
  int rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name, kind;
    int rate;
    double stoi, estoi;
    ls >> name >> rate >> kind >> stoi >> estoi;
    const auto ref = dsp::ReadWavData(StoiData(name + "_ref.wav"));
    const auto deg = dsp::ReadWavData(StoiData(name + "_deg.wav"));
    identity = std::max({identity, std::abs(eval::Stoi(ref.samples, ref.samples, rate) - 1.0),
                         std::abs(eval::Estoi(ref.samples, ref.samples, rate) - 1.0)});
    worst = std::max({worst, std::abs(eval::Stoi(ref.samples, deg.samples, rate) - stoi),
                      std::abs(eval::Estoi(ref.samples, deg.samples, rate) - estoi)});
    ++rows;
  }

  Rng rng(43);
  const std::vector<std::string> vocab = {"bin", "lay", "place", "set", "blue", "green", "red",
                                          "at", "by", "in", "with", "a", "b", "now"};
  int wer_ok = 0;
  for (int k = 0; k < 100; ++k) {
    std::vector<std::string> a(1 + rng.UniformInt(10)), b(rng.UniformInt(11));
    for (auto &w : a) w = vocab[rng.UniformInt(vocab.size())];
    for (auto &w : b) w = vocab[rng.UniformInt(vocab.size())];
    wer_ok += eval::Wer(a, b) == static_cast<double>(EditDistance(a, b)) / a.size();
  }
  return {rows == 20 && identity <= 1e-6 && worst < 0.02 && wer_ok == 100,
          "identity deviation " + Fmt(identity) + ", worst |diff| vs reference on " + std::to_string(rows) +
              " pairs " + Fmt(worst) + ", wer exact on " + std::to_string(wer_ok) + "/100"};
}

Outcome ScheduleContract() {
  const double peak = 1e-3;
  bool ok = true;
  double worst_end = 0.0;
  for (int64_t total : {10, 100, 2000, 54321}) {
    training::ScheduleState s = training::ScheduleState::Make(total, peak);
    s.step = 0;
    ok = ok && training::LrAt(s) == 0.0;
    s.step = s.warmup_steps;
    ok = ok && std::abs(training::LrAt(s) - peak) <= 1e-15;
    s.step = total;
    worst_end = std::max(worst_end, training::LrAt(s) / peak);
    ok = ok && training::LrAt(s) < 1e-12 * peak;
    // Continuity: the step on either side of the boundary differs from the
    // peak by at most one increment of the respective phase.
    s.step = s.warmup_steps - 1;
    const double left = training::LrAt(s);
    s.step = s.warmup_steps + 1;
    const double right = training::LrAt(s);
    ok = ok && peak - left <= peak / s.warmup_steps + 1e-18;
    ok = ok && peak - right <= peak * (1.0 - std::cos(pi / (total - s.warmup_steps))) / 2.0 + 1e-18;
  }
  return {ok, "final/peak " + Fmt(worst_end)};
}

Outcome AugmentationStatistics() {
  Rng rng(47);
  const VideoClip clip = RandomClip(1, rng, 96);
  const int n = 10000;
  int flips = 0, erases = 0, bad_rects = 0;
  double min_area = 1.0, max_area = 0.0;
  for (int seed = 0; seed < n; ++seed) {
    const video::AugmentTrace t = video::Augment(clip, video::AugmentConfig{}, seed).trace;
    flips += t.flipped;
    if (!t.erase) continue;
    ++erases;
    const double area = static_cast<double>(t.erase->height * t.erase->width) / (88.0 * 88.0);
    const double aspect = static_cast<double>(t.erase->height) / t.erase->width;
    min_area = std::min(min_area, area);
    max_area = std::max(max_area, area);
    bad_rects += area < 0.02 || area > 0.33 || aspect < 0.3 || aspect > 3.3;
  }
  const VideoClip two_s = RandomClip(40, rng, 88);
  int longest = 0;
  for (int seed = 0; seed < n; ++seed)
    for (const auto &run : video::TimeMask(two_s, 0.4, seed).runs) longest = std::max(longest, run.length);
  const double pf = flips / double(n), pe = erases / double(n);
  return {std::abs(pf - 0.5) <= 0.02 && std::abs(pe - 0.5) <= 0.02 && bad_rects == 0 && longest <= 8,
          "flip " + Fmt(pf) + ", erase " + Fmt(pe) + ", area range [" + Fmt(min_area) + ", " +
              Fmt(max_area) + "], " + std::to_string(bad_rects) + " rectangles out of range, longest mask " +
              std::to_string(longest) + " frames"};
}

Outcome VocoderHarness() {
  const std::string manifest = PreparedToy(10, "bench");
  const fs::path mels = fs::path(manifest).parent_path() / "clips";
  const fs::path out = fs::path(manifest).parent_path() / "bench.jsonl";
  std::string cmd = eval::ShellQuote(SVTS_CLI) + " bench-vocoder --mel-dir " + eval::ShellQuote(mels.string()) +
                    " --out " + eval::ShellQuote(out.string());
  int expected = 1;
  if (const char *ext = std::getenv("SVTS_EXTERNAL_VOCODER"); ext && *ext) {
    cmd += " --external " + eval::ShellQuote(ext);
    ++expected;
  }
  const eval::CommandResult r = eval::RunCommand(cmd + " 2>&1");
  std::ifstream in(out);
  int positive = 0, lines = 0;
  std::string detail;
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line);
    ++lines;
    const double cps = j["clips_per_sec"].get<double>();
    positive += cps > 0.0 && !j["hardware"].get<std::string>().empty();
    detail += j["adapter"].get<std::string>() + " " + Fmt(cps) + " clips/sec on " +
              j["hardware"].get<std::string>() + "; ";
  }
  return {r.exit_code == 0 && lines == expected && positive == expected,
          detail.empty() ? "no result (exit " + std::to_string(r.exit_code) + ")" : detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char *name;
    std::function<Outcome()> run;
  };
  std::string overfit_manifest;
  const std::vector<Criterion> criteria = {
      {"parameter counts", ParameterCounts},
      {"shape contract", ShapeContract},
      {"gradient check", GradientCheck},
      {"overfit toy", [&] { return OverfitToy(PreparedToy(8, "overfit")); }},
      {"dsp oracles", DspOracles},
      {"metric oracles", MetricOracles},
      {"schedule contract", ScheduleContract},
      {"augmentation statistics", AugmentationStatistics},
      {"vocoder harness", VocoderHarness},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception &e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].name << ": " << o.detail
              << " (" << Fmt(secs) << " s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

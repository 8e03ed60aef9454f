// tests/unit/training_test.cc

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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "doctest.h"
#include "svts/core/error.h"
#include "svts/core/manifest.h"
#include "svts/dsp/mel.h"
#include "svts/dsp/spectrogram_io.h"
#include "svts/dsp/wav_io.h"
#include "svts/model/checkpoint.h"
#include "svts/training/adamw.h"
#include "svts/training/dataset.h"
#include "svts/training/preprocess.h"
#include "svts/training/schedule.h"
#include "svts/training/toy_data.h"
#include "svts/training/trainer.h"
#include "svts/video/clip_io.h"

using namespace svts;
using namespace svts::training;
namespace fs = std::filesystem;

namespace {

fs::path TempDir(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("svts_training_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string ReadBytes(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Byte-for-byte equality of two directory trees.
bool SameTree(const fs::path &a, const fs::path &b) {
  std::vector<fs::path> fa, fb;
  for (const auto &e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) fa.push_back(fs::relative(e.path(), a));
  for (const auto &e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) fb.push_back(fs::relative(e.path(), b));
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  if (fa != fb) return false;
  for (const auto &rel : fa)
    if (ReadBytes(a / rel) != ReadBytes(b / rel)) return false;
  return true;
}

// Preprocessed 8-clip, 1 s toy corpus shared by the tests in this file.
const std::string &ToyManifest() {
  static const std::string path = [] {
    const fs::path root = TempDir("toy");
    const std::string raw = MakeToyDataset(8, 1.0, 5, (root / "raw").string());
    const PreprocessReport r = PreprocessCorpus(raw, (root / "prep").string());
    REQUIRE(r.failures.empty());
    return r.manifest_path;
  }();
  return path;
}

const std::vector<Example> &ToyExamples() {
  static const std::vector<Example> ex = LoadExamples(LoadManifest(ToyManifest()), ToyManifest());
  return ex;
}

TrainConfig SmallTrain() {
  TrainConfig t;
  t.batch_size = 4;
  t.peak_lr = 1e-3;
  t.seed = 17;
  return t;
}

ModelConfig TinyWithDropout() {
  ModelConfig m = ModelConfig::Tiny();
  m.dropout = 0.1;
  return m;
}

}  // namespace

TEST_CASE("schedule endpoints and boundary") {
  for (int64_t total : {10, 37, 100, 2000, 12345}) {
    const double peak = 7e-3;
    ScheduleState s = ScheduleState::Make(total, peak);
    CHECK(s.warmup_steps == std::llround(0.1 * total));
    s.step = 0;
    CHECK(LrAt(s) == 0.0);
    s.step = s.warmup_steps;
    CHECK(LrAt(s) == doctest::Approx(peak).epsilon(1e-15));
    s.step = total;
    CHECK(LrAt(s) < 1e-12 * peak);
    // Left and right limits at the boundary approach the peak.
    s.step = s.warmup_steps - 1;
    const double left = LrAt(s);
    s.step = s.warmup_steps + 1;
    const double right = LrAt(s);
    CHECK(peak - left <= peak / s.warmup_steps + 1e-18);
    CHECK(peak - right <= peak * (1.0 - std::cos(M_PI / (total - s.warmup_steps))) / 2.0 + 1e-18);
    // Rising during warmup, falling afterwards.
    double prev = -1.0;
    for (int64_t k = 0; k <= s.warmup_steps; ++k) {
      s.step = k;
      CHECK(LrAt(s) > prev);
      prev = LrAt(s);
    }
    for (int64_t k = s.warmup_steps + 1; k <= total; ++k) {
      s.step = k;
      const double lr = LrAt(s);
      CHECK(lr < prev);
      prev = lr;
    }
  }
}

TEST_CASE("schedule rejects invalid states") {
  ScheduleState s = ScheduleState::Make(100, 1e-3);
  s.step = 101;
  CHECK_THROWS_AS(LrAt(s), ValidationError);
  s.step = -1;
  CHECK_THROWS_AS(LrAt(s), ValidationError);
  CHECK_THROWS_AS(ScheduleState::Make(0, 1e-3), ValidationError);
}

TEST_CASE("adamw decoupled decay") {
  nn::Param p("w", {2, 3}, 2, 3);
  p.value << 1, -2, 3, -4, 5, -6;
  const Matrix start = p.value;
  p.grad = Matrix::Zero(2, 3);

  AdamWOptions no_decay;
  no_decay.weight_decay = 0.0;
  AdamW a({&p}, no_decay);
  a.Step(1e-3);
  CHECK(p.value == start);

  AdamW b({&p}, AdamWOptions{});
  b.Step(1e-3);
  for (int i = 0; i < 6; ++i)
    CHECK(p.value.data()[i] == doctest::Approx(start.data()[i] * (1.0 - 1e-5)).epsilon(1e-15));
}

TEST_CASE("adamw iterates match the update equations on w^2") {
  nn::Param p("w", {1}, 1, 1);
  p.value(0, 0) = 1.5;
  AdamW opt({&p}, AdamWOptions{});
  // Reference: the textbook AdamW recursion written out for one scalar.
  double w = 1.5, m = 0.0, v = 0.0;
  const double b1 = 0.9, b2 = 0.98, eps = 1e-8, wd = 0.01;
  for (int t = 1; t <= 200; ++t) {
    const double lr = 0.05 * (t < 20 ? t / 20.0 : 1.0);
    p.grad = Matrix::Constant(1, 1, 2.0 * p.value(0, 0));
    opt.Step(lr);
    const double g = 2.0 * w;
    w -= lr * wd * w;
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mhat = m / (1 - std::pow(b1, t)), vhat = v / (1 - std::pow(b2, t));
    w -= lr * mhat / (std::sqrt(vhat) + eps);
    REQUIRE(p.value(0, 0) == doctest::Approx(w).epsilon(1e-12));
  }
  CHECK(std::abs(w) < 0.1);
  CHECK(opt.steps() == 200);
}

TEST_CASE("adamw rejects non-finite gradients before updating") {
  nn::Param a("layer.a", {2}, 1, 2), b("layer.b", {2}, 1, 2);
  a.value << 1, 2;
  b.value << 3, 4;
  a.grad = Matrix::Constant(1, 2, 0.5);
  b.grad = Matrix::Constant(1, 2, 0.5);
  b.grad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  AdamW opt({&a, &b});
  try {
    opt.Step(1e-3);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("layer.b") != std::string::npos);
  }
  CHECK(a.value(0, 0) == 1.0);
  CHECK(opt.steps() == 0);
}

TEST_CASE("global gradient clipping") {
  nn::Param a("a", {2}, 1, 2), b("b", {1}, 1, 1);
  a.grad = Matrix(1, 2);
  a.grad << 3, 0;
  b.grad = Matrix::Constant(1, 1, 4);
  CHECK(ClipGradNorm({&a, &b}, 10.0) == doctest::Approx(5.0));
  CHECK(a.grad(0, 0) == 3.0);
  CHECK(ClipGradNorm({&a, &b}, 1.0) == doctest::Approx(5.0));
  const double n = std::sqrt(a.grad.squaredNorm() + b.grad.squaredNorm());
  CHECK(n == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("toy dataset contract") {
  const auto entries = LoadManifest(ToyManifest());
  REQUIRE(entries.size() == 8);
  for (const auto &ex : ToyExamples()) {
    CHECK(ex.clip.num_frames() == 20);
    CHECK(ex.clip.width() == kStoredCropSize);
    CHECK(ex.mel.rows() == 80);
    CHECK(ex.mel.cols() == 80);
    CHECK(ex.embedding.vector().norm() == doctest::Approx(1.0));
  }
  for (const auto &e : entries) CHECK(e.duration_s == doctest::Approx(1.0));
}

TEST_CASE("toy dataset is reproducible from its seed") {
  const fs::path root = TempDir("repro");
  MakeToyDataset(3, 1.0, 42, (root / "a").string());
  MakeToyDataset(3, 1.0, 42, (root / "b").string());
  MakeToyDataset(3, 1.0, 43, (root / "c").string());
  CHECK(SameTree(root / "a", root / "b"));
  CHECK_FALSE(SameTree(root / "a", root / "c"));
  fs::remove_all(root);
}

TEST_CASE("larger aperture gives a higher spectral centroid") {
  const fs::path root = TempDir("centroid");
  const int n = 8;
  const std::string manifest = MakeToyDataset(n, 1.0, 9, root.string());
  const auto entries = LoadManifest(manifest);
  std::vector<double> aperture(n), centroid(n);
  for (int i = 0; i < n; ++i) {
    const auto a = ToyAperture(20, 9, i);
    double s = 0.0;
    for (double v : a) s += v;
    aperture[i] = s / a.size();
    const auto resolved = ResolveEntryPaths(entries[i], manifest);
    const Matrix mel = dsp::LogMel(dsp::ReadWav(resolved.audio_path)).values();
    const std::vector<double> hz = dsp::MelCenterFrequencies(kMelBands, 0.0, 12000.0);
    // Mean over frames of the per-frame centroid.
    double sum = 0.0;
    for (int t = 0; t < mel.rows(); ++t) {
      double num = 0.0, den = 0.0;
      for (int b = 0; b < mel.cols(); ++b) {
        const double e = std::exp(mel(t, b));
        num += e * hz[b];
        den += e;
      }
      sum += num / den;
    }
    centroid[i] = sum / mel.rows();
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (aperture[i] > aperture[j] + 0.02)
        CHECK_MESSAGE(centroid[i] > centroid[j],
                      "clip " << i << " a=" << aperture[i] << " c=" << centroid[i] << " vs clip " << j
                              << " a=" << aperture[j] << " c=" << centroid[j]);
  fs::remove_all(root);
}

TEST_CASE("preprocessing skips utterances with missing landmarks and is idempotent") {
  const fs::path root = TempDir("prep");
  const std::string raw = MakeToyDataset(3, 1.0, 21, (root / "raw").string());
  auto entries = LoadManifest(raw);
  fs::remove(ResolveEntryPaths(entries[1], raw).landmarks_path);
  const PreprocessReport a = PreprocessCorpus(raw, (root / "a").string());
  REQUIRE(a.failures.size() == 1);
  CHECK(a.failures[0].id == entries[1].id);
  CHECK(a.processed == 2);
  const auto out = LoadManifest(a.manifest_path);
  REQUIRE(out.size() == 2);
  for (const auto &e : out) {
    const auto r = ResolveEntryPaths(e, a.manifest_path);
    const VideoClip clip = video::LoadClip(r.video_path);
    const MelSpectrogram mel = dsp::ReadMelFile(fs::path(r.video_path).replace_extension(".mel").string());
    CHECK(mel.num_frames() == 4 * clip.num_frames());
  }
  PreprocessCorpus(raw, (root / "b").string());
  CHECK(SameTree(root / "a", root / "b"));
  PreprocessCorpus(raw, (root / "a").string());
  CHECK(SameTree(root / "a", root / "b"));
  fs::remove_all(root);
}

TEST_CASE("fit with one epoch of one batch writes one checkpoint") {
  const fs::path run = TempDir("fit1");
  TrainConfig t = SmallTrain();
  t.batch_size = 8;
  t.epochs = 1;
  const auto &ex = ToyExamples();
  Trainer trainer(ModelConfig::Tiny(), t);
  const FitResult r = trainer.Fit(ex, {ex.begin(), ex.begin() + 2}, run.string());
  REQUIRE(r.checkpoints.size() == 1);
  CHECK(r.best_checkpoint == r.checkpoints[0]);
  CHECK(r.best_epoch == 1);
  CHECK(r.train_losses.size() == 1);
  CHECK(fs::exists(r.best_checkpoint));
  CHECK(fs::exists(run / "config.txt"));
  const KeyValues snap = ReadKeyValues((run / "config.txt").string());
  CHECK(snap.at("train.batch_size") == "8");
  std::ifstream metrics(run / "metrics.jsonl");
  int lines = 0;
  for (std::string line; std::getline(metrics, line);) {
    CHECK(line.find("\"val_loss\"") != std::string::npos);
    ++lines;
  }
  CHECK(lines == 2);
  const nn::CheckpointState st = nn::LoadCheckpoint(r.best_checkpoint);
  CHECK(st.epoch == 1);
  CHECK(st.step == 1);
  CHECK(st.val_loss == doctest::Approx(r.best_val_loss));
  fs::remove_all(run);
}

TEST_CASE("best epoch is the first minimum of the validation curve") {
  CHECK(BestEpoch({3.0, 2.0, 1.0}) == 3);
  CHECK(BestEpoch({1.0, 2.0, 3.0}) == 1);
  CHECK(BestEpoch({2.0, 1.0, 1.0, 4.0}) == 2);
  CHECK(BestEpoch({}) == 0);
}

TEST_CASE("fit is deterministic for a fixed seed") {
  const auto &ex = ToyExamples();
  const std::vector<Example> val(ex.begin(), ex.begin() + 2);
  TrainConfig t = SmallTrain();
  t.epochs = 2;
  std::vector<std::vector<double>> curves;
  for (int k = 0; k < 2; ++k) {
    const fs::path run = TempDir("det" + std::to_string(k));
    Trainer trainer(TinyWithDropout(), t);
    const FitResult r = trainer.Fit(ex, val, run.string());
    CHECK(r.train_losses.size() == 4);
    CHECK(r.val_losses.size() == 2);
    std::vector<double> c = r.train_losses;
    c.insert(c.end(), r.val_losses.begin(), r.val_losses.end());
    curves.push_back(c);
    fs::remove_all(run);
  }
  CHECK(curves[0] == curves[1]);
}

TEST_CASE("checkpoint round trip resumes with bit-identical next-step loss") {
  const auto &ex = ToyExamples();
  std::vector<const Example *> b1 = {&ex[0], &ex[1], &ex[2]}, b2 = {&ex[3], &ex[4], &ex[5]};
  const fs::path dir = TempDir("resume");
  const std::string ckpt = (dir / "mid.ckpt").string();

  Trainer a(TinyWithDropout(), SmallTrain());
  a.Step(b1, 1e-3);
  a.SaveCheckpoint(ckpt, 1, 0.5);
  const nn::LossValue expected = a.Step(b2, 1e-3);
  const nn::LossValue expected_next = a.Step(b1, 1e-3);

  TrainConfig other = SmallTrain();
  other.seed = 999;  // different initial weights and streams
  Trainer b(TinyWithDropout(), other);
  b.Resume(ckpt);
  CHECK(b.steps_done() == 1);
  const nn::LossValue got = b.Step(b2, 1e-3);
  CHECK(got.total == expected.total);
  CHECK(got.l1 == expected.l1);
  CHECK(b.Step(b1, 1e-3).total == expected_next.total);

  ModelConfig m = ModelConfig::Tiny();
  m.num_blocks = 1;
  Trainer mismatched(m, SmallTrain());
  CHECK_THROWS_AS(mismatched.Resume(ckpt), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("fit errors") {
  const auto &ex = ToyExamples();
  const fs::path run = TempDir("errors");
  Trainer trainer(ModelConfig::Tiny(), SmallTrain());
  CHECK_THROWS_AS(trainer.Fit(ex, {}, run.string()), ValidationError);
  CHECK_THROWS_AS(trainer.Fit({}, ex, run.string()), ValidationError);

  // Manifest without a validation split.
  CHECK_THROWS_AS(Fit(ToyManifest(), ModelConfig::Tiny(), SmallTrain(), run.string()), ValidationError);

  // A non-finite target makes the loss non-finite.
  Example bad = ex[0];
  bad.mel(3, 3) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(trainer.Step({&bad}, 1e-3), Error);
  fs::remove_all(run);
}

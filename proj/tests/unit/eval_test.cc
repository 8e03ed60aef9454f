// tests/unit/eval_test.cc

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
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "svts/core/error.h"
#include "svts/core/manifest.h"
#include "svts/core/rng.h"
#include "svts/dsp/mel.h"
#include "svts/dsp/wav_io.h"
#include "svts/eval/benchmark.h"
#include "svts/eval/evaluate.h"
#include "svts/eval/stoi.h"
#include "svts/eval/wer.h"
#include "svts/model/checkpoint.h"
#include "svts/training/preprocess.h"
#include "svts/training/toy_data.h"

using namespace svts;
using namespace svts::eval;
namespace fs = std::filesystem;

namespace {

// Voiced source with a gliding pitch, syllable-rate envelope and pauses.
std::vector<double> SpeechLike(Rng &rng, int rate, double seconds) {
  const size_t n = static_cast<size_t>(rate * seconds);
  const double f0 = 100.0 + 80.0 * rng.Uniform();
  const double syl = 3.0 + 2.0 * rng.Uniform();
  const double p1 = 6.0 * rng.Uniform(), p2 = 6.0 * rng.Uniform();
  std::vector<double> x(n);
  double phase = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    phase += 2.0 * std::numbers::pi * (f0 + 25.0 * std::sin(2.0 * std::numbers::pi * 0.6 * t)) / rate;
    double v = 0.0;
    for (int h = 1; h <= 20; ++h) {
      if (h * (f0 + 25.0) > rate / 2.0) break;
      v += std::sin(h * phase) / h;
    }
    double env = std::max(0.0, std::sin(2.0 * std::numbers::pi * syl * t + p1));
    if (std::sin(2.0 * std::numbers::pi * 0.4 * t + p2) < -0.6) env = 0.0;
    x[i] = 0.3 * env * v + 1e-4 * rng.Normal();
  }
  return x;
}

struct OracleRow {
  std::string name;
  int rate;
  double stoi;
  double estoi;
};

std::vector<OracleRow> LoadOracle() {
  std::ifstream in(std::string(SVTS_TEST_DATA_DIR) + "/stoi/oracle.tsv");
  REQUIRE(in);
  std::vector<OracleRow> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    OracleRow r;
    std::string kind;
    ls >> r.name >> r.rate >> kind >> r.stoi >> r.estoi;
    rows.push_back(r);
  }
  return rows;
}

std::string DataPath(const std::string &name) {
  return std::string(SVTS_TEST_DATA_DIR) + "/stoi/" + name;
}

// Minimum edits by top-down recursion over (i, j) with memoisation.
int EditDistanceOracle(const std::vector<std::string> &a, const std::vector<std::string> &b) {
  std::map<std::pair<size_t, size_t>, int> memo;
  std::function<int(size_t, size_t)> d = [&](size_t i, size_t j) -> int {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int best = d(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, d(i + 1, j) + 1);
    best = std::min(best, d(i, j + 1) + 1);
    memo[key] = best;
    return best;
  };
  return d(0, 0);
}

fs::path TempDir(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("svts_eval_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Preprocessed toy corpus with every entry in the test split.
std::string ToyTestCorpus(const fs::path &root, int clips) {
  const std::string raw = training::MakeToyDataset(clips, 2.0, 11, (root / "raw").string());
  const auto report = training::PreprocessCorpus(raw, (root / "prep").string());
  REQUIRE(report.failures.empty());
  auto entries = LoadManifest(report.manifest_path);
  for (auto &e : entries) e.split = Split::kTest;
  SaveManifest(report.manifest_path, entries);
  return report.manifest_path;
}

std::string TinyCheckpoint(const fs::path &dir) {
  Rng rng(3);
  nn::Predictor model(ModelConfig::Tiny(), rng);
  nn::CheckpointState state;
  state.model = model.config();
  nn::CaptureModel(model, state);
  const std::string path = (dir / "tiny.ckpt").string();
  nn::SaveCheckpoint(path, state);
  return path;
}

}  // namespace

TEST_CASE("stoi and estoi of identical signals are one") {
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    const int rate = i % 3 == 0 ? 16000 : kSampleRate;
    const std::vector<double> x = SpeechLike(rng, rate, 1.5 + 0.1 * i);
    CHECK(Stoi(x, x, rate) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(Estoi(x, x, rate) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("stoi and estoi agree with reference implementation") {
  const auto rows = LoadOracle();
  REQUIRE(rows.size() == 20);
  double worst_stoi = 0.0, worst_estoi = 0.0;
  for (const auto &r : rows) {
    const auto ref = dsp::ReadWavData(DataPath(r.name + "_ref.wav"));
    const auto deg = dsp::ReadWavData(DataPath(r.name + "_deg.wav"));
    REQUIRE(ref.sample_rate == r.rate);
    const double s = Stoi(ref.samples, deg.samples, r.rate);
    const double e = Estoi(ref.samples, deg.samples, r.rate);
    worst_stoi = std::max(worst_stoi, std::abs(s - r.stoi));
    worst_estoi = std::max(worst_estoi, std::abs(e - r.estoi));
    CHECK_MESSAGE(std::abs(s - r.stoi) < 0.02, r.name << " stoi " << s << " vs " << r.stoi);
    CHECK_MESSAGE(std::abs(e - r.estoi) < 0.02, r.name << " estoi " << e << " vs " << r.estoi);
  }
  MESSAGE("max |stoi - oracle| = " << worst_stoi << ", max |estoi - oracle| = " << worst_estoi);
}

TEST_CASE("noise scores low") {
  // pair14 degrades with independent white noise.
  const auto ref = dsp::ReadWavData(DataPath("pair14_ref.wav"));
  const auto deg = dsp::ReadWavData(DataPath("pair14_deg.wav"));
  CHECK(Stoi(ref.samples, deg.samples, ref.sample_rate) < 0.35);
  CHECK(std::abs(Estoi(ref.samples, deg.samples, ref.sample_rate)) < 0.05);
}

TEST_CASE("stoi is invariant to the gain of the degraded signal") {
  Rng rng(2);
  for (int i = 0; i < 5; ++i) {
    std::vector<double> x = SpeechLike(rng, kSampleRate, 2.0);
    std::vector<double> y = x, y2(x.size());
    for (size_t k = 0; k < y.size(); ++k) {
      y[k] = 0.6 * y[k] + 0.02 * rng.Normal();
      y2[k] = 1.5 * y[k];
    }
    CHECK(Stoi(x, y, kSampleRate) == doctest::Approx(Stoi(x, y2, kSampleRate)).epsilon(1e-6));
    CHECK(Estoi(x, y, kSampleRate) == doctest::Approx(Estoi(x, y2, kSampleRate)).epsilon(1e-6));
  }
}

TEST_CASE("estoi never exceeds one") {
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    std::vector<double> x = SpeechLike(rng, kSampleRate, 1.5);
    std::vector<double> y(x.size());
    const double noise = 0.001 * std::pow(4.0, i);
    for (size_t k = 0; k < x.size(); ++k) y[k] = x[k] + noise * rng.Normal();
    CHECK(Estoi(x, y, kSampleRate) <= 1.0 + 1e-12);
    CHECK(Stoi(x, y, kSampleRate) <= 1.0 + 1e-12);
  }
}

TEST_CASE("stoi truncates to the shorter signal") {
  Rng rng(5);
  std::vector<double> x = SpeechLike(rng, kSampleRate, 2.0);
  std::vector<double> longer = x;
  for (int i = 0; i < 5000; ++i) longer.push_back(0.3 * rng.Normal());
  CHECK(Stoi(x, longer, kSampleRate) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("stoi rejects short clips") {
  Rng rng(6);
  Waveform tiny(SpeechLike(rng, kSampleRate, 0.2));
  CHECK_THROWS_AS(Stoi(tiny, tiny), ValidationError);
  CHECK_THROWS_AS(Estoi(tiny, tiny), ValidationError);
  const std::vector<double> at10k = SpeechLike(rng, 10000, 0.35);
  CHECK_THROWS_AS(Stoi(at10k, at10k, 10000), ValidationError);
}

TEST_CASE("wer examples") {
  const auto ref = Tokenize("bin blue at f two now");
  CHECK(Wer(ref, ref) == 0.0);
  CHECK(Wer(ref, Tokenize("bin blue at f two")) == doctest::Approx(1.0 / 6.0));
  const EditCounts c = AlignWords(ref, Tokenize("bin blue at f two"));
  CHECK(c.deletions == 1);
  CHECK(c.substitutions == 0);
  CHECK(c.insertions == 0);
  CHECK(Wer(Tokenize("a b"), Tokenize("a x b c")) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Wer({}, Tokenize("a")), ValidationError);
  CHECK(Tokenize("Bin BLUE, at f-two!") ==
        std::vector<std::string>{"bin", "blue", "at", "f", "two"});
}

TEST_CASE("wer matches recursive edit distance on random pairs") {
  Rng rng(7);
  const std::vector<std::string> vocab = {"bin", "lay", "place", "set", "blue", "green",
                                          "red", "at", "by", "in", "with", "a", "b", "now"};
  for (int k = 0; k < 100; ++k) {
    std::vector<std::string> a(1 + rng.UniformInt(10)), b(rng.UniformInt(11));
    for (auto &w : a) w = vocab[rng.UniformInt(vocab.size())];
    for (auto &w : b) w = vocab[rng.UniformInt(vocab.size())];
    const EditCounts c = AlignWords(a, b);
    REQUIRE(c.errors() == EditDistanceOracle(a, b));
    CHECK(c.ref_words == static_cast<int>(a.size()));
    CHECK(c.substitutions + c.deletions == static_cast<int>(a.size()) -
                                               (static_cast<int>(b.size()) - c.insertions -
                                                c.substitutions));
    CHECK(Wer(a, b) == static_cast<double>(EditDistanceOracle(a, b)) / a.size());
  }
}

TEST_CASE("inserting the same word into both transcripts keeps the error count") {
  Rng rng(8);
  const std::vector<std::string> vocab = {"one", "two", "three", "four", "five"};
  for (int k = 0; k < 50; ++k) {
    std::vector<std::string> a(2 + rng.UniformInt(6)), b(2 + rng.UniformInt(6));
    for (auto &w : a) w = vocab[rng.UniformInt(vocab.size())];
    for (auto &w : b) w = vocab[rng.UniformInt(vocab.size())];
    const int before = AlignWords(a, b).errors();
    // Front and back insertions keep the optimal alignment intact.
    auto a2 = a, b2 = b;
    a2.insert(a2.begin(), "zebra");
    b2.insert(b2.begin(), "zebra");
    CHECK(AlignWords(a2, b2).errors() == before);
    a2.push_back("yak");
    b2.push_back("yak");
    CHECK(AlignWords(a2, b2).errors() == before);
    CHECK(AlignWords(a2, b2).ref_words == static_cast<int>(a.size()) + 2);
  }
}

TEST_CASE("command expansion quotes values") {
  CHECK(ShellQuote("a b") == "'a b'");
  CHECK(ShellQuote("it's") == "'it'\\''s'");
  CHECK(ExpandCommand("voc {mel} {wav} {mel}", {{"mel", "m.mel"}, {"wav", "o w.wav"}}) ==
        "voc 'm.mel' 'o w.wav' 'm.mel'");
  const CommandResult r = RunCommand(ExpandCommand("printf %s {x}", {{"x", "it's"}}));
  CHECK(r.exit_code == 0);
  CHECK(r.output == "it's");
  CHECK(RunCommand("exit 3").exit_code == 3);
}

TEST_CASE("wer protocol with a scripted recogniser") {
  const fs::path dir = TempDir("asr");
  Rng rng(9);
  const Waveform w(SpeechLike(rng, kSampleRate, 1.0));
  std::vector<std::string> real, gen;
  const std::vector<std::pair<std::string, std::string>> texts = {
      {"bin blue at f two now", "bin blue at f two now"},
      {"lay red by g nine again", "lay red by g five again"},
      {"place green in a one soon", ""}};  // generated transcript missing
  for (size_t i = 0; i < texts.size(); ++i) {
    const std::string r = (dir / ("r" + std::to_string(i) + ".wav")).string();
    const std::string g = (dir / ("g" + std::to_string(i) + ".wav")).string();
    dsp::WriteWav(r, w);
    dsp::WriteWav(g, w);
    std::ofstream(r + ".txt") << texts[i].first << "\n";
    if (!texts[i].second.empty()) std::ofstream(g + ".txt") << texts[i].second << "\n";
    real.push_back(r);
    gen.push_back(g);
  }
  const AsrAdapter asr{"cat {wav}.txt 2>/dev/null"};
  const WerOutcome out = WerProtocol(real, gen, asr, 2);
  CHECK(out.excluded == 1);
  REQUIRE(out.wer);
  CHECK(*out.wer == doctest::Approx(1.0 / 12.0));
  CHECK(out.counts.ref_words == 12);

  // Generated equal to real: zero WER.
  const WerOutcome same = WerProtocol(real, real, asr);
  CHECK(same.excluded == 0);
  CHECK(*same.wer == 0.0);
  fs::remove_all(dir);
}

TEST_CASE("external vocoder adapter contract") {
  const fs::path dir = TempDir("vocoder");
  Rng rng(10);
  const std::string canned = (dir / "canned.wav").string();
  dsp::WriteWav(canned, Waveform(SpeechLike(rng, kSampleRate, 1.0)));
  const std::string canned16 = (dir / "canned16.wav").string();
  {
    // 0.1 s of silence, 16-bit mono at 16 kHz.
    const uint32_t rate = 16000, bytes = 3200;
    std::ofstream f(canned16, std::ios::binary);
    auto u32 = [&](uint32_t v) { f.write(reinterpret_cast<const char *>(&v), 4); };
    auto u16 = [&](uint16_t v) { f.write(reinterpret_cast<const char *>(&v), 2); };
    f << "RIFF";
    u32(36 + bytes);
    f << "WAVEfmt ";
    u32(16);
    u16(1);
    u16(1);
    u32(rate);
    u32(rate * 2);
    u16(2);
    u16(16);
    f << "data";
    u32(bytes);
    f << std::string(bytes, '\0');
  }
  Matrix mel = Matrix::Constant(80, kMelBands, -5.0);

  auto ok = VocoderAdapter::External("copy", "test -s {mel} && cp " + ShellQuote(canned) + " {wav}");
  ok.work_dir = dir.string();
  const Waveform out = ok.Synthesize(mel);
  CHECK(out.sample_rate() == kSampleRate);
  CHECK(out.size() == static_cast<size_t>(kSampleRate));

  auto failing = VocoderAdapter::External("fail", "false {mel} {wav}");
  failing.work_dir = dir.string();
  CHECK_THROWS_AS(failing.Synthesize(mel), IoError);
  auto wrong_rate = VocoderAdapter::External("rate", "cp " + ShellQuote(canned16) + " {wav} # {mel}");
  wrong_rate.work_dir = dir.string();
  CHECK_THROWS_AS(wrong_rate.Synthesize(mel), IoError);
  CHECK_THROWS_AS(VocoderAdapter::External("bad", "vocode {mel}"), ValidationError);
  // Scratch files are removed.
  int leftovers = 0;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.path().filename().string().rfind("svts_voc_", 0) == 0) ++leftovers;
  CHECK(leftovers == 0);
  fs::remove_all(dir);
}

TEST_CASE("griffin-lim vocoder output is deterministic and 24 kHz") {
  Rng rng(12);
  const Waveform w(SpeechLike(rng, kSampleRate, 1.0));
  const Matrix mel = dsp::LogMel(w).values();
  const auto gl = VocoderAdapter::GriffinLim(5, 0);
  const Waveform a = gl.Synthesize(mel), b = gl.Synthesize(mel);
  CHECK(a.sample_rate() == kSampleRate);
  CHECK(a.samples() == b.samples());
  CHECK(std::abs(static_cast<double>(a.size()) - kSampleRate) <= 300);
}

TEST_CASE("pesq adapter parses the last number") {
  const PesqAdapter pesq{"echo 'P.862 Prediction (Raw MOS, MOS-LQO): = 2.125 1.875' # {ref} {deg}"};
  CHECK(pesq.Score("a.wav", "b.wav") == doctest::Approx(1.875));
  CHECK_THROWS_AS(PesqAdapter{"echo none # {ref} {deg}"}.Score("a", "b"), IoError);
}

TEST_CASE("vocoder benchmark") {
  Rng rng(13);
  std::vector<Matrix> mels;
  for (int i = 0; i < 20; ++i)
    mels.push_back(dsp::LogMel(Waveform(SpeechLike(rng, kSampleRate, 0.5))).values());
  const auto gl = VocoderAdapter::GriffinLim(30, 0);
  CHECK_THROWS_AS(BenchmarkVocoder(gl, {mels.begin(), mels.begin() + 9}), ValidationError);
  const BenchmarkResult ten = BenchmarkVocoder(gl, {mels.begin(), mels.begin() + 10}, 2);
  const BenchmarkResult twenty = BenchmarkVocoder(gl, mels, 2);
  CHECK(ten.clips == 10);
  CHECK(ten.clips_per_second > 0.0);
  CHECK_FALSE(ten.hardware.empty());
  const double change = std::abs(twenty.clips_per_second - ten.clips_per_second) / ten.clips_per_second;
  MESSAGE("griffin-lim: " << ten.clips_per_second << " vs " << twenty.clips_per_second
                          << " clips/s on " << ten.hardware);
  CHECK(change < 0.2);
  CHECK(BenchmarkJson(ten).find("\"hardware\"") != std::string::npos);
}

TEST_CASE("aggregates are means of the per-utterance rows") {
  Rng rng(14);
  std::vector<UtterancePair> pairs;
  for (int i = 0; i < 6; ++i) {
    std::vector<double> x = SpeechLike(rng, kSampleRate, 1.5), y = x;
    for (double &v : y) v += 0.01 * (i + 1) * rng.Normal();
    pairs.push_back({"u" + std::to_string(i), Waveform(x), Waveform::Clipped(y), "", ""});
  }
  // One utterance too short to score.
  std::vector<double> shortx = SpeechLike(rng, kSampleRate, 0.2);
  pairs.push_back({"short", Waveform(shortx), Waveform(shortx), "", ""});
  EvaluateOptions opts;
  const MetricReport r = EvaluatePairs(pairs, opts);
  REQUIRE(r.rows.size() == 6);
  CHECK(r.failures.size() == 1);
  double s = 0.0, e = 0.0;
  for (const auto &row : r.rows) {
    s += row.stoi;
    e += row.estoi;
  }
  CHECK(r.stoi == s / 6);
  CHECK(r.estoi == e / 6);
  CHECK_FALSE(r.wer.has_value());
  CHECK_FALSE(r.asr_configured);
  CHECK(FormatTable(r).find("absent") != std::string::npos);
  CHECK_THROWS_AS(EvaluatePairs({}, opts), ValidationError);
}

TEST_CASE("corpus evaluation") {
  const fs::path root = TempDir("corpus");
  const std::string manifest = ToyTestCorpus(root, 3);
  const std::string ckpt = TinyCheckpoint(root);

  SUBCASE("ground truth injected scores perfectly") {
    EvaluateOptions opts;
    opts.ground_truth = true;
    opts.out_dir = (root / "gt").string();
    // Transcribe by file content so identical audio gives identical text.
    opts.asr = AsrAdapter{"cksum < {wav} | cut -d' ' -f1"};
    const MetricReport r = EvaluateCorpus(manifest, "", opts);
    REQUIRE(r.rows.size() == 3);
    for (const auto &row : r.rows) {
      CHECK(row.stoi == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(row.estoi == doctest::Approx(1.0).epsilon(1e-6));
    }
    REQUIRE(r.wer);
    CHECK(*r.wer == 0.0);
    const std::string report = (root / "gt.jsonl").string();
    WriteReport(r, report);
    std::ifstream in(report);
    int lines = 0;
    std::string last;
    for (std::string line; std::getline(in, line); ++lines) last = line;
    CHECK(lines == 4);
    CHECK(last.find("\"summary\"") != std::string::npos);
  }

  SUBCASE("model report is deterministic and omits absent metrics") {
    EvaluateOptions opts;
    opts.vocoder = VocoderAdapter::GriffinLim(4, 0);
    opts.out_dir = (root / "a").string();
    const MetricReport a = EvaluateCorpus(manifest, ckpt, opts);
    opts.out_dir = (root / "b").string();
    opts.jobs = 2;
    const MetricReport b = EvaluateCorpus(manifest, ckpt, opts);
    REQUIRE(a.rows.size() == b.rows.size());
    for (size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].id == b.rows[i].id);
      CHECK(a.rows[i].stoi == b.rows[i].stoi);
      CHECK(a.rows[i].estoi == b.rows[i].estoi);
    }
    WriteReport(a, (root / "a.jsonl").string());
    std::ifstream in(root / "a.jsonl");
    std::string text((std::istreambuf_iterator<char>(in)), {});
    CHECK(text.find("\"wer\":\"absent\"") != std::string::npos);
    CHECK(text.find("\"pesq\":\"absent\"") != std::string::npos);
  }

  SUBCASE("empty test split is an error") {
    auto entries = LoadManifest(manifest);
    for (auto &e : entries) e.split = Split::kTrain;
    const std::string train_only = (root / "prep" / "train_only.txt").string();
    SaveManifest(train_only, entries);
    CHECK_THROWS_AS(EvaluateCorpus(train_only, ckpt, {}), ValidationError);
  }
  fs::remove_all(root);
}

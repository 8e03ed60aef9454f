// tests/unit/model_test.cc

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
#include <map>

#include "doctest.h"
#include "svts/core/error.h"
#include "svts/model/attention.h"
#include "svts/model/conv.h"
#include "svts/model/loss.h"
#include "svts/model/predictor.h"

using namespace svts;
using namespace svts::nn;

namespace {

VideoClip RandomClip(int frames, Rng &rng, int side = kModelCropSize) {
  std::vector<double> px(static_cast<size_t>(frames) * side * side);
  for (double &p : px) p = rng.Uniform();
  return VideoClip(frames, side, std::move(px));
}

SpeakerEmbedding RandomEmbedding(int dim, Rng &rng) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.Normal();
  return SpeakerEmbedding::Normalized(v);
}

Matrix RandomMatrix(int rows, int cols, Rng &rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (int64_t i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.Normal();
  return m;
}

int64_t Allocated(Predictor &p) {
  int64_t n = 0;
  for (Param *q : p.Params()) n += q->size();
  return n;
}

double BatchObjective(const Predictor &model, const PredictorBatch &batch, const Matrix &target) {
  Rng rng(1);
  RunContext ctx{true, &rng};
  const Matrix mel = model.ForwardBatch(batch, ctx, nullptr);
  Packing mel_packing;
  for (int len : batch.packing.lengths) mel_packing.lengths.push_back(4 * len);
  return BatchLoss(mel, target, mel_packing, LossMode::kCombined, false, nullptr).total;
}

// Compares analytic gradients with central differences on `samples`
// randomly chosen scalars; returns the worst relative error.
double GradientCheck(const std::vector<int> &lengths, int samples, uint64_t seed) {
  Rng rng(seed);
  Predictor model(ModelConfig::Tiny(), rng);
  std::vector<VideoClip> clips;
  std::vector<SpeakerEmbedding> embs;
  for (int len : lengths) {
    clips.push_back(RandomClip(len, rng));
    embs.push_back(RandomEmbedding(kDefaultSpeakerDim, rng));
  }
  std::vector<const VideoClip *> cp;
  std::vector<const SpeakerEmbedding *> ep;
  for (size_t i = 0; i < clips.size(); ++i) {
    cp.push_back(&clips[i]);
    ep.push_back(&embs[i]);
  }
  const PredictorBatch batch = MakeBatch(cp, ep);
  const Matrix target = RandomMatrix(4 * batch.packing.total(), kMelBands, rng, 0.5);

  for (Param *p : model.Params()) p->ZeroGrad();
  Rng drop(1);
  Predictor::Cache cache;
  const Matrix mel = model.ForwardBatch(batch, RunContext{true, &drop}, &cache);
  Packing mel_packing;
  for (int len : lengths) mel_packing.lengths.push_back(4 * len);
  Matrix dmel;
  BatchLoss(mel, target, mel_packing, LossMode::kCombined, false, &dmel);
  model.Backward(cache, batch, dmel);

  std::vector<Param *> params = model.Params();
  double worst = 0.0;
  const double h = 1e-6;
  for (int s = 0; s < samples; ++s) {
    Param *p = params[rng.UniformInt(params.size())];
    const int64_t idx = static_cast<int64_t>(rng.UniformInt(static_cast<uint64_t>(p->size())));
    double &w = p->value.data()[idx];
    const double orig = w;
    w = orig + h;
    const double up = BatchObjective(model, batch, target);
    w = orig - h;
    const double down = BatchObjective(model, batch, target);
    w = orig;
    const double numeric = (up - down) / (2 * h);
    const double analytic = p->grad.data()[idx];
    const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
    const double rel = std::abs(numeric - analytic) / denom;
    INFO(p->name << "[" << idx << "] analytic " << analytic << " numeric " << numeric);
    CHECK(rel < 1e-3);
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace

TEST_CASE("parameter counts of the published sizes") {
  const std::map<std::string, double> expected = {{"S", 27.3e6}, {"M", 43.1e6}, {"L", 87.6e6}};
  for (const auto &[name, target] : expected) {
    const int64_t n = Predictor::CountParameters(ModelConfig::Preset(name));
    INFO(name << " " << n);
    CHECK(std::abs(n - target) / target < 0.05);
  }
}

TEST_CASE("analytic parameter count matches allocated tensors") {
  Rng rng(3);
  Predictor tiny(ModelConfig::Tiny(), rng);
  CHECK(Allocated(tiny) == Predictor::CountParameters(ModelConfig::Tiny()));
  Predictor small(ModelConfig::Preset("S"), rng);
  CHECK(Allocated(small) == Predictor::CountParameters(ModelConfig::Preset("S")));
}

TEST_CASE("parameter names are unique") {
  Rng rng(3);
  Predictor model(ModelConfig::Tiny(), rng);
  std::map<std::string, int> seen;
  for (Param *p : model.Params()) CHECK(++seen[p->name] == 1);
  for (Buffer *b : model.Buffers()) CHECK(++seen[b->name] == 1);
}

TEST_CASE("visual encoder shapes") {
  Rng rng(4);
  ModelConfig cfg = ModelConfig::Tiny();
  cfg.visual_width = 64;
  Predictor model(cfg, rng);
  const Matrix feats = model.EncodeVisual(RandomClip(20, rng));
  CHECK(feats.rows() == 20);
  CHECK(feats.cols() == 512);
  CHECK(feats.allFinite());

  const Matrix zero = model.EncodeVisual(VideoClip(3, 88, std::vector<double>(3 * 88 * 88, 0.0)));
  CHECK(zero.allFinite());

  CHECK_THROWS_AS(model.EncodeVisual(RandomClip(2, rng, kStoredCropSize)), ShapeError);
}

TEST_CASE("3D stem matches a direct convolution") {
  Rng rng(5);
  Conv3dStem stem("stem", 3, rng);
  const int side = 12;
  const Packing packing{{3, 2}};
  const Matrix frames = RandomMatrix(5, side * side, rng);
  const FeatureMap y = stem.Forward(frames, side, packing);
  std::vector<Param *> ps;
  stem.CollectParams(ps);
  const Matrix &w = ps[0]->value;
  const int so = (side + 6 - 7) / 2 + 1;
  REQUIRE(y.h == so);
  int begin = 0;
  double worst = 0.0;
  for (int len : packing.lengths) {
    for (int t = 0; t < len; ++t)
      for (int o = 0; o < 3; ++o)
        for (int oy = 0; oy < so; ++oy)
          for (int ox = 0; ox < so; ++ox) {
            double acc = 0.0;
            for (int kt = 0; kt < 5; ++kt)
              for (int ky = 0; ky < 7; ++ky)
                for (int kx = 0; kx < 7; ++kx) {
                  const int st = t + kt - 2, iy = 2 * oy + ky - 3, ix = 2 * ox + kx - 3;
                  if (st < 0 || st >= len || iy < 0 || iy >= side || ix < 0 || ix >= side) continue;
                  acc += w(o, (kt * 7 + ky) * 7 + kx) * frames(begin + st, iy * side + ix);
                }
            worst = std::max(worst, std::abs(acc - y.image(begin + t)(o, oy * so + ox)));
          }
    begin += len;
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("stem responds to frame order only within its temporal reach") {
  Rng rng(6);
  Conv3dStem stem("stem", 2, rng);
  const int side = 10, T = 9;
  Matrix frames = RandomMatrix(T, side * side, rng);
  Matrix swapped = frames;
  swapped.row(0).swap(swapped.row(1));
  const FeatureMap a = stem.Forward(frames, side, Packing{{T}});
  const FeatureMap b = stem.Forward(swapped, side, Packing{{T}});
  for (int t = 0; t < T; ++t) {
    const double d = (a.image(t) - b.image(t)).cwiseAbs().maxCoeff();
    if (t <= 3)
      CHECK(d > 0.0);
    else
      CHECK(d == 0.0);
  }
}

TEST_CASE("relative attention matches a direct score computation") {
  Rng rng(7);
  const int dim = 8, heads = 2, dk = 4, T = 5;
  RelPosSelfAttention att("att", dim, heads, 0.0, rng);
  std::vector<Param *> ps;
  att.CollectParams(ps);
  // q.w q.b k.w k.b v.w v.b out.w out.b pos.w u v
  const Matrix &wq = ps[0]->value, &bq = ps[1]->value, &wk = ps[2]->value, &bk = ps[3]->value;
  const Matrix &wv = ps[4]->value, &bv = ps[5]->value, &wo = ps[6]->value, &bo = ps[7]->value;
  const Matrix &wp = ps[8]->value, &u = ps[9]->value, &vb = ps[10]->value;
  const Matrix x = RandomMatrix(T, dim, rng);
  const Matrix y = att.Forward(x, Packing{{T}}, RunContext{}, nullptr);

  auto affine = [](const Matrix &w, const Matrix &b, const Vector &in) {
    return Vector(w * in + b.row(0).transpose());
  };
  auto sinusoid = [&](int r) {
    Vector p(dim);
    for (int i = 0; i < dim; i += 2) {
      const double f = std::pow(10000.0, -static_cast<double>(i) / dim);
      p[i] = std::sin(r * f);
      p[i + 1] = std::cos(r * f);
    }
    return p;
  };
  Matrix context(T, dim);
  for (int h = 0; h < heads; ++h)
    for (int i = 0; i < T; ++i) {
      const Vector qi = affine(wq, bq, x.row(i).transpose()).segment(h * dk, dk);
      std::vector<double> s(T);
      double mx = -1e300;
      for (int j = 0; j < T; ++j) {
        const Vector kj = affine(wk, bk, x.row(j).transpose()).segment(h * dk, dk);
        const Vector pr = (wp * sinusoid(i - j)).segment(h * dk, dk);
        s[j] = ((qi + u.row(h).transpose()).dot(kj) + (qi + vb.row(h).transpose()).dot(pr)) /
               std::sqrt(static_cast<double>(dk));
        mx = std::max(mx, s[j]);
      }
      double z = 0.0;
      for (double &e : s) z += (e = std::exp(e - mx));
      Vector acc = Vector::Zero(dk);
      for (int j = 0; j < T; ++j)
        acc += s[j] / z * affine(wv, bv, x.row(j).transpose()).segment(h * dk, dk);
      context.block(i, h * dk, 1, dk) = acc.transpose();
    }
  const Matrix expected = (context * wo.transpose()).rowwise() + bo.row(0);
  CHECK((expected - y).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("packed sequences do not interact") {
  Rng rng(8);
  RelPosSelfAttention att("att", 8, 2, 0.0, rng);
  DepthwiseConv1d dw("dw", 8, 5, rng);
  const Matrix a = RandomMatrix(4, 8, rng), b = RandomMatrix(3, 8, rng);
  Matrix ab(7, 8);
  ab << a, b;
  const Packing both{{4, 3}};
  const Matrix y = att.Forward(ab, both, RunContext{}, nullptr);
  CHECK((y.topRows(4) - att.Forward(a, Packing{{4}}, RunContext{}, nullptr)).norm() < 1e-12);
  CHECK((y.bottomRows(3) - att.Forward(b, Packing{{3}}, RunContext{}, nullptr)).norm() < 1e-12);
  const Matrix z = dw.Forward(ab, both);
  CHECK((z.topRows(4) - dw.Forward(a, Packing{{4}})).norm() < 1e-12);
  CHECK((z.bottomRows(3) - dw.Forward(b, Packing{{3}})).norm() < 1e-12);
}

TEST_CASE("speaker conditioning") {
  Rng rng(9);
  const Matrix feats = RandomMatrix(5, 512, rng);
  const SpeakerEmbedding e1 = RandomEmbedding(256, rng), e2 = RandomEmbedding(256, rng);
  const Matrix c1 = Predictor::ConditionOnSpeaker(feats, e1);
  const Matrix c2 = Predictor::ConditionOnSpeaker(feats, e2);
  CHECK(c1.cols() == 768);
  CHECK((c1.leftCols(512) - c2.leftCols(512)).norm() == 0.0);
  for (int t = 0; t < 5; ++t) CHECK((c1.block(t, 512, 1, 256) - c2.block(t, 512, 1, 256)).norm() > 0.0);
  CHECK_THROWS_AS(SpeakerEmbedding::Normalized(Vector::Zero(256)), ValidationError);

  Predictor model(ModelConfig::Tiny(), rng);
  const VideoClip clip = RandomClip(6, rng);
  const Matrix m1 = model.Forward(clip, e1).mel.values();
  const Matrix m2 = model.Forward(clip, e2).mel.values();
  CHECK((m1 - m2).cwiseAbs().maxCoeff() > 0.0);
  CHECK_THROWS_AS(model.Forward(clip, RandomEmbedding(64, rng)), ShapeError);
}

TEST_CASE("conformer shapes and errors") {
  Rng rng(10);
  Predictor model(ModelConfig::Tiny(), rng);
  for (int T : {1, 7, 80}) {
    const Matrix out = model.Encode(RandomMatrix(T, 64 + 256, rng));
    CHECK(out.rows() == T);
    CHECK(out.cols() == 32);
  }
  CHECK_THROWS(model.Encode(Matrix(0, 64 + 256)));
}

TEST_CASE("projection reshape layout") {
  Rng rng(11);
  Predictor model(ModelConfig::Tiny(), rng);
  const Matrix enc = RandomMatrix(3, 32, rng);
  const Matrix mel = model.ProjectAndReshape(enc).values();
  REQUIRE(mel.rows() == 12);
  std::vector<Param *> ps = model.Params();
  const Matrix *w = nullptr, *b = nullptr;
  for (Param *p : ps) {
    if (p->name == "projection.weight") w = &p->value;
    if (p->name == "projection.bias") b = &p->value;
  }
  REQUIRE(w);
  REQUIRE(b);
  const Matrix proj = (enc * w->transpose()).rowwise() + b->row(0);
  for (int t = 0; t < 3; ++t)
    for (int k = 0; k < 4; ++k)
      CHECK((mel.row(4 * t + k) - proj.block(t, 80 * k, 1, 80)).norm() < 1e-12);
  CHECK(model.ProjectAndReshape(RandomMatrix(1, 32, rng)).num_frames() == 4);
}

TEST_CASE("output has four mel frames per video frame") {
  Rng rng(12);
  Predictor model(ModelConfig::Tiny(), rng);
  const SpeakerEmbedding e = RandomEmbedding(256, rng);
  for (int T = 1; T <= 100; T += (T < 10 ? 1 : 13)) {
    const MelSpectrogram mel = model.Forward(RandomClip(T, rng), e).mel;
    CHECK(mel.num_frames() == 4 * T);
    CHECK(mel.num_bands() == 80);
  }
}

TEST_CASE("evaluation is deterministic and batching agrees with single clips") {
  Rng rng(13);
  ModelConfig cfg = ModelConfig::Tiny();
  cfg.dropout = 0.1;
  Predictor model(cfg, rng);
  const VideoClip a = RandomClip(5, rng), b = RandomClip(8, rng);
  const SpeakerEmbedding ea = RandomEmbedding(256, rng), eb = RandomEmbedding(256, rng);
  const Matrix ma = model.Forward(a, ea).mel.values();
  CHECK((ma - model.Forward(a, ea).mel.values()).norm() == 0.0);
  const Matrix mb = model.Forward(b, eb).mel.values();
  const Matrix packed = model.ForwardBatch(MakeBatch({&a, &b}, {&ea, &eb}), RunContext{}, nullptr);
  CHECK((packed.topRows(20) - ma).cwiseAbs().maxCoeff() < 1e-5);
  CHECK((packed.bottomRows(32) - mb).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("losses against direct summation") {
  Rng rng(14);
  const Matrix p = RandomMatrix(12, 80, rng), t = RandomMatrix(12, 80, rng);
  double abs_sum = 0.0, num = 0.0, den = 0.0;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 80; ++j) {
      abs_sum += std::abs(p(i, j) - t(i, j));
      num += std::pow(std::exp(t(i, j)) - std::exp(p(i, j)), 2);
      den += std::pow(std::exp(t(i, j)), 2);
    }
  const MelSpectrogram mp(p), mt(t);
  CHECK(L1Loss(mp, mt) == doctest::Approx(abs_sum / 960).epsilon(1e-12));
  CHECK(SpectralConvergenceLoss(mp, mt) == doctest::Approx(std::sqrt(num / den)).epsilon(1e-12));
  CHECK(CombinedLoss(mp, mt, LossMode::kCombined) ==
        L1Loss(mp, mt) + SpectralConvergenceLoss(mp, mt));
  CHECK(CombinedLoss(mp, mt, LossMode::kL1Only) == L1Loss(mp, mt));
  CHECK(CombinedLoss(mp, mt, LossMode::kScOnly) == SpectralConvergenceLoss(mp, mt));

  CHECK(L1Loss(mp, MelSpectrogram(Matrix(p.array() + 1.0))) == doctest::Approx(1.0));
  const MelSpectrogram floor(Matrix::Constant(12, 80, std::log(1e-10)));
  CHECK(SpectralConvergenceLoss(floor, mt) == doctest::Approx(1.0).epsilon(1e-6));
  for (LossMode m : {LossMode::kL1Only, LossMode::kScOnly, LossMode::kCombined}) {
    CHECK(CombinedLoss(mp, mp, m) == 0.0);
    CHECK(CombinedLoss(mp, mt, m) >= 0.0);
  }
  CHECK_THROWS_AS(L1Loss(mp, MelSpectrogram(Matrix::Zero(4, 80))), ShapeError);
  CHECK_THROWS_AS(SpectralConvergenceLoss(p, Matrix::Zero(12, 80), true), ValidationError);
}

TEST_CASE("loss gradient matches finite differences") {
  Rng rng(15);
  const Matrix p = RandomMatrix(10, 80, rng, 0.5), t = RandomMatrix(10, 80, rng, 0.5);
  const Packing packing{{6, 4}};
  for (bool on_log : {false, true}) {
    Matrix g;
    BatchLoss(p, t, packing, LossMode::kCombined, on_log, &g);
    for (int s = 0; s < 20; ++s) {
      const int i = static_cast<int>(rng.UniformInt(10)), j = static_cast<int>(rng.UniformInt(80));
      Matrix q = p;
      q(i, j) += 1e-6;
      const double up = BatchLoss(q, t, packing, LossMode::kCombined, on_log, nullptr).total;
      q(i, j) -= 2e-6;
      const double down = BatchLoss(q, t, packing, LossMode::kCombined, on_log, nullptr).total;
      CHECK((up - down) / 2e-6 == doctest::Approx(g(i, j)).epsilon(1e-4));
    }
  }
}

TEST_CASE("predictor gradients match finite differences") {
  CHECK(GradientCheck({4}, 50, 21) < 1e-3);
}

TEST_CASE("packed predictor gradients match finite differences") {
  CHECK(GradientCheck({3, 2}, 20, 22) < 1e-3);
}

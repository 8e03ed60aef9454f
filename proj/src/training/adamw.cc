// src/training/adamw.cc

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

#include "svts/training/adamw.h"

#include <cmath>

#include "svts/core/error.h"

namespace svts::training {

AdamW::AdamW(std::vector<nn::Param *> params, const AdamWOptions &opts)
    : params_(std::move(params)), opts_(opts) {
  for (nn::Param *p : params_) {
    m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

void AdamW::Step(double lr) {
  for (nn::Param *p : params_) {
    if (p->grad.rows() != p->value.rows() || p->grad.cols() != p->value.cols())
      throw ShapeError("gradient of '" + p->name + "' is missing or misshapen");
    if (!p->grad.allFinite()) throw Error("non-finite gradient in parameter '" + p->name + "'");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Matrix &w = params_[i]->value;
    const Matrix &g = params_[i]->grad;
    w *= 1.0 - lr * opts_.weight_decay;
    m_[i] = opts_.beta1 * m_[i] + (1.0 - opts_.beta1) * g;
    v_[i] = opts_.beta2 * v_[i] + (1.0 - opts_.beta2) * g.cwiseAbs2();
    w.array() -= lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + opts_.eps);
  }
}

void AdamW::Save(nn::CheckpointState &state) const {
  for (size_t i = 0; i < params_.size(); ++i) {
    state.tensors["adam.m." + params_[i]->name] = m_[i];
    state.tensors["adam.v." + params_[i]->name] = v_[i];
  }
  state.tensors["adam.t"] = Matrix::Constant(1, 1, static_cast<double>(t_));
}

void AdamW::Load(const nn::CheckpointState &state) {
  auto get = [&](const std::string &name, const Matrix &like) -> const Matrix & {
    auto it = state.tensors.find(name);
    if (it == state.tensors.end()) throw ValidationError("checkpoint lacks optimizer state '" + name + "'");
    if (it->second.rows() != like.rows() || it->second.cols() != like.cols())
      throw ShapeError("optimizer state '" + name + "' has the wrong shape");
    return it->second;
  };
  for (size_t i = 0; i < params_.size(); ++i) {
    m_[i] = get("adam.m." + params_[i]->name, m_[i]);
    v_[i] = get("adam.v." + params_[i]->name, v_[i]);
  }
  t_ = static_cast<int64_t>(get("adam.t", Matrix::Zero(1, 1))(0, 0));
}

double ClipGradNorm(const std::vector<nn::Param *> &params, double max_norm) {
  double sq = 0.0;
  for (const nn::Param *p : params) sq += p->grad.squaredNorm();
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / (norm + 1e-12);
    for (nn::Param *p : params) p->grad *= scale;
  }
  return norm;
}

}  // namespace svts::training

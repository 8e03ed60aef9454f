// src/model/tensor.cc

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

#include "svts/model/tensor.h"

#include <numeric>

namespace svts::nn {

Param::Param(std::string name, std::vector<int> shape, int rows, int cols)
    : name(std::move(name)), shape(std::move(shape)), value(Matrix::Zero(rows, cols)) {}

void Param::ZeroGrad() {
  if (grad.rows() != value.rows() || grad.cols() != value.cols())
    grad = Matrix::Zero(value.rows(), value.cols());
  else
    grad.setZero();
}

int Packing::total() const { return std::accumulate(lengths.begin(), lengths.end(), 0); }

int Packing::offset(int i) const {
  return std::accumulate(lengths.begin(), lengths.begin() + i, 0);
}

void FillUniform(Matrix &m, double bound, Rng &rng) {
  for (int64_t i = 0; i < m.size(); ++i) m.data()[i] = rng.Uniform(-bound, bound);
}

void FillNormal(Matrix &m, double stddev, Rng &rng) {
  for (int64_t i = 0; i < m.size(); ++i) m.data()[i] = stddev * rng.Normal();
}

}  // namespace svts::nn

// include/svts/training/adamw.h

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

#ifndef SVTS_TRAINING_ADAMW_H_
#define SVTS_TRAINING_ADAMW_H_

#include <vector>

#include "svts/model/checkpoint.h"
#include "svts/model/tensor.h"

namespace svts::training {

struct AdamWOptions {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

// Adam with decoupled weight decay:
//   w <- w (1 - lr wd)
//   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2
//   w <- w - lr (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
class AdamW {
 public:
  AdamW(std::vector<nn::Param *> params, const AdamWOptions &opts = {});

  // Reads p->grad of every parameter.  Throws before touching any weight if
  // a gradient is missing or non-finite.
  void Step(double lr);
  int64_t steps() const { return t_; }

  void Save(nn::CheckpointState &state) const;
  void Load(const nn::CheckpointState &state);

 private:
  std::vector<nn::Param *> params_;
  AdamWOptions opts_;
  std::vector<Matrix> m_, v_;
  int64_t t_ = 0;
};

// Scales all gradients so that their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double ClipGradNorm(const std::vector<nn::Param *> &params, double max_norm);

}  // namespace svts::training

#endif  // SVTS_TRAINING_ADAMW_H_

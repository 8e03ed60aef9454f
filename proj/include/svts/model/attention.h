// include/svts/model/attention.h

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

#ifndef SVTS_MODEL_ATTENTION_H_
#define SVTS_MODEL_ATTENTION_H_

#include <string>
#include <vector>

#include "svts/model/layers.h"

namespace svts::nn {

// Sinusoidal relative position table with 2T-1 rows; row m encodes the
// relative offset T-1-m.
Matrix RelativePositionTable(int length, int dim);

// Multi-head self-attention with relative positional encodings and learned
// content/position biases (Transformer-XL style).  Attention never crosses
// packed sequence boundaries.
class RelPosSelfAttention : public Module {
 public:
  struct HeadCache {
    Matrix attn;  // softmax output, before dropout
    Matrix mask;  // dropout mask, empty when inactive
  };
  struct ClipCache {
    Matrix pos;       // position table
    Matrix pos_proj;  // projected table
    std::vector<HeadCache> heads;
  };
  struct Cache {
    Matrix x, q, k, v, context;
    std::vector<ClipCache> clips;
  };

  RelPosSelfAttention(const std::string &name, int dim, int heads, double dropout, Rng &rng);
  Matrix Forward(const Matrix &x, const Packing &packing, const RunContext &ctx,
                 Cache *cache) const;
  Matrix Backward(const Cache &cache, const Packing &packing, const Matrix &dy);
  void CollectParams(std::vector<Param *> &out) override;
  static int64_t NumParams(int dim, int heads);

 private:
  int dim_, heads_, dk_;
  double dropout_;
  Linear q_, k_, v_, out_, pos_;
  Param bias_u_;
  Param bias_v_;
};

}  // namespace svts::nn

#endif  // SVTS_MODEL_ATTENTION_H_

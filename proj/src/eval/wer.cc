// src/eval/wer.cc

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

#include "svts/eval/wer.h"

#include <cctype>
#include <sstream>

#include "svts/core/error.h"

namespace svts::eval {

EditCounts &EditCounts::operator+=(const EditCounts &o) {
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  ref_words += o.ref_words;
  return *this;
}

std::vector<std::string> Tokenize(const std::string &text) {
  std::string clean;
  clean.reserve(text.size());
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '\'')
      clean.push_back(static_cast<char>(std::tolower(c)));
    else
      clean.push_back(' ');
  }
  std::istringstream in(clean);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

EditCounts AlignWords(const std::vector<std::string> &ref,
                      const std::vector<std::string> &hyp) {
  const size_t n = ref.size(), m = hyp.size();
  // Cell j of row i aligns ref[:i] with hyp[:j].
  struct Cell {
    int cost, sub, del, ins;
  };
  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (size_t j = 0; j <= m; ++j)
    prev[j] = {static_cast<int>(j), 0, 0, static_cast<int>(j)};
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = {static_cast<int>(i), 0, static_cast<int>(i), 0};
    for (size_t j = 1; j <= m; ++j) {
      Cell diag = prev[j - 1];
      if (ref[i - 1] != hyp[j - 1]) {
        ++diag.cost;
        ++diag.sub;
      }
      Cell del = prev[j];
      ++del.cost;
      ++del.del;
      Cell ins = cur[j - 1];
      ++ins.cost;
      ++ins.ins;
      Cell best = diag;
      if (del.cost < best.cost) best = del;
      if (ins.cost < best.cost) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  const Cell &end = prev[m];
  return {end.sub, end.del, end.ins, static_cast<int>(n)};
}

double Wer(const std::vector<std::string> &ref,
           const std::vector<std::string> &hyp) {
  if (ref.empty()) throw ValidationError("wer: empty reference transcript");
  return CorpusWer(AlignWords(ref, hyp));
}

double CorpusWer(const EditCounts &counts) {
  if (counts.ref_words <= 0)
    throw ValidationError("wer: no reference words");
  return static_cast<double>(counts.errors()) / counts.ref_words;
}

}  // namespace svts::eval

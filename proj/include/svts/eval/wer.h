// include/svts/eval/wer.h

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

#ifndef SVTS_EVAL_WER_H_
#define SVTS_EVAL_WER_H_

#include <string>
#include <vector>

namespace svts::eval {

struct EditCounts {
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int ref_words = 0;

  int errors() const { return substitutions + deletions + insertions; }
  EditCounts &operator+=(const EditCounts &o);
};

// Lower-cases and splits on whitespace; punctuation other than apostrophes
// is dropped.
std::vector<std::string> Tokenize(const std::string &text);

// Word-level Levenshtein alignment.  Ties between equal-cost edits are
// broken towards substitution, then deletion, then insertion.
EditCounts AlignWords(const std::vector<std::string> &ref,
                      const std::vector<std::string> &hyp);

// errors / len(ref); throws ValidationError for an empty reference.
double Wer(const std::vector<std::string> &ref,
           const std::vector<std::string> &hyp);

// Corpus WER from summed counts; throws if no reference words.
double CorpusWer(const EditCounts &counts);

}  // namespace svts::eval

#endif  // SVTS_EVAL_WER_H_

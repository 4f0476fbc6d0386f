// Copyright 2026 The rhtag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RHTAG_VITERBI_H_
#define RHTAG_VITERBI_H_

#include <cstddef>
#include <span>
#include <vector>

#include "rhtag/text.h"

namespace rhtag {

// Row-major tokens x tags scores in TagSet order.
struct ScoreMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  ScoreMatrix() = default;
  ScoreMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

struct DecodeResult {
  std::vector<std::size_t> tags;
  double score = 0.0;
};

// Best path under the BIO constraint (no I-x unless preceded by B-x/I-x).
// `transitions` is empty or (tags + 1) x tags with the last row holding
// start scores. Among equal-scoring paths the one with the smallest final
// tag wins, then the smallest predecessor, and so on backwards.
DecodeResult constrained_viterbi(const ScoreMatrix& emissions, const TagSet& tags,
                                 std::span<const double> transitions = {});

// kInvalidArgument for a non-finite score or a width other than
// 2 * |labels| + 1.
BioSequence viterbi_decode(const ScoreMatrix& emissions, const LabelSchema& schema);

}  // namespace rhtag

#endif  // RHTAG_VITERBI_H_

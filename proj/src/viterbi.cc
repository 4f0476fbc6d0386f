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

#include "rhtag/viterbi.h"

#include <cmath>
#include <limits>

#include "rhtag/error.h"

namespace rhtag {

DecodeResult constrained_viterbi(const ScoreMatrix& emissions, const TagSet& tags,
                                 std::span<const double> transitions) {
  const std::size_t n = emissions.rows;
  const std::size_t k = tags.size();
  if (emissions.cols != k || emissions.values.size() != n * k) {
    throw Error(ErrorCode::kInvalidArgument, "score matrix does not match the tag set");
  }
  if (!transitions.empty() && transitions.size() != (k + 1) * k) {
    throw Error(ErrorCode::kInvalidArgument, "transition matrix has the wrong size");
  }
  DecodeResult result;
  if (n == 0) return result;

  auto trans = [&](std::size_t prev, std::size_t next) {
    return transitions.empty() ? 0.0 : transitions[prev * k + next];
  };
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> best(n * k, kNegInf);
  std::vector<std::size_t> back(n * k, 0);

  for (std::size_t j = 0; j < k; ++j) {
    if (tags.allowed(k, j)) best[j] = trans(k, j) + emissions.at(0, j);
  }
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t j = 0; j < k; ++j) {
      double top = kNegInf;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < k; ++i) {
        if (best[(t - 1) * k + i] == kNegInf || !tags.allowed(i, j)) continue;
        const double s = best[(t - 1) * k + i] + trans(i, j);
        if (s > top) {
          top = s;
          arg = i;
        }
      }
      if (top != kNegInf) {
        best[t * k + j] = top + emissions.at(t, j);
        back[t * k + j] = arg;
      }
    }
  }

  std::size_t last = 0;
  for (std::size_t j = 1; j < k; ++j) {
    if (best[(n - 1) * k + j] > best[(n - 1) * k + last]) last = j;
  }
  result.score = best[(n - 1) * k + last];
  result.tags.assign(n, 0);
  result.tags[n - 1] = last;
  for (std::size_t t = n - 1; t > 0; --t) {
    result.tags[t - 1] = back[t * k + result.tags[t]];
  }
  return result;
}

BioSequence viterbi_decode(const ScoreMatrix& emissions, const LabelSchema& schema) {
  const TagSet tags(schema);
  if (emissions.cols != tags.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "score matrix needs " + std::to_string(tags.size()) + " columns, got " +
                    std::to_string(emissions.cols));
  }
  for (double v : emissions.values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "score matrix contains a non-finite value");
    }
  }
  const DecodeResult best = constrained_viterbi(emissions, tags);
  BioSequence out;
  out.reserve(best.tags.size());
  for (std::size_t t : best.tags) out.push_back(tags.label(t));
  return out;
}

}  // namespace rhtag

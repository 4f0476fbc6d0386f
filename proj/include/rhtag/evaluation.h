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

// Token- and sentence-level precision, recall and F1 over entity types.
//
// B-x and I-x both count as x; O counts as "no_label". Micro scores pool
// the entity rows/columns only, so "no_label" never counts as a positive.

#ifndef RHTAG_EVALUATION_H_
#define RHTAG_EVALUATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rhtag/corpus.h"
#include "rhtag/text.h"

namespace rhtag {

inline constexpr std::string_view kNoLabel = "no_label";

// Rows are gold, columns predicted; labels are the schema labels followed by
// "no_label".
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint64_t>> counts;

  static ConfusionMatrix zeros(const LabelSchema& schema);

  std::size_t size() const { return labels.size(); }
  std::uint64_t total() const;
  std::uint64_t row_sum(std::size_t r) const;
  std::uint64_t col_sum(std::size_t c) const;

  // Header row of predicted labels, first column gold labels.
  std::string to_csv() const;
  nlohmann::ordered_json to_json() const;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // Zero whenever a denominator is zero.
  static Prf from_counts(std::uint64_t true_pos, std::uint64_t predicted,
                         std::uint64_t gold);
  nlohmann::ordered_json to_json() const;
};

double f1_score(double precision, double recall);

struct MetricsReport {
  std::vector<std::pair<std::string, Prf>> per_label;  // schema order
  Prf micro;
  Prf macro;  // unweighted mean over entity labels
  std::vector<std::pair<std::string, std::uint64_t>> support;

  const Prf& label(std::string_view name) const;
  nlohmann::ordered_json to_json() const;
};

// kInvalidArgument when sentence or token counts differ.
ConfusionMatrix token_confusion(std::span<const BioSequence> gold,
                                std::span<const BioSequence> pred,
                                const LabelSchema& schema);

MetricsReport token_prf(const ConfusionMatrix& matrix);

// Convenience: micro-F1 of token_prf(token_confusion(...)).
double token_micro_f1(std::span<const BioSequence> gold, std::span<const BioSequence> pred,
                      const LabelSchema& schema);

// Label of the span covering the most sentence tokens, "no_label" if none.
// Ties go to the label earlier in the schema.
std::string sentence_class(const SentenceSpan& sentence,
                           std::span<const AnnotatedSpan> gold_spans,
                           const LabelSchema& schema);

// Most frequent predicted entity type, "no_label" if all O. Ties go to the
// label earlier in the schema.
std::string sentence_class(std::span<const BioLabel> predicted, const LabelSchema& schema);

// kInvalidArgument for length mismatch or an unknown class.
ConfusionMatrix sentence_confusion(std::span<const std::string> gold,
                                   std::span<const std::string> pred,
                                   const LabelSchema& schema);
MetricsReport sentence_prf(std::span<const std::string> gold,
                           std::span<const std::string> pred, const LabelSchema& schema);

}  // namespace rhtag

#endif  // RHTAG_EVALUATION_H_

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

#include "rhtag/evaluation.h"

#include <algorithm>
#include <sstream>

#include "rhtag/error.h"

namespace rhtag {
namespace {

// Row/column of a token label: schema slot, or the trailing no_label slot.
std::size_t slot_of(const BioLabel& label, const LabelSchema& schema) {
  if (label.is_outside()) return schema.size();
  const auto idx = schema.index_of(label.entity);
  if (!idx) {
    throw Error(ErrorCode::kUnknownLabel,
                "label '" + label.entity + "' is not in schema " + schema.name());
  }
  return *idx;
}

std::size_t class_slot(std::string_view cls, const LabelSchema& schema) {
  if (cls == kNoLabel) return schema.size();
  const auto idx = schema.index_of(cls);
  if (!idx) {
    throw Error(ErrorCode::kInvalidArgument, "unknown sentence class '" + std::string(cls) + "'");
  }
  return *idx;
}

}  // namespace

ConfusionMatrix ConfusionMatrix::zeros(const LabelSchema& schema) {
  ConfusionMatrix m;
  m.labels = schema.labels();
  m.labels.emplace_back(kNoLabel);
  m.counts.assign(m.labels.size(), std::vector<std::uint64_t>(m.labels.size(), 0));
  return m;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t n = 0;
  for (std::size_t r = 0; r < size(); ++r) n += row_sum(r);
  return n;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t r) const {
  std::uint64_t n = 0;
  for (auto v : counts[r]) n += v;
  return n;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t c) const {
  std::uint64_t n = 0;
  for (const auto& row : counts) n += row[c];
  return n;
}

std::string ConfusionMatrix::to_csv() const {
  std::ostringstream out;
  out << "gold\\predicted";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  for (std::size_t r = 0; r < size(); ++r) {
    out << labels[r];
    for (auto v : counts[r]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

nlohmann::ordered_json ConfusionMatrix::to_json() const {
  return {{"labels", labels}, {"counts", counts}};
}

double f1_score(double precision, double recall) {
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

Prf Prf::from_counts(std::uint64_t true_pos, std::uint64_t predicted, std::uint64_t gold) {
  Prf p;
  p.precision = predicted == 0 ? 0.0 : static_cast<double>(true_pos) / static_cast<double>(predicted);
  p.recall = gold == 0 ? 0.0 : static_cast<double>(true_pos) / static_cast<double>(gold);
  p.f1 = f1_score(p.precision, p.recall);
  return p;
}

nlohmann::ordered_json Prf::to_json() const {
  return {{"precision", precision}, {"recall", recall}, {"f1", f1}};
}

const Prf& MetricsReport::label(std::string_view name) const {
  for (const auto& [l, prf] : per_label) {
    if (l == name) return prf;
  }
  throw Error(ErrorCode::kInvalidArgument, "no metrics for label '" + std::string(name) + "'");
}

nlohmann::ordered_json MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["per_label"] = nlohmann::ordered_json::object();
  for (const auto& [l, prf] : per_label) j["per_label"][l] = prf.to_json();
  j["micro"] = micro.to_json();
  j["macro"] = macro.to_json();
  j["support"] = nlohmann::ordered_json::object();
  for (const auto& [l, n] : support) j["support"][l] = n;
  return j;
}

ConfusionMatrix token_confusion(std::span<const BioSequence> gold,
                                std::span<const BioSequence> pred,
                                const LabelSchema& schema) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::kInvalidArgument, "gold has " + std::to_string(gold.size()) +
                                                 " sentences, predictions " +
                                                 std::to_string(pred.size()));
  }
  ConfusionMatrix m = ConfusionMatrix::zeros(schema);
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != pred[s].size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sentence " + std::to_string(s) + ": token counts differ");
    }
    for (std::size_t t = 0; t < gold[s].size(); ++t) {
      ++m.counts[slot_of(gold[s][t], schema)][slot_of(pred[s][t], schema)];
    }
  }
  return m;
}

MetricsReport token_prf(const ConfusionMatrix& matrix) {
  MetricsReport report;
  const std::size_t entities = matrix.size() - 1;
  std::uint64_t tp = 0;
  std::uint64_t predicted = 0;
  std::uint64_t gold = 0;
  for (std::size_t l = 0; l < entities; ++l) {
    const std::uint64_t row = matrix.row_sum(l);
    const std::uint64_t col = matrix.col_sum(l);
    const Prf prf = Prf::from_counts(matrix.counts[l][l], col, row);
    report.per_label.emplace_back(matrix.labels[l], prf);
    report.support.emplace_back(matrix.labels[l], row);
    tp += matrix.counts[l][l];
    predicted += col;
    gold += row;
    report.macro.precision += prf.precision;
    report.macro.recall += prf.recall;
    report.macro.f1 += prf.f1;
  }
  report.micro = Prf::from_counts(tp, predicted, gold);
  if (entities > 0) {
    const auto n = static_cast<double>(entities);
    report.macro.precision /= n;
    report.macro.recall /= n;
    report.macro.f1 /= n;
  }
  return report;
}

double token_micro_f1(std::span<const BioSequence> gold, std::span<const BioSequence> pred,
                      const LabelSchema& schema) {
  return token_prf(token_confusion(gold, pred, schema)).micro.f1;
}

std::string sentence_class(const SentenceSpan& sentence,
                           std::span<const AnnotatedSpan> gold_spans,
                           const LabelSchema& schema) {
  std::size_t best_count = 0;
  std::size_t best_slot = schema.size();
  for (const auto& span : gold_spans) {
    const std::size_t slot = schema.index_of(span.label).value_or(schema.size());
    if (slot == schema.size()) continue;
    const auto covered = static_cast<std::size_t>(
        std::count_if(sentence.tokens.begin(), sentence.tokens.end(), [&](const Token& t) {
          return t.start_char < span.end_char && span.start_char < t.end_char;
        }));
    if (covered == 0) continue;
    if (covered > best_count || (covered == best_count && slot < best_slot)) {
      best_count = covered;
      best_slot = slot;
    }
  }
  return best_slot == schema.size() ? std::string(kNoLabel) : schema.labels()[best_slot];
}

std::string sentence_class(std::span<const BioLabel> predicted, const LabelSchema& schema) {
  std::vector<std::size_t> votes(schema.size(), 0);
  for (const auto& l : predicted) {
    if (!l.is_outside()) ++votes[slot_of(l, schema)];
  }
  std::size_t best = schema.size();
  for (std::size_t s = 0; s < votes.size(); ++s) {
    if (votes[s] > 0 && (best == schema.size() || votes[s] > votes[best])) best = s;
  }
  return best == schema.size() ? std::string(kNoLabel) : schema.labels()[best];
}

ConfusionMatrix sentence_confusion(std::span<const std::string> gold,
                                   std::span<const std::string> pred,
                                   const LabelSchema& schema) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::kInvalidArgument, "sentence class vectors differ in length");
  }
  ConfusionMatrix m = ConfusionMatrix::zeros(schema);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++m.counts[class_slot(gold[i], schema)][class_slot(pred[i], schema)];
  }
  return m;
}

MetricsReport sentence_prf(std::span<const std::string> gold,
                           std::span<const std::string> pred, const LabelSchema& schema) {
  return token_prf(sentence_confusion(gold, pred, schema));
}

}  // namespace rhtag

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

// Span-annotated post corpora: loading, validation, statistics and
// train/validation splitting.
//
// Offsets are measured in Unicode scalar values, not bytes. A span covers
// [start_char, end_char) of the post text.

#ifndef RHTAG_CORPUS_H_
#define RHTAG_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace rhtag {

class LabelSchema {
 public:
  static constexpr std::string_view kOutside = "O";

  // Throws kInvalidArgument on empty, duplicate or "O" labels.
  LabelSchema(std::string name, std::vector<std::string> labels);

  // claim, per_exp, claim_per_exp, question
  static LabelSchema subtask1();
  // population, intervention, outcome
  static LabelSchema subtask2();
  // Throws kUnknownSchema for anything but "subtask1" / "subtask2".
  static LabelSchema by_name(std::string_view name);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  std::optional<std::size_t> index_of(std::string_view label) const;
  bool contains(std::string_view label) const {
    return index_of(label).has_value();
  }

  friend bool operator==(const LabelSchema&, const LabelSchema&) = default;

 private:
  std::string name_;
  std::vector<std::string> labels_;
};

struct AnnotatedSpan {
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  std::string label;

  bool overlaps(const AnnotatedSpan& other) const {
    return start_char < other.end_char && other.start_char < end_char;
  }
  friend bool operator==(const AnnotatedSpan&, const AnnotatedSpan&) = default;
};

struct Post {
  std::string post_id;
  std::string condition;
  std::string text;
  std::vector<AnnotatedSpan> spans;

  friend bool operator==(const Post&, const Post&) = default;
};

struct Corpus {
  LabelSchema schema;
  std::vector<Post> posts;
};

struct Finding {
  std::string post_id;
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> errors;
  std::vector<Finding> warnings;
  std::map<std::string, std::size_t> counts;

  bool ok() const { return errors.empty(); }
  nlohmann::ordered_json to_json() const;
};

struct CorpusStats {
  std::map<std::string, std::size_t> posts_per_condition;
  // Keyed in schema order when serialized.
  std::map<std::string, std::size_t> entity_counts;
  std::map<std::string, double> mean_entity_length_tokens;
  double overlap_fraction = 0.0;

  nlohmann::ordered_json to_json(const LabelSchema& schema) const;
};

// Parses JSONL without semantic checks beyond field types, so that invalid
// offsets and labels survive for validate_corpus. Spans are sorted by
// (start, end, label).
Corpus read_corpus(std::istream& in, const LabelSchema& schema);
Corpus read_corpus(const std::filesystem::path& path, const LabelSchema& schema);

// read_corpus followed by validation; the first validation error is thrown
// as kUnknownLabel or kData.
Corpus load_corpus(const std::filesystem::path& path, const LabelSchema& schema);

void write_corpus(std::ostream& out, const Corpus& corpus);
void write_corpus(const std::filesystem::path& path, const Corpus& corpus);
std::string post_to_jsonl(const Post& post);

ValidationReport validate_corpus(const Corpus& corpus);

// Requires a corpus without validation errors (kData otherwise).
CorpusStats corpus_stats(const Corpus& corpus);

struct CorpusSplit {
  Corpus train;
  Corpus validation;
};

// Greedy label-balancing split. Posts are visited in a seeded shuffle
// (multi-span posts first) and each goes to validation when that lowers
// sum over labels of |validation share - fraction|. Span-less posts are
// balanced as their own pseudo-label. Both sides end up non-empty; each
// side keeps the corpus file order.
CorpusSplit stratified_split(const Corpus& corpus, double validation_fraction,
                             std::uint64_t seed);

// Template-generated posts, one labeled span each. Labels may come from
// either schema; the corpus schema is the one containing all requested
// labels.
Corpus generate_synthetic_corpus(const std::map<std::string, std::size_t>& spec,
                                 std::uint64_t seed);

// Disease and chemical surface forms used by the synthetic generator, in the
// gazetteer file format. Intervention spans in synthetic subtask2 posts are
// always chemicals from this list; the distractor word beside them never is.
std::string synthetic_gazetteer_text();

}  // namespace rhtag

#endif  // RHTAG_CORPUS_H_

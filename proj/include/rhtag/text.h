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

// Sentence segmentation, whitespace tokenization and the conversion between
// character spans and token-level BIO label sequences.

#ifndef RHTAG_TEXT_H_
#define RHTAG_TEXT_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rhtag/corpus.h"

namespace rhtag {

struct Token {
  std::string text;
  std::size_t start_char = 0;
  std::size_t end_char = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

struct SentenceSpan {
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  std::vector<Token> tokens;
};

enum class BioTag { kOutside, kBegin, kInside };

struct BioLabel {
  BioTag tag = BioTag::kOutside;
  std::string entity;  // empty iff tag == kOutside

  static BioLabel outside() { return {}; }
  static BioLabel begin(std::string entity) {
    return {BioTag::kBegin, std::move(entity)};
  }
  static BioLabel inside(std::string entity) {
    return {BioTag::kInside, std::move(entity)};
  }

  bool is_outside() const { return tag == BioTag::kOutside; }

  // "O", "B-claim", "I-claim"
  std::string str() const;
  // Throws kParse on anything not of the forms above.
  static BioLabel parse(std::string_view s);

  friend bool operator==(const BioLabel&, const BioLabel&) = default;
};

using BioSequence = std::vector<BioLabel>;

std::vector<std::string> to_strings(std::span<const BioLabel> labels);
BioSequence parse_labels(std::span<const std::string> labels);

// Every I-x follows B-x or I-x of the same x.
bool is_well_formed(std::span<const BioLabel> labels);

// Dense tag space for a schema: O first, then B-x, I-x per label in schema
// order. Index order fixes every tie-break in decoding.
class TagSet {
 public:
  explicit TagSet(const LabelSchema& schema);

  std::size_t size() const { return 2 * labels_.size() + 1; }
  std::size_t index(const BioLabel& label) const;  // kUnknownLabel if absent
  BioLabel label(std::size_t index) const;
  static bool is_inside(std::size_t index) { return index != 0 && index % 2 == 0; }
  // Entity slot of a tag index (B and I share one); only for index != 0.
  static std::size_t entity_of(std::size_t index) { return (index - 1) / 2; }
  // Whether `next` may follow `prev` (prev = size() means sentence start).
  bool allowed(std::size_t prev, std::size_t next) const;

 private:
  std::vector<std::string> labels_;
};

std::vector<Token> whitespace_tokenize(std::string_view sentence_text,
                                       std::size_t base_offset = 0);

class SentenceSegmenter {
 public:
  virtual ~SentenceSegmenter() = default;
  // Sentences are trimmed of surrounding whitespace, ordered, and together
  // contain every non-whitespace character of `text`.
  virtual std::vector<SentenceSpan> segment(std::string_view text) const = 0;
};

// Breaks after '.', '?', '!' or a newline when the following whitespace run
// ends in an ASCII uppercase letter, a digit, or end of text. A newline
// counts as its own whitespace.
class RuleSegmenter : public SentenceSegmenter {
 public:
  std::vector<SentenceSpan> segment(std::string_view text) const override;
};

std::vector<SentenceSpan> segment_sentences(std::string_view text);

// Token receives a span's type iff they share at least one character. A
// token claimed by several spans goes to the earliest-starting span, then
// the label earlier in the schema, then the longer span. A span's first
// owned token in a run gets B-x.
BioSequence encode_bio(const SentenceSpan& sentence,
                       std::span<const AnnotatedSpan> spans,
                       const LabelSchema& schema);

// Each maximal B-x I-x* run becomes one span from its first token's start to
// its last token's end. kInvalidArgument when lengths differ.
std::vector<AnnotatedSpan> decode_bio(const SentenceSpan& sentence,
                                      std::span<const BioLabel> labels);

// Rewrites every I-x without a valid predecessor to B-x.
BioSequence repair_bio(std::span<const BioLabel> labels);

}  // namespace rhtag

#endif  // RHTAG_TEXT_H_

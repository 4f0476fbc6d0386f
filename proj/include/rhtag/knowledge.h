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

// Disease/chemical annotation and marker-token augmentation.
//
// A Disease mention is bracketed as "$$ tokens $$" and a Chemical mention as
// "@@ tokens @@". Markers are separate tokens; every augmented position
// remembers which original token it came from so predictions made on the
// augmented sentence can be projected back.

#ifndef RHTAG_KNOWLEDGE_H_
#define RHTAG_KNOWLEDGE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rhtag/text.h"

namespace rhtag {

enum class KnowledgeKind { kDisease, kChemical };

std::string_view marker_for(KnowledgeKind kind);  // "$$" or "@@"
bool is_marker_token(std::string_view token);

struct KnowledgeSpan {
  std::size_t first_token = 0;
  std::size_t last_token = 0;  // inclusive
  KnowledgeKind kind = KnowledgeKind::kDisease;

  friend bool operator==(const KnowledgeSpan&, const KnowledgeSpan&) = default;
};

// Lowercase, then strip ASCII punctuation from both ends.
std::string normalize_term_token(std::string_view token);

class Gazetteer {
 public:
  Gazetteer() = default;

  // Throws kInvalidArgument for a term that normalizes to nothing or that is
  // already registered under the other kind.
  void add(std::string_view term, KnowledgeKind kind);

  // "[disease]" / "[chemical]" sections, one term per line, '#' comments.
  static Gazetteer parse(std::string_view text);
  static Gazetteer load(const std::filesystem::path& path);
  // Nine condition names with abbreviations plus common medications.
  static Gazetteer builtin();

  std::optional<KnowledgeKind> find(std::string_view normalized_term) const;
  std::size_t max_words() const { return max_words_; }
  std::size_t size() const { return terms_.size(); }
  // Canonical text form (sorted terms); equal for equal term sets.
  std::string serialize() const;

 private:
  std::map<std::string, KnowledgeKind, std::less<>> terms_;
  std::size_t max_words_ = 0;
};

// Annotator contract: tokens in, non-overlapping ordered spans out.
class KnowledgeAnnotator {
 public:
  virtual ~KnowledgeAnnotator() = default;
  virtual std::vector<KnowledgeSpan> annotate(std::span<const std::string> tokens) const = 0;
};

class GazetteerAnnotator : public KnowledgeAnnotator {
 public:
  explicit GazetteerAnnotator(Gazetteer gazetteer) : gazetteer_(std::move(gazetteer)) {}
  std::vector<KnowledgeSpan> annotate(std::span<const std::string> tokens) const override;
  const Gazetteer& gazetteer() const { return gazetteer_; }

 private:
  Gazetteer gazetteer_;
};

// Leftmost-longest case-insensitive match over token n-grams.
std::vector<KnowledgeSpan> gazetteer_annotate(std::span<const std::string> tokens,
                                              const Gazetteer& gazetteer);
std::vector<KnowledgeSpan> gazetteer_annotate(std::span<const Token> tokens,
                                              const Gazetteer& gazetteer);

struct AugmentedPosition {
  std::optional<std::size_t> original;  // token index, empty for markers
  std::optional<KnowledgeKind> marker;  // set for markers only

  bool is_marker() const { return marker.has_value(); }
  friend bool operator==(const AugmentedPosition&, const AugmentedPosition&) = default;
};

struct AugmentedSentence {
  std::vector<std::string> tokens;
  std::optional<BioSequence> labels;
  std::vector<AugmentedPosition> origin;
};

// Markers take label O unless the next original token is I-x, in which case
// they take I-x so the entity continues through them. kInvalidArgument for
// overlapping, unordered or out-of-range spans, or mismatched label length.
AugmentedSentence augment(std::span<const std::string> tokens,
                          const std::optional<BioSequence>& labels,
                          std::span<const KnowledgeSpan> kspans);

// Drops marker positions and repairs the remainder. kInvalidArgument when
// `predicted` does not match the augmented length.
BioSequence project_back(const AugmentedSentence& aug, std::span<const BioLabel> predicted);

// Removes markers and returns the original tokens.
std::vector<std::string> strip_markers(const AugmentedSentence& aug);

}  // namespace rhtag

#endif  // RHTAG_KNOWLEDGE_H_

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

#include "rhtag/text.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "rhtag/error.h"
#include "rhtag/utf8.h"

namespace rhtag {
namespace {

std::u32string decode_or_throw(std::string_view text) {
  auto chars = utf8::decode(text);
  if (!chars) throw Error(ErrorCode::kInvalidArgument, "text is not valid UTF-8");
  return std::move(*chars);
}

std::vector<Token> tokenize_chars(std::u32string_view chars,
                                  std::size_t begin, std::size_t end,
                                  std::size_t base_offset) {
  std::vector<Token> tokens;
  std::size_t i = begin;
  while (i < end) {
    while (i < end && utf8::is_space(chars[i])) ++i;
    if (i == end) break;
    std::size_t j = i;
    while (j < end && !utf8::is_space(chars[j])) ++j;
    tokens.push_back(Token{utf8::encode(chars.substr(i, j - i)),
                           base_offset + i - begin, base_offset + j - begin});
    i = j;
  }
  return tokens;
}

}  // namespace

std::string BioLabel::str() const {
  switch (tag) {
    case BioTag::kOutside:
      return "O";
    case BioTag::kBegin:
      return "B-" + entity;
    case BioTag::kInside:
      return "I-" + entity;
  }
  return "O";
}

BioLabel BioLabel::parse(std::string_view s) {
  if (s == "O") return outside();
  if (s.size() > 2 && s[1] == '-' && (s[0] == 'B' || s[0] == 'I')) {
    std::string entity(s.substr(2));
    return s[0] == 'B' ? begin(std::move(entity)) : inside(std::move(entity));
  }
  throw Error(ErrorCode::kParse, "malformed BIO label '" + std::string(s) + "'");
}

std::vector<std::string> to_strings(std::span<const BioLabel> labels) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(l.str());
  return out;
}

BioSequence parse_labels(std::span<const std::string> labels) {
  BioSequence out;
  out.reserve(labels.size());
  for (const auto& s : labels) out.push_back(BioLabel::parse(s));
  return out;
}

bool is_well_formed(std::span<const BioLabel> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].tag != BioTag::kInside) continue;
    if (i == 0 || labels[i - 1].is_outside() ||
        labels[i - 1].entity != labels[i].entity) {
      return false;
    }
  }
  return true;
}

TagSet::TagSet(const LabelSchema& schema) : labels_(schema.labels()) {}

std::size_t TagSet::index(const BioLabel& label) const {
  if (label.is_outside()) return 0;
  const auto it = std::find(labels_.begin(), labels_.end(), label.entity);
  if (it == labels_.end()) {
    throw Error(ErrorCode::kUnknownLabel,
                "label '" + label.entity + "' is not in the schema");
  }
  const auto slot = static_cast<std::size_t>(it - labels_.begin());
  return 1 + 2 * slot + (label.tag == BioTag::kInside ? 1 : 0);
}

BioLabel TagSet::label(std::size_t index) const {
  if (index == 0) return BioLabel::outside();
  const std::string& entity = labels_.at(entity_of(index));
  return is_inside(index) ? BioLabel::inside(entity) : BioLabel::begin(entity);
}

bool TagSet::allowed(std::size_t prev, std::size_t next) const {
  if (!is_inside(next)) return true;
  return prev != 0 && prev < size() && entity_of(prev) == entity_of(next);
}

std::vector<Token> whitespace_tokenize(std::string_view sentence_text,
                                       std::size_t base_offset) {
  const std::u32string chars = decode_or_throw(sentence_text);
  return tokenize_chars(chars, 0, chars.size(), base_offset);
}

std::vector<SentenceSpan> RuleSegmenter::segment(std::string_view text) const {
  const std::u32string chars = decode_or_throw(text);
  const std::size_t n = chars.size();

  std::vector<std::size_t> cuts;
  for (std::size_t i = 0; i < n; ++i) {
    const char32_t c = chars[i];
    const bool terminal = c == U'.' || c == U'?' || c == U'!';
    const bool newline = c == U'\n';
    if (!terminal && !newline) continue;
    std::size_t k = i + 1;
    while (k < n && utf8::is_space(chars[k])) ++k;
    if (terminal && k == i + 1 && k < n) continue;  // no whitespace after
    if (k == n || utf8::is_upper(chars[k]) || utf8::is_digit(chars[k])) {
      cuts.push_back(i + 1);
    }
  }
  cuts.push_back(n);

  std::vector<SentenceSpan> sentences;
  std::size_t from = 0;
  for (std::size_t cut : cuts) {
    std::size_t b = from;
    std::size_t e = cut;
    while (b < e && utf8::is_space(chars[b])) ++b;
    while (e > b && utf8::is_space(chars[e - 1])) --e;
    if (b < e) {
      sentences.push_back(SentenceSpan{b, e, tokenize_chars(chars, b, e, b)});
    }
    from = cut;
  }
  return sentences;
}

std::vector<SentenceSpan> segment_sentences(std::string_view text) {
  return RuleSegmenter{}.segment(text);
}

BioSequence encode_bio(const SentenceSpan& sentence,
                       std::span<const AnnotatedSpan> spans,
                       const LabelSchema& schema) {
  std::vector<std::size_t> rank(spans.size());
  std::vector<std::size_t> order(spans.size());
  for (std::size_t s = 0; s < spans.size(); ++s) {
    const auto idx = schema.index_of(spans[s].label);
    if (!idx) {
      throw Error(ErrorCode::kUnknownLabel,
                  "label '" + spans[s].label + "' is not in the schema");
    }
    rank[s] = *idx;
  }
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (spans[a].start_char != spans[b].start_char) {
      return spans[a].start_char < spans[b].start_char;
    }
    if (rank[a] != rank[b]) return rank[a] < rank[b];
    return spans[a].end_char > spans[b].end_char;
  });

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const auto& tokens = sentence.tokens;
  std::vector<std::size_t> owner(tokens.size(), kNone);
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    for (std::size_t s : order) {
      if (tokens[t].start_char < spans[s].end_char &&
          spans[s].start_char < tokens[t].end_char) {
        owner[t] = s;
        break;
      }
    }
  }

  BioSequence labels(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    if (owner[t] == kNone) continue;
    const std::string& entity = spans[owner[t]].label;
    labels[t] = (t > 0 && owner[t - 1] == owner[t]) ? BioLabel::inside(entity)
                                                    : BioLabel::begin(entity);
  }
  return labels;
}

std::vector<AnnotatedSpan> decode_bio(const SentenceSpan& sentence,
                                      std::span<const BioLabel> labels) {
  const auto& tokens = sentence.tokens;
  if (labels.size() != tokens.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "decode_bio: " + std::to_string(labels.size()) +
                    " labels for " + std::to_string(tokens.size()) + " tokens");
  }
  std::vector<AnnotatedSpan> spans;
  for (std::size_t t = 0; t < labels.size(); ++t) {
    const BioLabel& l = labels[t];
    if (l.is_outside()) continue;
    const bool continues = l.tag == BioTag::kInside && !spans.empty() && t > 0 &&
                           !labels[t - 1].is_outside() &&
                           labels[t - 1].entity == l.entity;
    if (continues) {
      spans.back().end_char = tokens[t].end_char;
    } else {
      spans.push_back({tokens[t].start_char, tokens[t].end_char, l.entity});
    }
  }
  return spans;
}

BioSequence repair_bio(std::span<const BioLabel> labels) {
  BioSequence out(labels.begin(), labels.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].tag != BioTag::kInside) continue;
    if (i == 0 || out[i - 1].is_outside() || out[i - 1].entity != out[i].entity) {
      out[i].tag = BioTag::kBegin;
    }
  }
  return out;
}

}  // namespace rhtag

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

#include "rhtag/knowledge.h"

#include <fstream>
#include <sstream>

#include "rhtag/error.h"
#include "rhtag/utf8.h"

namespace rhtag {
namespace internal {
extern const std::string_view kDefaultGazetteer;
}  // namespace internal

namespace {

constexpr std::string_view kDiseaseMarker = "$$";
constexpr std::string_view kChemicalMarker = "@@";

bool is_edge_punct(char c) {
  return utf8::is_punct(static_cast<unsigned char>(c));
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string_view marker_for(KnowledgeKind kind) {
  return kind == KnowledgeKind::kDisease ? kDiseaseMarker : kChemicalMarker;
}

bool is_marker_token(std::string_view token) {
  return token == kDiseaseMarker || token == kChemicalMarker;
}

std::string normalize_term_token(std::string_view token) {
  std::size_t b = 0;
  std::size_t e = token.size();
  while (b < e && is_edge_punct(token[b])) ++b;
  while (e > b && is_edge_punct(token[e - 1])) --e;
  return utf8::to_lower(token.substr(b, e - b));
}

void Gazetteer::add(std::string_view term, KnowledgeKind kind) {
  std::string key;
  std::size_t words = 0;
  for (const Token& t : whitespace_tokenize(term)) {
    const std::string w = normalize_term_token(t.text);
    if (w.empty()) continue;
    if (!key.empty()) key += ' ';
    key += w;
    ++words;
  }
  if (key.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "gazetteer term '" + std::string(term) + "' is empty after normalization");
  }
  const auto [it, inserted] = terms_.emplace(key, kind);
  if (!inserted && it->second != kind) {
    throw Error(ErrorCode::kInvalidArgument,
                "gazetteer term '" + key + "' listed as both disease and chemical");
  }
  max_words_ = std::max(max_words_, words);
}

Gazetteer Gazetteer::parse(std::string_view text) {
  Gazetteer g;
  std::optional<KnowledgeKind> section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line == "[disease]") {
      section = KnowledgeKind::kDisease;
    } else if (line == "[chemical]") {
      section = KnowledgeKind::kChemical;
    } else if (line.front() == '[') {
      throw Error(ErrorCode::kParse, "gazetteer line " + std::to_string(line_no) +
                                         ": unknown section " + std::string(line));
    } else if (!section) {
      throw Error(ErrorCode::kParse, "gazetteer line " + std::to_string(line_no) +
                                         ": term before any section header");
    } else {
      g.add(line, *section);
    }
  }
  return g;
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open gazetteer " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Gazetteer Gazetteer::builtin() { return parse(internal::kDefaultGazetteer); }

std::optional<KnowledgeKind> Gazetteer::find(std::string_view normalized_term) const {
  const auto it = terms_.find(normalized_term);
  if (it == terms_.end()) return std::nullopt;
  return it->second;
}

std::string Gazetteer::serialize() const {
  std::string out;
  for (const KnowledgeKind kind : {KnowledgeKind::kDisease, KnowledgeKind::kChemical}) {
    out += kind == KnowledgeKind::kDisease ? "[disease]\n" : "[chemical]\n";
    for (const auto& [term, k] : terms_) {
      if (k == kind) out += term + "\n";
    }
  }
  return out;
}

std::vector<KnowledgeSpan> gazetteer_annotate(std::span<const std::string> tokens,
                                              const Gazetteer& gazetteer) {
  std::vector<std::string> norm;
  norm.reserve(tokens.size());
  for (const auto& t : tokens) norm.push_back(normalize_term_token(t));

  std::vector<KnowledgeSpan> spans;
  std::size_t i = 0;
  while (i < norm.size()) {
    bool matched = false;
    const std::size_t longest = std::min(gazetteer.max_words(), norm.size() - i);
    for (std::size_t n = longest; n >= 1 && !matched; --n) {
      std::string key;
      bool usable = true;
      for (std::size_t k = i; k < i + n; ++k) {
        if (norm[k].empty()) {
          usable = false;
          break;
        }
        if (k > i) key += ' ';
        key += norm[k];
      }
      if (!usable) continue;
      if (const auto kind = gazetteer.find(key)) {
        spans.push_back({i, i + n - 1, *kind});
        i += n;
        matched = true;
      }
    }
    if (!matched) ++i;
  }
  return spans;
}

std::vector<KnowledgeSpan> gazetteer_annotate(std::span<const Token> tokens,
                                              const Gazetteer& gazetteer) {
  std::vector<std::string> texts;
  texts.reserve(tokens.size());
  for (const auto& t : tokens) texts.push_back(t.text);
  return gazetteer_annotate(texts, gazetteer);
}

std::vector<KnowledgeSpan> GazetteerAnnotator::annotate(
    std::span<const std::string> tokens) const {
  return gazetteer_annotate(tokens, gazetteer_);
}

AugmentedSentence augment(std::span<const std::string> tokens,
                          const std::optional<BioSequence>& labels,
                          std::span<const KnowledgeSpan> kspans) {
  if (labels && labels->size() != tokens.size()) {
    throw Error(ErrorCode::kInvalidArgument, "augment: label count differs from token count");
  }
  for (std::size_t s = 0; s < kspans.size(); ++s) {
    const auto& k = kspans[s];
    if (k.first_token > k.last_token || k.last_token >= tokens.size()) {
      throw Error(ErrorCode::kInvalidArgument, "augment: knowledge span out of range");
    }
    if (s > 0 && kspans[s - 1].last_token >= k.first_token) {
      throw Error(ErrorCode::kInvalidArgument,
                  "augment: knowledge spans overlap or are unordered");
    }
  }

  AugmentedSentence aug;
  if (labels) aug.labels.emplace();
  auto push_marker = [&](KnowledgeKind kind, std::size_t next_original) {
    aug.tokens.emplace_back(marker_for(kind));
    aug.origin.push_back({std::nullopt, kind});
    if (!labels) return;
    BioLabel l;
    if (next_original < labels->size() && (*labels)[next_original].tag == BioTag::kInside) {
      l = BioLabel::inside((*labels)[next_original].entity);
    }
    aug.labels->push_back(std::move(l));
  };

  std::size_t next_span = 0;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const bool opens = next_span < kspans.size() && kspans[next_span].first_token == t;
    if (opens) push_marker(kspans[next_span].kind, t);
    aug.tokens.push_back(tokens[t]);
    aug.origin.push_back({t, std::nullopt});
    if (labels) aug.labels->push_back((*labels)[t]);
    if (next_span < kspans.size() && kspans[next_span].last_token == t) {
      push_marker(kspans[next_span].kind, t + 1);
      ++next_span;
    }
  }
  return aug;
}

BioSequence project_back(const AugmentedSentence& aug, std::span<const BioLabel> predicted) {
  if (predicted.size() != aug.origin.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "project_back: " + std::to_string(predicted.size()) + " labels for " +
                    std::to_string(aug.origin.size()) + " augmented tokens");
  }
  BioSequence out;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (const auto& o = aug.origin[i].original) {
      if (*o >= out.size()) out.resize(*o + 1);
      out[*o] = predicted[i];
    }
  }
  return repair_bio(out);
}

std::vector<std::string> strip_markers(const AugmentedSentence& aug) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < aug.tokens.size(); ++i) {
    if (const auto& o = aug.origin[i].original) {
      if (*o >= out.size()) out.resize(*o + 1);
      out[*o] = aug.tokens[i];
    }
  }
  return out;
}

}  // namespace rhtag

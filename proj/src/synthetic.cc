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

// Template corpus generator for desk-scale experiments and tests.
//
// Templates mark the labeled span with "[[" and "]]"; placeholders in braces
// are filled from small vocabularies. Chemical names and the distractor words
// placed next to them come from the same syllable generator, so only the
// gazetteer separates them.

#include <array>
#include <cstdio>
#include <set>
#include <string_view>

#include "rhtag/corpus.h"
#include "rhtag/error.h"
#include "rhtag/random.h"
#include "rhtag/utf8.h"

namespace rhtag {
namespace {

struct Condition {
  std::string_view subreddit;
  std::vector<std::string_view> surfaces;
};

const std::vector<Condition>& conditions() {
  static const std::vector<Condition> kConditions = {
      {"gout", {"gout"}},
      {"multiple_sclerosis", {"multiple sclerosis", "MS"}},
      {"pots", {"POTS"}},
      {"lupus", {"lupus"}},
      {"cystic_fibrosis", {"cystic fibrosis", "CF"}},
      {"ibs", {"IBS"}},
      {"type1_diabetes", {"type 1 diabetes", "T1D"}},
      {"epilepsy", {"epilepsy"}},
      {"adhd", {"ADHD"}},
  };
  return kConditions;
}

constexpr std::array<std::string_view, 9> kSymptoms = {
    "joint pain", "fatigue",  "brain fog", "nausea",   "headaches",
    "swelling",   "dizziness", "insomnia", "stomach cramps"};

constexpr std::array<std::string_view, 4> kOpeners = {
    "Hi everyone.", "Long time lurker here.", "Quick update from me.", "Hello all."};
constexpr std::array<std::string_view, 4> kClosers = {
    "Thanks in advance.", "Sorry for the long post.", "Any advice is welcome.",
    "Stay strong everyone."};

const std::map<std::string_view, std::vector<std::string_view>>& templates() {
  static const std::map<std::string_view, std::vector<std::string_view>> kTemplates = {
      {"question",
       {"[[Has anyone tried {chem} for their {cond}?]]",
        "[[Does {chem} help with {symptom}?]]",
        "[[What do you do when your {symptom} gets bad?]]",
        "[[How long did it take for {chem} to work?]]",
        "[[Is it normal to have {symptom} after starting {chem}?]]"}},
      {"claim",
       {"[[{Chem} is known to reduce {symptom} in people with {cond}.]]",
        "[[Cutting out sugar helps a lot with {cond} flares.]]",
        "[[Doctors say {chem} can cause {symptom} in some patients.]]",
        "[[Regular exercise makes {symptom} much easier to manage.]]"}},
      {"per_exp",
       {"[[I have been on {chem} for {n} weeks and my {symptom} got worse.]]",
        "[[My {symptom} started right after my last flare.]]",
        "[[I was diagnosed with {cond} {n} years ago.]]",
        "[[Last night I could not sleep because of the {symptom}.]]"}},
      {"claim_per_exp",
       {"[[Since I switched to {chem} my {symptom} is gone, so it really works.]]",
        "[[I stopped eating gluten and my {cond} improved, so diet definitely matters.]]",
        "[[After {n} months on {chem} my {symptom} cleared up, which proves it helps.]]"}},
      {"population",
       {"As someone with [[{cond}]] I struggle with sleep.",
        "Are there other [[{cond}]] patients here who work full time?",
        "My sister also has [[{cond}]] and she manages fine."}},
      {"intervention",
       {"My doctor suggested {pair} last week.",
        "I was offered {pair} at my last appointment.",
        "Has anyone compared {pair} recently?"}},
      {"outcome",
       {"The [[{symptom}]] has been unbearable lately.",
        "Lately my [[{symptom}]] keeps getting worse.",
        "Does anyone else get [[{symptom}]] in the morning?"}},
  };
  return kTemplates;
}

std::vector<std::string> pseudo_words(std::uint64_t stream, std::size_t count,
                                      const std::set<std::string>& exclude) {
  constexpr std::array<std::string_view, 20> kOnsets = {
      "b", "c", "d", "f", "g", "k", "l", "m", "n", "p",
      "r", "s", "t", "v", "z", "br", "cl", "dr", "tr", "pr"};
  constexpr std::array<std::string_view, 6> kVowels = {"a", "e", "i", "o", "u", "y"};
  constexpr std::array<std::string_view, 8> kCodas = {"", "n", "r", "l", "x", "m", "s", "t"};
  std::mt19937_64 rng(derive_seed(0x5EED, stream));
  std::set<std::string> seen = exclude;
  std::vector<std::string> words;
  while (words.size() < count) {
    std::string w;
    for (int s = 0; s < 3; ++s) {
      w += kOnsets[uniform_index(rng, kOnsets.size())];
      w += kVowels[uniform_index(rng, kVowels.size())];
    }
    w += kCodas[uniform_index(rng, kCodas.size())];
    if (seen.insert(w).second) words.push_back(std::move(w));
  }
  return words;
}

constexpr std::size_t kLexiconSize = 400;

const std::vector<std::string>& chemicals() {
  static const std::vector<std::string> kChemicals = pseudo_words(1, kLexiconSize, {});
  return kChemicals;
}

const std::vector<std::string>& distractors() {
  static const std::vector<std::string> kDistractors = pseudo_words(
      2, kLexiconSize, std::set<std::string>(chemicals().begin(), chemicals().end()));
  return kDistractors;
}

template <typename C>
std::string pick(const C& items, std::mt19937_64& rng) {
  return std::string(items[uniform_index(rng, items.size())]);
}

std::string capitalized(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

// Expands one template; spans are reported relative to the sentence start.
std::string render(std::string_view tmpl, const std::string& label, const Condition& cond,
                   std::mt19937_64& rng, std::vector<AnnotatedSpan>& spans,
                   std::size_t base_chars) {
  std::string out;
  std::size_t span_start = 0;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl.compare(i, 2, "[[") == 0) {
      span_start = utf8::length(out);
      i += 2;
    } else if (tmpl.compare(i, 2, "]]") == 0) {
      spans.push_back({base_chars + span_start, base_chars + utf8::length(out), label});
      i += 2;
    } else if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i);
      const std::string_view key = tmpl.substr(i + 1, close - i - 1);
      if (key == "chem") {
        out += pick(chemicals(), rng);
      } else if (key == "Chem") {
        out += capitalized(pick(chemicals(), rng));
      } else if (key == "cond") {
        out += pick(cond.surfaces, rng);
      } else if (key == "symptom") {
        out += pick(kSymptoms, rng);
      } else if (key == "n") {
        out += std::to_string(2 + uniform_index(rng, 9));
      } else if (key == "pair") {
        // The chemical sits on either side of the distractor.
        const std::string chem = pick(chemicals(), rng);
        const std::string other = pick(distractors(), rng);
        const bool chem_first = uniform_index(rng, 2) == 0;
        const std::size_t at = utf8::length(out) + (chem_first ? 0 : other.size() + 5);
        out += chem_first ? chem + " and " + other : other + " and " + chem;
        spans.push_back({base_chars + at, base_chars + at + chem.size(), label});
      }
      i = close + 1;
    } else {
      out.push_back(tmpl[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace

Corpus generate_synthetic_corpus(const std::map<std::string, std::size_t>& spec,
                                 std::uint64_t seed) {
  const LabelSchema s1 = LabelSchema::subtask1();
  const LabelSchema s2 = LabelSchema::subtask2();
  bool all1 = true;
  bool all2 = true;
  for (const auto& [label, count] : spec) {
    all1 = all1 && s1.contains(label);
    all2 = all2 && s2.contains(label);
  }
  if (!all1 && !all2) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic spec must use labels of a single schema");
  }
  Corpus corpus{all1 ? s1 : s2, {}};

  std::vector<std::string> labels;
  for (const auto& [label, count] : spec) labels.insert(labels.end(), count, label);
  std::mt19937_64 rng(seed);
  shuffle(std::span<std::string>(labels), rng);

  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string& label = labels[i];
    const Condition& cond = conditions()[uniform_index(rng, conditions().size())];
    Post post;
    char id[64];
    std::snprintf(id, sizeof id, "syn%llu-%05zu", static_cast<unsigned long long>(seed), i);
    post.post_id = id;
    post.condition = std::string(cond.subreddit);
    if (uniform_index(rng, 2) == 0) post.text = pick(kOpeners, rng) + " ";
    const auto& options = templates().at(label);
    post.text += render(options[uniform_index(rng, options.size())], label, cond, rng,
                        post.spans, utf8::length(post.text));
    if (uniform_index(rng, 2) == 0) post.text += " " + pick(kClosers, rng);
    corpus.posts.push_back(std::move(post));
  }
  return corpus;
}

std::string synthetic_gazetteer_text() {
  std::string out = "# Lexicon of the synthetic corpus generator.\n[disease]\n";
  for (const auto& c : conditions()) {
    for (auto s : c.surfaces) out += utf8::to_lower(s) + "\n";
  }
  out += "[chemical]\n";
  for (const auto& w : chemicals()) out += w + "\n";
  return out;
}

}  // namespace rhtag

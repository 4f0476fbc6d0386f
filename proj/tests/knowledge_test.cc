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


#include <algorithm>
#include <random>

#include "doctest.h"
#include "rhtag/error.h"
#include "rhtag/knowledge.h"
#include "support.h"

namespace rhtag {
namespace {

using Strings = std::vector<std::string>;

BioSequence labels(std::initializer_list<const char*> names) {
  BioSequence out;
  for (const char* n : names) out.push_back(BioLabel::parse(n));
  return out;
}

std::string join(const Strings& tokens) {
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

TEST_CASE("term normalization") {
  CHECK(normalize_term_token("Gout.") == "gout");
  CHECK(normalize_term_token("(MS)") == "ms");
  CHECK(normalize_term_token("T1D's") == "t1d's");
  CHECK(normalize_term_token("...") == "");
}

TEST_CASE("gazetteer parsing") {
  const Gazetteer g = Gazetteer::parse(
      "# comment\n[disease]\ngout\nType 1 Diabetes\n\n[chemical]\nallopurinol\n");
  CHECK(g.size() == 3);
  CHECK(g.max_words() == 3);
  CHECK(g.find("type 1 diabetes") == KnowledgeKind::kDisease);
  CHECK(g.find("allopurinol") == KnowledgeKind::kChemical);
  CHECK_FALSE(g.find("ibuprofen"));
  CHECK(Gazetteer::parse(g.serialize()).serialize() == g.serialize());
  CHECK_THROWS_AS(Gazetteer::parse("gout\n"), Error);
  CHECK_THROWS_AS(Gazetteer::parse("[disease]\nlithium\n[chemical]\nlithium\n"), Error);
  CHECK_THROWS_AS(Gazetteer::parse("[protein]\nx\n"), Error);
  CHECK_THROWS_AS(Gazetteer::load("/nonexistent/gazetteer.txt"), Error);
}

TEST_CASE("built-in lexicon covers the named terms") {
  const Gazetteer g = Gazetteer::builtin();
  for (const char* d : {"gout", "ms", "multiple sclerosis", "pots", "lupus", "cystic fibrosis",
                        "ibs", "type 1 diabetes", "epilepsy", "adhd"}) {
    CHECK_MESSAGE(g.find(d) == KnowledgeKind::kDisease, d);
  }
  for (const char* c : {"allopurinol", "metoclopramide"}) {
    CHECK_MESSAGE(g.find(c) == KnowledgeKind::kChemical, c);
  }
}

TEST_CASE("annotation") {
  const Gazetteer g = Gazetteer::builtin();
  CHECK(gazetteer_annotate(Strings{"I", "was", "diagnosed", "with", "gout."}, g) ==
        std::vector<KnowledgeSpan>{{4, 4, KnowledgeKind::kDisease}});
  CHECK(gazetteer_annotate(Strings{"started", "allopurinol", "today"}, g) ==
        std::vector<KnowledgeSpan>{{1, 1, KnowledgeKind::kChemical}});
  CHECK(gazetteer_annotate(Strings{"nothing", "to", "see"}, g).empty());
  // Longest match wins over the shorter "diabetes" entry.
  CHECK(gazetteer_annotate(Strings{"my", "Type", "1", "diabetes", "is", "fine"}, g) ==
        std::vector<KnowledgeSpan>{{1, 3, KnowledgeKind::kDisease}});
  const GazetteerAnnotator annotator(g);
  CHECK(annotator.annotate(Strings{"MS", "and", "lupus"}).size() == 2);
}

TEST_CASE("augmentation worked example") {
  const Strings tokens = {"Gout", "flare", "after", "allopurinol"};
  const std::vector<KnowledgeSpan> k = {{0, 0, KnowledgeKind::kDisease},
                                        {3, 3, KnowledgeKind::kChemical}};
  const BioSequence gold = labels({"B-population", "O", "O", "B-intervention"});
  const AugmentedSentence aug = augment(tokens, gold, k);
  CHECK(join(aug.tokens) == "$$ Gout $$ flare after @@ allopurinol @@");
  CHECK(join(to_strings(*aug.labels)) == "O B-population O O O O B-intervention O");
  REQUIRE(aug.origin.size() == 8);
  CHECK(aug.origin[0].is_marker());
  CHECK(aug.origin[1].original == 0u);
  CHECK(aug.origin[7].marker == KnowledgeKind::kChemical);

  CHECK(project_back(aug, *aug.labels) == gold);
  CHECK(project_back(aug, BioSequence(8)) == BioSequence(4));
  BioSequence stray(8);
  stray[2] = BioLabel::inside("population");
  const BioSequence back = project_back(aug, stray);
  CHECK(back == BioSequence(4));
  CHECK(is_well_formed(back));
  CHECK(strip_markers(aug) == tokens);
}

TEST_CASE("markers inside an entity continue it") {
  const Strings tokens = {"flares", "of", "gout", "pain"};
  const BioSequence gold = labels({"B-outcome", "I-outcome", "I-outcome", "I-outcome"});
  const AugmentedSentence aug = augment(tokens, gold, std::vector<KnowledgeSpan>{{2, 2, KnowledgeKind::kDisease}});
  CHECK(join(aug.tokens) == "flares of $$ gout $$ pain");
  CHECK(join(to_strings(*aug.labels)) == "B-outcome I-outcome I-outcome I-outcome I-outcome I-outcome");
  CHECK(is_well_formed(*aug.labels));
}

TEST_CASE("augmentation without spans is the identity") {
  const Strings tokens = {"a", "b"};
  const AugmentedSentence aug = augment(tokens, std::nullopt, {});
  CHECK(aug.tokens == tokens);
  CHECK_FALSE(aug.labels);
  REQUIRE(aug.origin.size() == 2);
  CHECK(aug.origin[0].original == 0u);
  CHECK(aug.origin[1].original == 1u);
}

TEST_CASE("augmentation rejects bad spans") {
  const Strings tokens = {"a", "b", "c"};
  CHECK_THROWS_AS(augment(tokens, std::nullopt, std::vector<KnowledgeSpan>{{0, 1, KnowledgeKind::kDisease}, {1, 2, KnowledgeKind::kChemical}}), Error);
  CHECK_THROWS_AS(augment(tokens, std::nullopt, std::vector<KnowledgeSpan>{{2, 2, KnowledgeKind::kDisease}, {0, 0, KnowledgeKind::kChemical}}), Error);
  CHECK_THROWS_AS(augment(tokens, std::nullopt, std::vector<KnowledgeSpan>{{2, 3, KnowledgeKind::kDisease}}), Error);
  CHECK_THROWS_AS(augment(tokens, BioSequence(2), {}), Error);
  const AugmentedSentence aug = augment(tokens, std::nullopt, {});
  CHECK_THROWS_AS(project_back(aug, BioSequence(2)), Error);
}

TEST_CASE("augmentation properties on 1000 random cases") {
  const LabelSchema schema = LabelSchema::subtask2();
  const TagSet tags(schema);
  std::mt19937_64 rng(77);
  for (int iter = 0; iter < 1000; ++iter) {
    std::uniform_int_distribution<std::size_t> len(1, 14);
    const std::size_t n = len(rng);
    Strings tokens;
    for (std::size_t i = 0; i < n; ++i) tokens.push_back("w" + std::to_string(rng() % 50));

    std::vector<KnowledgeSpan> k;
    for (std::size_t i = 0; i < n;) {
      if (rng() % 3 == 0) {
        const std::size_t last = std::min(n - 1, i + rng() % 3);
        k.push_back({i, last, rng() % 2 ? KnowledgeKind::kDisease : KnowledgeKind::kChemical});
        i = last + 1 + rng() % 2;
      } else {
        ++i;
      }
    }
    BioSequence noisy;
    for (std::size_t i = 0; i < n; ++i) noisy.push_back(tags.label(rng() % tags.size()));
    const BioSequence gold = repair_bio(noisy);

    const AugmentedSentence aug = augment(tokens, gold, k);
    CHECK(strip_markers(aug) == tokens);
    CHECK(aug.tokens.size() == n + 2 * k.size());
    for (const KnowledgeKind kind : {KnowledgeKind::kDisease, KnowledgeKind::kChemical}) {
      const auto spans = std::count_if(k.begin(), k.end(), [&](const KnowledgeSpan& s) { return s.kind == kind; });
      const auto marks = std::count(aug.tokens.begin(), aug.tokens.end(), std::string(marker_for(kind)));
      CHECK(marks == 2 * spans);
    }
    // Markers of each span bracket it and open/close alternately.
    std::optional<KnowledgeKind> open;
    for (const auto& o : aug.origin) {
      if (!o.is_marker()) continue;
      if (open) {
        CHECK(*o.marker == *open);
        open.reset();
      } else {
        open = o.marker;
      }
    }
    CHECK_FALSE(open);
    CHECK(is_well_formed(*aug.labels));
    CHECK(project_back(aug, *aug.labels) == gold);
  }
}

}  // namespace
}  // namespace rhtag

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


#include <random>

#include "doctest.h"
#include "rhtag/error.h"
#include "rhtag/evaluation.h"
#include "support.h"

namespace rhtag {
namespace {

constexpr double kTol = 1e-9;

struct Expected {
  const char* label;
  double p, r, f;
};

void check_prf(const Prf& got, const Expected& want) {
  INFO(want.label);
  CHECK(got.precision == doctest::Approx(want.p).epsilon(kTol));
  CHECK(got.recall == doctest::Approx(want.r).epsilon(kTol));
  CHECK(got.f1 == doctest::Approx(want.f).epsilon(kTol));
}

BioSequence labels(std::initializer_list<const char*> names) {
  BioSequence out;
  for (const char* n : names) out.push_back(BioLabel::parse(n));
  return out;
}

TEST_CASE("token confusion basics") {
  const LabelSchema s1 = LabelSchema::subtask1();
  const std::vector<BioSequence> gold = {labels({"B-claim", "I-claim", "O", "B-question"})};
  const ConfusionMatrix perfect = token_confusion(gold, gold, s1);
  for (std::size_t r = 0; r < perfect.size(); ++r) {
    for (std::size_t c = 0; c < perfect.size(); ++c) {
      if (r != c) CHECK(perfect.counts[r][c] == 0);
    }
  }
  CHECK(perfect.total() == 4);
  CHECK(perfect.labels.back() == "no_label");

  const ConfusionMatrix miss = token_confusion(std::vector<BioSequence>{labels({"B-claim"})},
                                               std::vector<BioSequence>{labels({"O"})}, s1);
  CHECK(miss.counts[0][4] == 1);
  CHECK(miss.total() == 1);

  CHECK_THROWS_AS(token_confusion(gold, std::vector<BioSequence>{}, s1), Error);
  CHECK_THROWS_AS(token_confusion(gold, std::vector<BioSequence>{labels({"O"})}, s1), Error);
  CHECK_THROWS_AS(token_confusion(std::vector<BioSequence>{labels({"B-population"})},
                                  std::vector<BioSequence>{labels({"O"})}, s1),
                  Error);
}

TEST_CASE("all-O predictions score zero") {
  const LabelSchema s2 = LabelSchema::subtask2();
  const std::vector<BioSequence> gold = {labels({"B-population", "B-outcome", "I-outcome", "B-intervention"})};
  const std::vector<BioSequence> pred = {BioSequence(4)};
  const MetricsReport m = token_prf(token_confusion(gold, pred, s2));
  for (const auto& [label, prf] : m.per_label) {
    CHECK(prf.precision == 0.0);
    CHECK(prf.recall == 0.0);
    CHECK(prf.f1 == 0.0);
  }
  CHECK(m.micro.f1 == 0.0);
  CHECK(f1_score(0.0, 0.0) == 0.0);
}

TEST_CASE("reference confusion counts round-trip through token streams") {
  for (const auto& [schema, counts] :
       {std::pair{LabelSchema::subtask1(), testing::reference_counts_subtask1()},
        std::pair{LabelSchema::subtask2(), testing::reference_counts_subtask2()}}) {
    const testing::Streams s = testing::realize_counts(counts, schema);
    for (const auto& g : s.gold) CHECK(is_well_formed(g));
    const ConfusionMatrix m = token_confusion(s.gold, s.pred, schema);
    CHECK(m.counts == counts);
  }
  CHECK(token_confusion(testing::realize_counts(testing::reference_counts_subtask1(), LabelSchema::subtask1()).gold,
                        testing::realize_counts(testing::reference_counts_subtask1(), LabelSchema::subtask1()).pred,
                        LabelSchema::subtask1())
            .total() == 138141);
}

TEST_CASE("metrics from the PIO reference counts") {
  const LabelSchema s2 = LabelSchema::subtask2();
  const auto s = testing::realize_counts(testing::reference_counts_subtask2(), s2);
  const MetricsReport m = token_prf(token_confusion(s.gold, s.pred, s2));
  check_prf(m.label("population"), {"population", 0.2727272727272727, 0.39622641509433965, 0.32307692307692304});
  check_prf(m.label("intervention"), {"intervention", 0.34183673469387754, 0.32211538461538464, 0.3316831683168317});
  check_prf(m.label("outcome"), {"outcome", 0.11904761904761904, 0.26627218934911245, 0.16453382084095064});
  check_prf(m.micro, {"micro", 0.21153846153846154, 0.3188405797101449, 0.2543352601156069});
  check_prf(m.macro, {"macro", 0.24453720882025335, 0.32820466301961225, 0.27309797074630177});
  CHECK(m.support == std::vector<std::pair<std::string, std::uint64_t>>{{"population", 106}, {"intervention", 208}, {"outcome", 169}});
}

TEST_CASE("metrics from the patient-experience reference counts") {
  const LabelSchema s1 = LabelSchema::subtask1();
  const auto s = testing::realize_counts(testing::reference_counts_subtask1(), s1);
  const MetricsReport m = token_prf(token_confusion(s.gold, s.pred, s1));
  check_prf(m.label("claim"), {"claim", 0.41534810126582278, 0.22756827048114434, 0.29403528423410811});
  check_prf(m.label("claim_per_exp"), {"claim_per_exp", 0.42154968877441511, 0.23619963920625376, 0.30275936489902885});
  check_prf(m.label("per_exp"), {"per_exp", 0.54430846159802708, 0.58619614512471659, 0.56447628800567778});
  check_prf(m.label("question"), {"question", 0.79588501819802424, 0.84416607579059323, 0.81931488002446867});
  check_prf(m.micro, {"micro", 0.59052648092271397, 0.57829166309955678, 0.58434503695553745});
  check_prf(m.macro, {"macro", 0.54427281745907233, 0.47353253265067698, 0.49514645429081836});
}

TEST_CASE("confusion serialization") {
  const LabelSchema s2 = LabelSchema::subtask2();
  const auto s = testing::realize_counts(testing::reference_counts_subtask2(), s2);
  const ConfusionMatrix m = token_confusion(s.gold, s.pred, s2);
  CHECK(m.to_csv() ==
        "gold\\predicted,population,intervention,outcome,no_label\n"
        "population,42,1,12,51\n"
        "intervention,4,67,1,136\n"
        "outcome,4,0,45,120\n"
        "no_label,104,128,320,18269\n");
  const auto j = token_prf(m).to_json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"per_label", "micro", "macro", "support"});
  CHECK(j["per_label"].begin().key() == "population");
  CHECK(m.to_json()["labels"].size() == 4);
}

TEST_CASE("sentence classes") {
  const LabelSchema s1 = LabelSchema::subtask1();
  SentenceSpan s;
  s.start_char = 10;
  s.end_char = 25;
  s.tokens = {{"Is", 10, 12}, {"it", 13, 15}, {"gout?", 16, 21}, {"ok", 22, 24}};
  CHECK(sentence_class(s, std::vector<AnnotatedSpan>{{0, 40, "question"}}, s1) == "question");
  CHECK(sentence_class(s, std::vector<AnnotatedSpan>{}, s1) == "no_label");
  CHECK(sentence_class(s, std::vector<AnnotatedSpan>{{10, 15, "per_exp"}, {16, 24, "claim"}}, s1) == "claim");
  CHECK(sentence_class(s, std::vector<AnnotatedSpan>{{0, 9, "claim"}}, s1) == "no_label");
  CHECK(sentence_class(BioSequence(4), s1) == "no_label");
  CHECK(sentence_class(labels({"B-claim", "I-claim", "I-claim", "B-per_exp", "I-per_exp"}), s1) == "claim");
  CHECK(sentence_class(labels({"B-per_exp", "B-claim"}), s1) == "claim");
}

TEST_CASE("sentence-level metrics") {
  const LabelSchema s1 = LabelSchema::subtask1();
  const std::vector<std::string> all = {"claim", "per_exp", "claim_per_exp", "question", "no_label"};
  const MetricsReport same = sentence_prf(all, all, s1);
  for (const auto& [l, prf] : same.per_label) CHECK(prf.f1 == 1.0);
  CHECK(same.micro.f1 == 1.0);
  CHECK(same.macro.f1 == 1.0);

  const std::vector<std::string> gold_q(5, "question");
  const std::vector<std::string> pred_none(5, "no_label");
  CHECK(sentence_prf(gold_q, pred_none, s1).label("question").recall == 0.0);
  CHECK_THROWS_AS(sentence_confusion(gold_q, std::vector<std::string>(4, "claim"), s1), Error);
  const std::vector<std::string> bogus = {"nonsense"};
  CHECK_THROWS_AS(sentence_confusion(bogus, bogus, s1), Error);

  // Brute-force recount over random class vectors.
  std::mt19937_64 rng(200);
  std::vector<std::string> gold, pred;
  for (int i = 0; i < 200; ++i) {
    gold.push_back(all[rng() % all.size()]);
    pred.push_back(all[rng() % all.size()]);
  }
  const MetricsReport m = sentence_prf(gold, pred, s1);
  double tp_all = 0, pred_all = 0, gold_all = 0;
  for (const auto& l : s1.labels()) {
    double tp = 0, np = 0, ng = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      tp += (gold[i] == l && pred[i] == l);
      np += (pred[i] == l);
      ng += (gold[i] == l);
    }
    const double p = np ? tp / np : 0.0;
    const double r = ng ? tp / ng : 0.0;
    check_prf(m.label(l), {l.c_str(), p, r, p + r > 0 ? 2 * p * r / (p + r) : 0.0});
    tp_all += tp;
    pred_all += np;
    gold_all += ng;
  }
  CHECK(m.micro.precision == doctest::Approx(tp_all / pred_all));
  CHECK(m.micro.recall == doctest::Approx(tp_all / gold_all));
}

}  // namespace
}  // namespace rhtag

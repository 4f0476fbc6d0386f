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


#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "rhtag/corpus.h"
#include "rhtag/error.h"
#include "rhtag/utf8.h"
#include "support.h"

namespace rhtag {
namespace {

Corpus parse(const std::string& text, const LabelSchema& schema = LabelSchema::subtask1()) {
  std::istringstream in(text);
  return read_corpus(in, schema);
}

Post post(std::string id, std::string text, std::vector<AnnotatedSpan> spans,
          std::string condition = "gout") {
  return Post{std::move(id), std::move(condition), std::move(text), std::move(spans)};
}

std::string span_text(const Post& p, const AnnotatedSpan& s) {
  const utf8::CharIndex idx(p.text);
  return std::string(idx.slice(p.text, s.start_char, s.end_char));
}

// Counts whitespace-separated runs touching [start, end), walking code points.
std::size_t recount_tokens(const std::u32string& chars, std::size_t start, std::size_t end) {
  const auto space = [](char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' || c == U'\f' ||
           c == 0xA0 || c == 0x85 || c == 0x1680 || (c >= 0x2000 && c <= 0x200A) ||
           c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
  };
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < chars.size()) {
    if (space(chars[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < chars.size() && !space(chars[j])) ++j;
    if (i < end && start < j) ++n;
    i = j;
  }
  return n;
}

// Brute-force recount of the statistics, independent of corpus_stats.
nlohmann::ordered_json recount(const Corpus& corpus) {
  std::map<std::string, std::size_t> per_condition;
  std::map<std::string, std::size_t> count;
  std::map<std::string, std::size_t> length;
  std::size_t total = 0;
  std::size_t in_overlap = 0;
  for (const auto& p : corpus.posts) {
    ++per_condition[p.condition];
    const std::u32string chars = *utf8::decode(p.text);
    for (std::size_t i = 0; i < p.spans.size(); ++i) {
      const auto& s = p.spans[i];
      ++count[s.label];
      length[s.label] += recount_tokens(chars, s.start_char, s.end_char);
      ++total;
      bool overlapping = false;
      for (std::size_t j = 0; j < p.spans.size(); ++j) {
        if (j != i && p.spans[j].start_char < s.end_char && s.start_char < p.spans[j].end_char) {
          overlapping = true;
        }
      }
      in_overlap += overlapping ? 1 : 0;
    }
  }
  nlohmann::ordered_json j;
  j["posts_per_condition"] = nlohmann::ordered_json::object();
  for (const auto& [c, n] : per_condition) j["posts_per_condition"][c] = n;
  j["entity_counts"] = nlohmann::ordered_json::object();
  j["mean_entity_length_tokens"] = nlohmann::ordered_json::object();
  for (const auto& l : corpus.schema.labels()) {
    if (!count.contains(l)) continue;
    j["entity_counts"][l] = count[l];
  }
  for (const auto& l : corpus.schema.labels()) {
    if (!count.contains(l)) continue;
    j["mean_entity_length_tokens"][l] =
        static_cast<double>(length[l]) / static_cast<double>(count[l]);
  }
  j["overlap_fraction"] = total == 0 ? 0.0 : static_cast<double>(in_overlap) / total;
  return j;
}

TEST_CASE("schemas") {
  CHECK(LabelSchema::subtask1().labels() ==
        std::vector<std::string>{"claim", "per_exp", "claim_per_exp", "question"});
  CHECK(LabelSchema::subtask2().labels() ==
        std::vector<std::string>{"population", "intervention", "outcome"});
  CHECK(LabelSchema::by_name("subtask2") == LabelSchema::subtask2());
  try {
    LabelSchema::by_name("subtask3");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownSchema);
    CHECK(std::string(e.what()).find("unknown schema") != std::string::npos);
  }
}

TEST_CASE("reading JSONL") {
  CHECK(parse("").posts.empty());
  const Corpus c = parse(
      R"({"post_id":"p1","condition":"gout","text":"I have gout.","spans":[{"start":0,"end":12,"label":"claim"}]})"
      "\n");
  REQUIRE(c.posts.size() == 1);
  CHECK(c.posts[0].spans == std::vector<AnnotatedSpan>{{0, 12, "claim"}});

  testing::TempDir dir;
  testing::write_file(dir / "bad.jsonl",
                      R"({"post_id":"p1","condition":"gout","text":"I have gout.","spans":[{"start":0,"end":12,"label":"population"}]})"
                      "\n");
  try {
    load_corpus(dir / "bad.jsonl", LabelSchema::subtask1());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnknownLabel);
    CHECK(std::string(e.what()).find("unknown label") != std::string::npos);
  }

  try {
    parse("{\"post_id\":\"a\",\"condition\":\"x\",\"text\":\"t\",\"spans\":[]}\n{oops\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse(R"({"post_id":"a","condition":"x","text":"t","spans":[{"start":-1,"end":1,"label":"claim"}]})"),
                  Error);
  CHECK_THROWS_AS(read_corpus(dir / "missing.jsonl", LabelSchema::subtask1()), Error);
}

TEST_CASE("write then read is the identity") {
  Corpus c{LabelSchema::subtask1(),
           {post("a", "na\xC3\xAFve \"quoted\" text", {{0, 5, "claim"}, {3, 9, "question"}}, "pots"),
            post("b", "", {}, "ibs")}};
  std::ostringstream out;
  write_corpus(out, c);
  const Corpus back = parse(out.str());
  CHECK(back.posts == c.posts);
}

TEST_CASE("validation findings") {
  const LabelSchema s1 = LabelSchema::subtask1();
  CHECK(validate_corpus(Corpus{s1, {post("a", "plain text", {})}}).errors.empty());
  CHECK(validate_corpus(Corpus{s1, {post("a", "plain text", {})}}).warnings.empty());

  const auto overlap = validate_corpus(
      Corpus{s1, {post("a", "0123456789abcdefghij", {{0, 10, "claim"}, {5, 15, "question"}})}});
  CHECK(overlap.ok());
  CHECK(overlap.warnings.size() == 1);

  const auto oob = validate_corpus(Corpus{s1, {post("a", "short", {{0, 6, "claim"}})}});
  REQUIRE(oob.errors.size() == 1);
  CHECK(oob.errors[0].code == "offset_out_of_range");

  const auto many = validate_corpus(Corpus{
      s1,
      {post("a", "some text here", {{4, 4, "claim"}, {0, 3, "population"}}),
       post("a", "bad \xC3 utf8", {}), post("c", "more text", {{5, 9, "claim"}, {0, 4, "claim"}})}});
  std::set<std::string> codes;
  for (const auto& f : many.errors) codes.insert(f.code);
  CHECK(codes == std::set<std::string>{"empty_span", "unknown_label", "duplicate_post_id",
                                       "invalid_utf8", "unsorted_spans"});
  CHECK(many.to_json()["counts"]["empty_span"] == 1);
}

TEST_CASE("stats examples") {
  const LabelSchema s1 = LabelSchema::subtask1();
  const CorpusStats one = corpus_stats(Corpus{s1, {post("a", "I have gout today.", {{0, 11, "claim"}})}});
  CHECK(one.entity_counts == std::map<std::string, std::size_t>{{"claim", 1}});
  CHECK(one.mean_entity_length_tokens.at("claim") == doctest::Approx(3.0));
  const CorpusStats empty = corpus_stats(Corpus{s1, {}});
  CHECK(empty.entity_counts.empty());
  CHECK(empty.posts_per_condition.empty());
  CHECK(empty.overlap_fraction == 0.0);
  CHECK_THROWS_AS(corpus_stats(Corpus{s1, {post("a", "x", {{0, 5, "claim"}})}}), Error);
}

TEST_CASE("stats agree with a brute-force recount") {
  const Corpus syn = generate_synthetic_corpus({{"claim", 25}, {"per_exp", 25}, {"claim_per_exp", 25}, {"question", 25}}, 7);
  REQUIRE(syn.posts.size() == 100);
  CHECK(corpus_stats(syn).to_json(syn.schema) == recount(syn));

  Corpus hand{LabelSchema::subtask1(),
              {post("a", "one two three four five six", {{0, 13, "claim"}, {8, 18, "per_exp"}, {19, 27, "claim"}}),
               post("b", "na\xC3\xAFve  \xE2\x80\x9Cquote\xE2\x80\x9D x", {{2, 9, "question"}}, "lupus")}};
  CHECK(corpus_stats(hand).to_json(hand.schema) == recount(hand));
}

TEST_CASE("synthetic generator") {
  CHECK(generate_synthetic_corpus({}, 1).posts.empty());
  const Corpus q = generate_synthetic_corpus({{"question", 5}}, 1);
  REQUIRE(q.posts.size() == 5);
  for (const auto& p : q.posts) {
    REQUIRE(p.spans.size() == 1);
    CHECK(p.spans[0].label == "question");
    const std::string text = span_text(p, p.spans[0]);
    CHECK(text.back() == '?');
  }
  const auto a = generate_synthetic_corpus({{"claim", 3}, {"per_exp", 3}}, 9);
  const auto b = generate_synthetic_corpus({{"claim", 3}, {"per_exp", 3}}, 9);
  std::ostringstream sa, sb;
  write_corpus(sa, a);
  write_corpus(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(validate_corpus(generate_synthetic_corpus({{"population", 40}, {"intervention", 40}, {"outcome", 40}}, 2)).ok());
  CHECK(generate_synthetic_corpus({{"outcome", 1}}, 2).schema == LabelSchema::subtask2());
  CHECK_THROWS_AS(generate_synthetic_corpus({{"claim", 1}, {"outcome", 1}}, 2), Error);
}

void check_partition(const Corpus& corpus, const CorpusSplit& split) {
  std::multiset<std::string> all, sides;
  for (const auto& p : corpus.posts) all.insert(p.post_id);
  for (const auto& p : split.train.posts) sides.insert(p.post_id);
  for (const auto& p : split.validation.posts) sides.insert(p.post_id);
  CHECK(all == sides);
  CHECK(split.train.posts.size() + split.validation.posts.size() == corpus.posts.size());
}

std::map<std::string, std::size_t> label_counts(const Corpus& c) {
  std::map<std::string, std::size_t> out;
  for (const auto& p : c.posts) {
    for (const auto& s : p.spans) ++out[s.label];
  }
  return out;
}

TEST_CASE("stratified split") {
  const LabelSchema s1 = LabelSchema::subtask1();
  Corpus ten{s1, {}};
  for (int i = 0; i < 10; ++i) ten.posts.push_back(post("p" + std::to_string(i), "some claim", {{0, 10, "claim"}}));
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    const CorpusSplit split = stratified_split(ten, 0.2, seed);
    CHECK(split.validation.posts.size() == 2);
    CHECK(label_counts(split.validation)["claim"] == 2);
    check_partition(ten, split);
  }

  Corpus rare = ten;
  rare.posts[3].spans = {{0, 4, "question"}};
  const CorpusSplit r = stratified_split(rare, 0.5, 4);
  check_partition(rare, r);
  CHECK(!r.train.posts.empty());
  CHECK(!r.validation.posts.empty());

  const Corpus syn = generate_synthetic_corpus(
      {{"claim", 120}, {"per_exp", 90}, {"claim_per_exp", 60}, {"question", 30}}, 11);
  const CorpusSplit s = stratified_split(syn, 0.1, 11);
  check_partition(syn, s);
  const auto total = label_counts(syn);
  const auto val = label_counts(s.validation);
  for (const auto& [label, n] : total) {
    const double target = 0.1 * static_cast<double>(n);
    CHECK(std::abs(static_cast<double>(val.count(label) ? val.at(label) : 0) - target) <= 1.0);
  }
  // Each side keeps file order.
  std::size_t last = 0;
  for (const auto& p : s.validation.posts) {
    const std::size_t at = std::stoul(p.post_id.substr(p.post_id.find('-') + 1));
    CHECK(at >= last);
    last = at;
  }
  CHECK_THROWS_AS(stratified_split(syn, 0.0, 1), Error);
  CHECK_THROWS_AS(stratified_split(syn, 1.0, 1), Error);
}

}  // namespace
}  // namespace rhtag

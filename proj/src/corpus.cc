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

#include "rhtag/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rhtag/error.h"
#include "rhtag/random.h"
#include "rhtag/text.h"
#include "rhtag/utf8.h"

namespace rhtag {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

LabelSchema::LabelSchema(std::string name, std::vector<std::string> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty() || l == kOutside) {
      throw Error(ErrorCode::kInvalidArgument,
                  "schema label must be non-empty and not \"O\"");
    }
    if (!seen.insert(l).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate schema label '" + l + "'");
    }
  }
}

LabelSchema LabelSchema::subtask1() {
  return LabelSchema("subtask1", {"claim", "per_exp", "claim_per_exp", "question"});
}

LabelSchema LabelSchema::subtask2() {
  return LabelSchema("subtask2", {"population", "intervention", "outcome"});
}

LabelSchema LabelSchema::by_name(std::string_view name) {
  if (name == "subtask1") return subtask1();
  if (name == "subtask2") return subtask2();
  throw Error(ErrorCode::kUnknownSchema, "unknown schema '" + std::string(name) + "'");
}

std::optional<std::size_t> LabelSchema::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

ordered_json ValidationReport::to_json() const {
  auto findings = [](const std::vector<Finding>& list) {
    ordered_json arr = ordered_json::array();
    for (const auto& f : list) {
      arr.push_back({{"post_id", f.post_id}, {"code", f.code}, {"message", f.message}});
    }
    return arr;
  };
  ordered_json j;
  j["ok"] = ok();
  j["errors"] = findings(errors);
  j["warnings"] = findings(warnings);
  j["counts"] = ordered_json::object();
  for (const auto& [code, n] : counts) j["counts"][code] = n;
  return j;
}

ordered_json CorpusStats::to_json(const LabelSchema& schema) const {
  ordered_json j;
  j["posts_per_condition"] = ordered_json::object();
  for (const auto& [c, n] : posts_per_condition) j["posts_per_condition"][c] = n;
  j["entity_counts"] = ordered_json::object();
  j["mean_entity_length_tokens"] = ordered_json::object();
  for (const auto& label : schema.labels()) {
    if (auto it = entity_counts.find(label); it != entity_counts.end()) {
      j["entity_counts"][label] = it->second;
    }
    if (auto it = mean_entity_length_tokens.find(label);
        it != mean_entity_length_tokens.end()) {
      j["mean_entity_length_tokens"][label] = it->second;
    }
  }
  j["overlap_fraction"] = overlap_fraction;
  return j;
}

namespace {

template <typename T>
T field(const json& obj, const char* key, std::size_t line_no) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                       ": missing field '" + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                       ": field '" + key + "' has the wrong type");
  }
}

Post parse_post(const std::string& line, std::size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
  }
  if (!obj.is_object()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_no) + ": expected a JSON object");
  }
  Post post;
  post.post_id = field<std::string>(obj, "post_id", line_no);
  post.condition = field<std::string>(obj, "condition", line_no);
  post.text = field<std::string>(obj, "text", line_no);
  const auto spans = field<json>(obj, "spans", line_no);
  if (!spans.is_array()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_no) + ": 'spans' must be an array");
  }
  for (const auto& s : spans) {
    const auto start = field<std::int64_t>(s, "start", line_no);
    const auto end = field<std::int64_t>(s, "end", line_no);
    if (start < 0 || end < 0) {
      throw Error(ErrorCode::kData, "post " + post.post_id + ": negative span offset");
    }
    post.spans.push_back({static_cast<std::size_t>(start),
                          static_cast<std::size_t>(end),
                          field<std::string>(s, "label", line_no)});
  }
  std::sort(post.spans.begin(), post.spans.end(),
            [](const AnnotatedSpan& a, const AnnotatedSpan& b) {
              return std::tie(a.start_char, a.end_char, a.label) <
                     std::tie(b.start_char, b.end_char, b.label);
            });
  return post;
}

void add_finding(ValidationReport& report, bool error, const std::string& post_id,
                 const std::string& code, std::string message) {
  (error ? report.errors : report.warnings).push_back({post_id, code, std::move(message)});
  ++report.counts[code];
}

std::string extent(const AnnotatedSpan& s) {
  return "[" + std::to_string(s.start_char) + "," + std::to_string(s.end_char) + ")";
}

}  // namespace

Corpus read_corpus(std::istream& in, const LabelSchema& schema) {
  Corpus corpus{schema, {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    corpus.posts.push_back(parse_post(line, line_no));
  }
  return corpus;
}

Corpus read_corpus(const std::filesystem::path& path, const LabelSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return read_corpus(in, schema);
}

Corpus load_corpus(const std::filesystem::path& path, const LabelSchema& schema) {
  Corpus corpus = read_corpus(path, schema);
  const ValidationReport report = validate_corpus(corpus);
  if (!report.ok()) {
    const Finding& f = report.errors.front();
    throw Error(f.code == "unknown_label" ? ErrorCode::kUnknownLabel : ErrorCode::kData,
                "post " + f.post_id + ": " + f.message);
  }
  return corpus;
}

std::string post_to_jsonl(const Post& post) {
  ordered_json j;
  j["post_id"] = post.post_id;
  j["condition"] = post.condition;
  j["text"] = post.text;
  j["spans"] = ordered_json::array();
  for (const auto& s : post.spans) {
    j["spans"].push_back({{"start", s.start_char}, {"end", s.end_char}, {"label", s.label}});
  }
  return j.dump();
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& post : corpus.posts) out << post_to_jsonl(post) << '\n';
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_corpus(out, corpus);
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  std::unordered_set<std::string> ids;
  for (const auto& post : corpus.posts) {
    if (!ids.insert(post.post_id).second) {
      add_finding(report, true, post.post_id, "duplicate_post_id",
                  "post_id '" + post.post_id + "' appears more than once");
    }
    if (!utf8::is_valid(post.text)) {
      add_finding(report, true, post.post_id, "invalid_utf8", "text is not valid UTF-8");
      continue;
    }
    const std::size_t len = utf8::length(post.text);
    for (std::size_t i = 0; i < post.spans.size(); ++i) {
      const auto& s = post.spans[i];
      if (s.start_char >= s.end_char) {
        add_finding(report, true, post.post_id, "empty_span",
                    "span " + extent(s) + " is empty or inverted");
      } else if (s.end_char > len) {
        add_finding(report, true, post.post_id, "offset_out_of_range",
                    "span " + extent(s) + " exceeds text length " + std::to_string(len));
      }
      if (!corpus.schema.contains(s.label)) {
        add_finding(report, true, post.post_id, "unknown_label",
                    "unknown label '" + s.label + "' for schema " + corpus.schema.name());
      }
      if (i > 0 && post.spans[i - 1].start_char > s.start_char) {
        add_finding(report, true, post.post_id, "unsorted_spans",
                    "spans are not sorted by start offset");
      }
    }
    for (std::size_t i = 0; i < post.spans.size(); ++i) {
      for (std::size_t k = i + 1; k < post.spans.size(); ++k) {
        if (post.spans[i].overlaps(post.spans[k])) {
          add_finding(report, false, post.post_id, "overlap",
                      "spans " + extent(post.spans[i]) + " " + post.spans[i].label +
                          " and " + extent(post.spans[k]) + " " + post.spans[k].label +
                          " overlap");
        }
      }
    }
  }
  return report;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  if (!validate_corpus(corpus).ok()) {
    throw Error(ErrorCode::kData,
                "corpus has validation errors; run validate_corpus for details");
  }
  CorpusStats stats;
  std::map<std::string, std::size_t> length_totals;
  std::size_t total_spans = 0;
  std::size_t overlapping = 0;
  for (const auto& post : corpus.posts) {
    ++stats.posts_per_condition[post.condition];
    const std::vector<Token> tokens = whitespace_tokenize(post.text);
    for (std::size_t i = 0; i < post.spans.size(); ++i) {
      const auto& s = post.spans[i];
      ++stats.entity_counts[s.label];
      length_totals[s.label] += static_cast<std::size_t>(
          std::count_if(tokens.begin(), tokens.end(), [&](const Token& t) {
            return t.start_char < s.end_char && s.start_char < t.end_char;
          }));
      ++total_spans;
      for (std::size_t k = 0; k < post.spans.size(); ++k) {
        if (k != i && s.overlaps(post.spans[k])) {
          ++overlapping;
          break;
        }
      }
    }
  }
  for (const auto& [label, n] : stats.entity_counts) {
    stats.mean_entity_length_tokens[label] =
        static_cast<double>(length_totals[label]) / static_cast<double>(n);
  }
  stats.overlap_fraction =
      total_spans == 0 ? 0.0
                       : static_cast<double>(overlapping) / static_cast<double>(total_spans);
  return stats;
}

CorpusSplit stratified_split(const Corpus& corpus, double validation_fraction,
                             std::uint64_t seed) {
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "validation fraction must lie in (0, 1)");
  }
  const std::size_t n = corpus.posts.size();
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "splitting needs at least two posts");
  }

  // Slot per schema label plus one for span-less posts; unknown labels share
  // the last slot with span-less posts, which keeps them balanced too.
  const std::size_t slots = corpus.schema.size() + 1;
  std::vector<std::vector<std::size_t>> counts(n, std::vector<std::size_t>(slots, 0));
  std::vector<double> totals(slots, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    const auto& spans = corpus.posts[p].spans;
    if (spans.empty()) ++counts[p][slots - 1];
    for (const auto& s : spans) {
      ++counts[p][corpus.schema.index_of(s.label).value_or(slots - 1)];
    }
    for (std::size_t l = 0; l < slots; ++l) totals[l] += static_cast<double>(counts[p][l]);
  }

  std::vector<double> in_validation(slots, 0.0);
  auto cost_change = [&](std::size_t p, double sign) {
    double delta = 0.0;
    for (std::size_t l = 0; l < slots; ++l) {
      if (counts[p][l] == 0) continue;
      const double target = validation_fraction * totals[l];
      const double after = in_validation[l] + sign * static_cast<double>(counts[p][l]);
      delta += (std::abs(after - target) - std::abs(in_validation[l] - target)) / totals[l];
    }
    return delta;
  };
  auto move = [&](std::size_t p, double sign) {
    for (std::size_t l = 0; l < slots; ++l) {
      in_validation[l] += sign * static_cast<double>(counts[p][l]);
    }
  };

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  shuffle(std::span<std::size_t>(order), rng);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus.posts[a].spans.size() > corpus.posts[b].spans.size();
  });

  constexpr double kEps = 1e-12;
  std::vector<bool> to_validation(n, false);
  std::size_t validation_size = 0;
  for (std::size_t p : order) {
    if (cost_change(p, 1.0) < -kEps) {
      move(p, 1.0);
      to_validation[p] = true;
      ++validation_size;
    }
  }

  // Neither side may be empty: move the post whose transfer costs least.
  if (validation_size == 0 || validation_size == n) {
    const bool fill_validation = validation_size == 0;
    std::size_t best = order.front();
    double best_cost = INFINITY;
    for (std::size_t p : order) {
      const double c = cost_change(p, fill_validation ? 1.0 : -1.0);
      if (c < best_cost - kEps) {
        best = p;
        best_cost = c;
      }
    }
    move(best, fill_validation ? 1.0 : -1.0);
    to_validation[best] = fill_validation;
  }

  CorpusSplit split{{corpus.schema, {}}, {corpus.schema, {}}};
  for (std::size_t p = 0; p < n; ++p) {
    (to_validation[p] ? split.validation : split.train).posts.push_back(corpus.posts[p]);
  }
  return split;
}

}  // namespace rhtag

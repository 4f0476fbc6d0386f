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


// Shared fixtures for the test binaries.

#ifndef RHTAG_TESTS_SUPPORT_H_
#define RHTAG_TESTS_SUPPORT_H_

#include <stdlib.h>

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rhtag/corpus.h"
#include "rhtag/evaluation.h"
#include "rhtag/text.h"

namespace rhtag::testing {

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "rhtag-test-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Token-level confusion counts of a strong tagger on the patient-experience
// task, rows gold and columns predicted, in subtask1 schema order (claim,
// per_exp, claim_per_exp, question) followed by no_label.
inline const std::vector<std::vector<std::uint64_t>>& reference_counts_subtask1() {
  static const std::vector<std::vector<std::uint64_t>> counts = {
      {525, 170, 30, 75, 1507},
      {26, 20681, 968, 403, 13202},
      {37, 2762, 1964, 86, 3466},
      {37, 373, 19, 10715, 1549},
      {639, 14009, 1678, 2184, 61036},
  };
  return counts;
}

// Same for PIO tagging: population, intervention, outcome, no_label.
inline const std::vector<std::vector<std::uint64_t>>& reference_counts_subtask2() {
  static const std::vector<std::vector<std::uint64_t>> counts = {
      {42, 1, 12, 51},
      {4, 67, 1, 136},
      {4, 0, 45, 120},
      {104, 128, 320, 18269},
  };
  return counts;
}

struct Streams {
  std::vector<BioSequence> gold;
  std::vector<BioSequence> pred;
};

// Gold/predicted label sequences whose token confusion equals `counts`.
// Tokens are emitted cell by cell and cut into sentences of `width`.
inline Streams realize_counts(const std::vector<std::vector<std::uint64_t>>& counts,
                              const LabelSchema& schema, std::size_t width = 64) {
  const auto label_for = [&](std::size_t slot, bool begin) {
    if (slot == schema.size()) return BioLabel::outside();
    return begin ? BioLabel::begin(schema.labels()[slot]) : BioLabel::inside(schema.labels()[slot]);
  };
  Streams s;
  BioSequence g;
  BioSequence p;
  for (std::size_t r = 0; r < counts.size(); ++r) {
    for (std::size_t c = 0; c < counts[r].size(); ++c) {
      for (std::uint64_t n = 0; n < counts[r][c]; ++n) {
        // B at the start of each cell and sentence, I elsewhere.
        const bool begin = g.empty() || n == 0;
        g.push_back(label_for(r, begin));
        p.push_back(label_for(c, begin));
        if (g.size() == width) {
          s.gold.push_back(std::move(g));
          s.pred.push_back(std::move(p));
          g.clear();
          p.clear();
        }
      }
    }
  }
  if (!g.empty()) {
    s.gold.push_back(std::move(g));
    s.pred.push_back(std::move(p));
  }
  return s;
}

// Random sentence made of short ASCII words separated by 1-3 spaces, with
// an optional non-ASCII word to exercise code-point offsets.
inline std::string random_sentence(std::mt19937_64& rng, std::size_t max_tokens = 12) {
  static const std::array<std::string, 12> words = {
      "I",   "took", "pain", "gout.", "allopurinol", "na\xC3\xAFve",
      "MS?", "the",  "a",    "worse", "daily",       "\xE2\x80\x9Cok\xE2\x80\x9D"};
  std::uniform_int_distribution<std::size_t> n_tokens(1, max_tokens);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::uniform_int_distribution<int> gap(1, 3);
  std::string out;
  const std::size_t n = n_tokens(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) out.append(static_cast<std::size_t>(gap(rng)), ' ');
    out += words[pick(rng)];
  }
  return out;
}

}  // namespace rhtag::testing

#endif  // RHTAG_TESTS_SUPPORT_H_

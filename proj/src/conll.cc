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
#include "rhtag/conll.h"

#include <istream>
#include <ostream>

#include "rhtag/error.h"

namespace rhtag {

void write_conll(std::ostream& out, const std::vector<ConllSentence>& sentences) {
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      out << s.tokens[i] << '\t' << s.labels.at(i).str() << '\n';
    }
    out << '\n';
  }
}

std::vector<ConllSentence> read_conll(std::istream& in) {
  std::vector<ConllSentence> out;
  ConllSentence current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!current.tokens.empty()) out.push_back(std::move(current));
      current = {};
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorCode::kParse, "CoNLL line " + std::to_string(line_no) +
                                         ": expected token<TAB>tag");
    }
    current.tokens.push_back(line.substr(0, tab));
    current.labels.push_back(BioLabel::parse(std::string_view(line).substr(tab + 1)));
  }
  if (!current.tokens.empty()) out.push_back(std::move(current));
  return out;
}

}  // namespace rhtag

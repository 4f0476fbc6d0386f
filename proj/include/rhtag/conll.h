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
// Two-column CoNLL interchange: "token<TAB>tag" per line, blank line
// between sentences.

#ifndef RHTAG_CONLL_H_
#define RHTAG_CONLL_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "rhtag/text.h"

namespace rhtag {

struct ConllSentence {
  std::vector<std::string> tokens;
  BioSequence labels;
};

void write_conll(std::ostream& out, const std::vector<ConllSentence>& sentences);

// kParse with the line number for lines without exactly one tab.
std::vector<ConllSentence> read_conll(std::istream& in);

}  // namespace rhtag

#endif  // RHTAG_CONLL_H_

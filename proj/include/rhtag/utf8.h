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
#ifndef RHTAG_UTF8_H_
#define RHTAG_UTF8_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rhtag::utf8 {

// Decodes UTF-8 into Unicode scalar values; nullopt on malformed input.
std::optional<std::u32string> decode(std::string_view bytes);

std::string encode(std::u32string_view chars);

bool is_valid(std::string_view bytes);

// Number of scalar values; the input must be valid UTF-8.
std::size_t length(std::string_view bytes);

bool is_space(char32_t c);

// ASCII-only case folding; other scalars pass through unchanged.
char32_t to_lower(char32_t c);
bool is_upper(char32_t c);
bool is_digit(char32_t c);
bool is_punct(char32_t c);

std::string to_lower(std::string_view bytes);

// Last n scalar values of a valid UTF-8 string (the whole string if shorter).
std::string suffix(std::string_view bytes, std::size_t n);

// Maps character offsets to byte offsets for a fixed text.
class CharIndex {
 public:
  explicit CharIndex(std::string_view text);

  std::size_t size() const { return byte_offsets_.size() - 1; }
  std::size_t byte_offset(std::size_t char_offset) const {
    return byte_offsets_.at(char_offset);
  }
  std::string_view slice(std::string_view text, std::size_t start_char,
                         std::size_t end_char) const;

 private:
  std::vector<std::size_t> byte_offsets_;
};

}  // namespace rhtag::utf8

#endif  // RHTAG_UTF8_H_

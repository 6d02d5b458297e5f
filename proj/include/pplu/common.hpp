// Copyright 2026 The PPLu Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PPLU_COMMON_HPP_
#define PPLU_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pplu {

using TokenId = std::uint32_t;
using Count = std::uint64_t;

// Reserved vocabulary entries. Their ids are part of the file formats.
inline constexpr TokenId kUnkId = 0;
inline constexpr TokenId kEosId = 1;
inline constexpr std::size_t kReservedCount = 2;
inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kEosToken = "</s>";

// Version stamped into every versioned output; readers reject anything else.
inline constexpr int kFormatVersion = 1;

// All perplexities use the natural base.
inline constexpr std::string_view kMetricBase = "e";

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_reserved(TokenId id) { return id < kReservedCount; }

// Splits on ASCII whitespace. Views point into `line`.
inline std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  std::size_t pos = line.find_first_not_of(kSpace);
  while (pos != std::string_view::npos) {
    std::size_t end = line.find_first_of(kSpace, pos);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(pos, end - pos));
    pos = line.find_first_not_of(kSpace, end);
  }
  return out;
}

}  // namespace pplu

#endif  // PPLU_COMMON_HPP_

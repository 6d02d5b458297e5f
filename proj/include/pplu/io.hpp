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

#ifndef PPLU_IO_HPP_
#define PPLU_IO_HPP_

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "pplu/common.hpp"

namespace pplu {

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for reading: " + path.string());
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path.string());
  return out;
}

inline std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_lines(in);
}

// Versioned TSV files start with "#pplu-<kind>\t<version>".
inline void write_tsv_header(std::ostream& out, std::string_view kind) {
  out << "#pplu-" << kind << '\t' << kFormatVersion << '\n';
}

inline void check_tsv_header(std::string_view line, std::string_view kind) {
  const std::string expected_prefix = "#pplu-" + std::string(kind) + '\t';
  if (!line.starts_with(expected_prefix)) {
    throw Error("missing '#pplu-" + std::string(kind) + "' header");
  }
  const std::string_view version = line.substr(expected_prefix.size());
  if (version != std::to_string(kFormatVersion)) {
    throw Error("unsupported " + std::string(kind) +
                " format version: " + std::string(version));
  }
}

// Splits a line on tab characters, keeping empty fields.
inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

namespace detail {

// Shortest representation that reads back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace detail

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error("malformed " + std::string(what) + ": '" + std::string(text) +
                "'");
  }
  return value;
}

}  // namespace pplu

#endif  // PPLU_IO_HPP_

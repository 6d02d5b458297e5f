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

#ifndef PPLU_VOCABULARY_HPP_
#define PPLU_VOCABULARY_HPP_

#include <algorithm>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pplu/common.hpp"
#include "pplu/io.hpp"

namespace pplu {

namespace detail {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

}  // namespace detail

// Dense bijection between token strings and ids. Ids 0 and 1 always hold
// <unk> and </s>. Each entry also carries the training frequency it was built
// from (zero for reserved entries and for vocabularies read from disk).
class Vocabulary {
 public:
  Vocabulary() {
    push(std::string(kUnkToken), 0);
    push(std::string(kEosToken), 0);
  }

  // Builds a vocabulary from tokens in id order. The first two entries must
  // be the reserved markers.
  static Vocabulary from_tokens(std::span<const std::string> tokens,
                                std::span<const Count> frequencies = {}) {
    if (tokens.size() < kReservedCount || tokens[kUnkId] != kUnkToken ||
        tokens[kEosId] != kEosToken) {
      throw Error("vocabulary must start with <unk> and </s>");
    }
    if (!frequencies.empty() && frequencies.size() != tokens.size()) {
      throw Error("vocabulary frequency table has the wrong length");
    }
    Vocabulary vocab;
    for (std::size_t i = kReservedCount; i < tokens.size(); ++i) {
      vocab.add(tokens[i], frequencies.empty() ? 0 : frequencies[i]);
    }
    return vocab;
  }

  std::size_t size() const { return tokens_.size(); }

  // Id of `token`, or <unk> when absent.
  TokenId id(std::string_view token) const {
    return find(token).value_or(kUnkId);
  }

  std::optional<TokenId> find(std::string_view token) const {
    auto it = index_.find(token);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& token(TokenId id) const {
    if (id >= tokens_.size()) {
      throw Error("token id out of range: " + std::to_string(id));
    }
    return tokens_[id];
  }

  Count frequency(TokenId id) const {
    token(id);
    return frequencies_[id];
  }

  std::span<const std::string> tokens() const { return tokens_; }
  std::span<const Count> frequencies() const { return frequencies_; }

  // Appends a new entry and returns its id.
  TokenId add(std::string token, Count frequency = 0) {
    if (index_.contains(token)) throw Error("duplicate token: " + token);
    return push(std::move(token), frequency);
  }

  void set_frequency(TokenId id, Count frequency) {
    token(id);
    frequencies_[id] = frequency;
  }

  void rename(TokenId id, std::string new_name) {
    if (is_reserved(id)) throw Error("cannot rename a reserved token");
    if (index_.contains(new_name)) throw Error("duplicate token: " + new_name);
    index_.erase(index_.find(std::string_view(token(id))));
    index_.emplace(new_name, id);
    tokens_[id] = std::move(new_name);
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.frequencies_ == b.frequencies_;
  }

 private:
  TokenId push(std::string token, Count frequency) {
    const auto id = static_cast<TokenId>(tokens_.size());
    index_.emplace(token, id);
    tokens_.push_back(std::move(token));
    frequencies_.push_back(frequency);
    return id;
  }

  std::vector<std::string> tokens_;
  std::vector<Count> frequencies_;
  std::unordered_map<std::string, TokenId, detail::StringHash, std::equal_to<>>
      index_;
};

// Reserved entries first, then every token with frequency >= min_count in
// descending frequency order (ties: first appearance). With max_size, the
// result holds at most max_size entries including the reserved ones.
inline Vocabulary build_vocabulary(std::span<const std::string> lines,
                                   Count min_count = 1,
                                   std::optional<std::size_t> max_size = {}) {
  if (min_count < 1) throw Error("min_count must be >= 1");
  if (max_size && *max_size < kReservedCount) {
    throw Error("max_size must be at least " + std::to_string(kReservedCount));
  }
  struct Entry {
    Count count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string, Entry, detail::StringHash, std::equal_to<>>
      counts;
  std::size_t seen = 0;
  std::size_t total = 0;
  for (const auto& line : lines) {
    for (std::string_view tok : split_whitespace(line)) {
      ++total;
      auto it = counts.find(tok);
      if (it == counts.end()) {
        it = counts.emplace(std::string(tok), Entry{0, seen++}).first;
      }
      ++it->second.count;
    }
  }
  if (total == 0) throw Error("empty corpus");

  std::vector<std::pair<std::string_view, Entry>> ranked;
  for (const auto& [tok, entry] : counts) {
    if (tok == kUnkToken || tok == kEosToken) continue;
    if (entry.count >= min_count) ranked.emplace_back(tok, entry);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    return a.second.first_seen < b.second.first_seen;
  });
  if (max_size && ranked.size() > *max_size - kReservedCount) {
    ranked.resize(*max_size - kReservedCount);
  }
  Vocabulary vocab;
  for (const auto& [tok, entry] : ranked) vocab.add(std::string(tok), entry.count);
  return vocab;
}

// Vocabulary file: one token per line, line number = id.
inline void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  for (const auto& tok : vocab.tokens()) out << tok << '\n';
}

inline Vocabulary read_vocabulary(std::istream& in) {
  auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty() || split_whitespace(lines[i]).size() != 1) {
      throw Error("vocabulary line " + std::to_string(i) +
                  " is not a single token");
    }
  }
  return Vocabulary::from_tokens(lines);
}

}  // namespace pplu

#endif  // PPLU_VOCABULARY_HPP_

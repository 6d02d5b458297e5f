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

#ifndef PPLU_CORPUS_HPP_
#define PPLU_CORPUS_HPP_

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "pplu/common.hpp"
#include "pplu/vocabulary.hpp"

namespace pplu {

using Sentence = std::vector<TokenId>;

// Sentences of token ids. Each sentence ends with exactly one </s>, which is
// counted in token_count like any other token.
struct TokenizedCorpus {
  std::vector<Sentence> sentences;
  std::size_t vocab_size = 0;
  std::size_t token_count = 0;

  bool empty() const { return sentences.empty(); }

  void validate() const {
    std::size_t total = 0;
    for (const auto& s : sentences) {
      if (s.empty() || s.back() != kEosId) {
        throw Error("corpus sentence must be non-empty and end with </s>");
      }
      for (TokenId id : s) {
        if (id >= vocab_size) throw Error("corpus token id out of range");
      }
      total += s.size();
    }
    if (total != token_count) throw Error("corpus token_count mismatch");
  }

  friend bool operator==(const TokenizedCorpus&,
                         const TokenizedCorpus&) = default;
};

inline TokenizedCorpus make_corpus(std::vector<Sentence> sentences,
                                   std::size_t vocab_size) {
  TokenizedCorpus corpus;
  corpus.vocab_size = vocab_size;
  for (const auto& s : sentences) corpus.token_count += s.size();
  corpus.sentences = std::move(sentences);
  corpus.validate();
  return corpus;
}

// Whitespace tokenization; OOV tokens map to <unk>; blank lines are skipped.
inline TokenizedCorpus tokenize(std::span<const std::string> lines,
                                const Vocabulary& vocab) {
  TokenizedCorpus corpus;
  corpus.vocab_size = vocab.size();
  for (const auto& line : lines) {
    const auto words = split_whitespace(line);
    if (words.empty()) continue;
    Sentence sentence;
    sentence.reserve(words.size() + 1);
    for (std::string_view w : words) sentence.push_back(vocab.id(w));
    sentence.push_back(kEosId);
    corpus.token_count += sentence.size();
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

// Inverse of tokenize for in-vocabulary text: tokens joined by single spaces,
// trailing </s> dropped.
inline std::vector<std::string> detokenize(const TokenizedCorpus& corpus,
                                           const Vocabulary& vocab) {
  std::vector<std::string> lines;
  lines.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) {
    std::string line;
    const std::size_t n = (!s.empty() && s.back() == kEosId) ? s.size() - 1
                                                             : s.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (i) line += ' ';
      line += vocab.token(s[i]);
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

struct VocabularyReduction {
  Vocabulary vocab;
  // remap[old_id] = new id; discarded entries map to <unk>.
  std::vector<TokenId> remap;
};

// Keeps the reserved entries plus the (keep_k - 2) most frequent tokens.
// Frequency ties, and vocabularies without frequencies, fall back to id order,
// which build_vocabulary already sorts by frequency. Kept tokens keep their
// relative order.
inline VocabularyReduction reduce_vocabulary(const Vocabulary& vocab,
                                             std::size_t keep_k) {
  if (keep_k < kReservedCount) {
    throw Error("keep_k must be at least " + std::to_string(kReservedCount));
  }
  if (keep_k > vocab.size()) {
    throw Error("keep_k " + std::to_string(keep_k) +
                " exceeds vocabulary size " + std::to_string(vocab.size()));
  }
  std::vector<TokenId> order(vocab.size() - kReservedCount);
  std::iota(order.begin(), order.end(), static_cast<TokenId>(kReservedCount));
  const auto freqs = vocab.frequencies();
  std::stable_sort(order.begin(), order.end(), [&](TokenId a, TokenId b) {
    return freqs[a] > freqs[b];
  });
  order.resize(keep_k - kReservedCount);
  std::sort(order.begin(), order.end());

  VocabularyReduction result;
  result.remap.assign(vocab.size(), kUnkId);
  result.remap[kEosId] = kEosId;
  for (TokenId old_id : order) {
    result.remap[old_id] =
        result.vocab.add(vocab.token(old_id), vocab.frequency(old_id));
  }
  return result;
}

// Rewrites every token through `remap`; sentence lengths are unchanged.
inline TokenizedCorpus remap_corpus(const TokenizedCorpus& corpus,
                                    std::span<const TokenId> remap,
                                    std::size_t new_vocab_size) {
  if (remap.size() != corpus.vocab_size) {
    throw Error("remap table does not cover the corpus vocabulary");
  }
  TokenizedCorpus out;
  out.vocab_size = new_vocab_size;
  out.token_count = corpus.token_count;
  out.sentences.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) {
    Sentence mapped(s.size());
    std::transform(s.begin(), s.end(), mapped.begin(),
                   [&](TokenId id) { return remap[id]; });
    out.sentences.push_back(std::move(mapped));
  }
  return out;
}

}  // namespace pplu

#endif  // PPLU_CORPUS_HPP_

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

#ifndef PPLU_UNIGRAM_HPP_
#define PPLU_UNIGRAM_HPP_

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pplu/common.hpp"
#include "pplu/corpus.hpp"
#include "pplu/io.hpp"
#include "pplu/log_math.hpp"
#include "pplu/vocabulary.hpp"

namespace pplu {

// Additively smoothed unigram distribution:
//   P(k) = (count[k] + alpha) / (total + alpha * |V|)
// This is the normalizer in PPLu. It also models the (context-free)
// conditional interface so it can stand in for a language model.
class UnigramModel {
 public:
  UnigramModel(std::vector<Count> counts, double alpha)
      : counts_(std::move(counts)), alpha_(alpha) {
    if (!(alpha_ >= 0.0) || !std::isfinite(alpha_)) {
      throw Error("unigram alpha must be a non-negative finite number");
    }
    if (counts_.empty()) throw Error("unigram model needs a vocabulary");
    total_ = std::accumulate(counts_.begin(), counts_.end(), Count{0});
    log_denominator_ = std::log(static_cast<double>(total_) +
                                alpha_ * static_cast<double>(counts_.size()));
    if (log_denominator_ == kLogZero) {
      throw Error("unigram model has no mass (zero counts with alpha = 0)");
    }
  }

  std::size_t vocab_size() const { return counts_.size(); }
  std::size_t context_length() const { return 0; }
  Count total() const { return total_; }
  double alpha() const { return alpha_; }
  std::span<const Count> counts() const { return counts_; }

  Count count(TokenId token) const {
    check(token);
    return counts_[token];
  }

  double probability(TokenId token) const {
    check(token);
    return (static_cast<double>(counts_[token]) + alpha_) /
           (static_cast<double>(total_) +
            alpha_ * static_cast<double>(counts_.size()));
  }

  // Natural-log probability.
  double logprob(TokenId token) const {
    check(token);
    const double numerator = static_cast<double>(counts_[token]) + alpha_;
    if (numerator == 0.0) {
      throw Error("unseen token with unsmoothed unigram (id " +
                  std::to_string(token) + ")");
    }
    return std::log(numerator) - log_denominator_;
  }

  double cond_logprob(std::span<const TokenId> /*context*/,
                      TokenId token) const {
    return logprob(token);
  }

 private:
  void check(TokenId token) const {
    if (token >= counts_.size()) {
      throw Error("unigram token id out of range: " + std::to_string(token));
    }
  }

  std::vector<Count> counts_;
  double alpha_ = 1.0;
  Count total_ = 0;
  double log_denominator_ = 0.0;
};

// Counts every token occurrence, </s> included.
inline UnigramModel count_unigrams(const TokenizedCorpus& corpus,
                                   double alpha = 1.0) {
  if (corpus.token_count == 0) throw Error("empty corpus");
  std::vector<Count> counts(corpus.vocab_size, 0);
  for (const auto& s : corpus.sentences) {
    for (TokenId id : s) {
      if (id >= counts.size()) throw Error("corpus token id out of range");
      ++counts[id];
    }
  }
  return UnigramModel(std::move(counts), alpha);
}

// Counts file: "#pplu-counts\t1" then token<TAB>count in id order.
inline void write_counts(std::ostream& out, const UnigramModel& model,
                         const Vocabulary& vocab) {
  if (vocab.size() != model.vocab_size()) {
    throw Error("counts/vocabulary size mismatch");
  }
  write_tsv_header(out, "counts");
  for (TokenId id = 0; id < model.vocab_size(); ++id) {
    out << vocab.token(id) << '\t' << model.counts()[id] << '\n';
  }
}

inline std::vector<Count> read_counts(std::istream& in,
                                      const Vocabulary& vocab) {
  auto lines = read_lines(in);
  if (lines.empty()) throw Error("counts file is empty");
  check_tsv_header(lines.front(), "counts");
  if (lines.size() - 1 != vocab.size()) {
    throw Error("counts file has " + std::to_string(lines.size() - 1) +
                " entries, vocabulary has " + std::to_string(vocab.size()));
  }
  std::vector<Count> counts;
  counts.reserve(vocab.size());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_tabs(lines[i]);
    if (fields.size() != 2) {
      throw Error("counts line " + std::to_string(i) + ": expected 2 fields");
    }
    if (fields[0] != vocab.token(static_cast<TokenId>(i - 1))) {
      throw Error("counts line " + std::to_string(i) + ": token '" +
                  std::string(fields[0]) + "' does not match vocabulary");
    }
    counts.push_back(parse_number<Count>(fields[1], "count"));
  }
  return counts;
}

}  // namespace pplu

#endif  // PPLU_UNIGRAM_HPP_

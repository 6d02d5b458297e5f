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

// Synthetic corpora with Zipf unigram marginals and tunable bigram dependence.
//
// Word types are w1..wV, where wr has Zipf weight r^-s. The first word of a
// sentence is drawn from the Zipf law. Each later word is, with probability
// `bigram_coherence`, the fixed partner of the previous word (w1<->w2,
// w3<->w4, ...), and otherwise a fresh Zipf draw. Partners have adjacent
// ranks, so the marginals stay close to Zipf while the context carries
// information; with coherence 0 tokens are independent.

#ifndef PPLU_SYNTHETIC_HPP_
#define PPLU_SYNTHETIC_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pplu/common.hpp"

namespace pplu {

struct SyntheticCorpusConfig {
  std::size_t vocab_size = 2000;
  std::size_t token_count = 100000;  // words, excluding sentence ends
  double zipf_exponent = 1.0;
  std::uint64_t seed = 1;
  double bigram_coherence = 0.0;
  std::size_t min_sentence_length = 5;
  std::size_t max_sentence_length = 20;

  void validate() const {
    if (vocab_size < 1) throw Error("vocab_size must be positive");
    if (token_count < 1) throw Error("token_count must be positive");
    if (!(zipf_exponent > 0.0) || !std::isfinite(zipf_exponent)) {
      throw Error("zipf_exponent must be positive");
    }
    if (!(bigram_coherence >= 0.0 && bigram_coherence <= 1.0)) {
      throw Error("bigram_coherence must lie in [0, 1]");
    }
    if (min_sentence_length < 1 || max_sentence_length < min_sentence_length) {
      throw Error("invalid sentence length range");
    }
  }
};

// p[r-1] proportional to r^-s, normalized.
inline std::vector<double> zipf_probabilities(std::size_t vocab_size,
                                              double exponent) {
  std::vector<double> p(vocab_size);
  double total = 0.0;
  for (std::size_t r = 0; r < vocab_size; ++r) {
    p[r] = std::pow(static_cast<double>(r + 1), -exponent);
    total += p[r];
  }
  for (double& x : p) x /= total;
  return p;
}

inline std::string synthetic_word(std::size_t rank_index) {
  return "w" + std::to_string(rank_index + 1);
}

inline std::size_t partner_index(std::size_t rank_index,
                                 std::size_t vocab_size) {
  const std::size_t partner = rank_index ^ 1U;
  return partner < vocab_size ? partner : rank_index;
}

// One sentence per line. Identical configs give identical output.
inline std::vector<std::string> generate_corpus(
    const SyntheticCorpusConfig& config) {
  config.validate();
  std::mt19937_64 engine(config.seed);
  auto uniform = [&] {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  };
  const auto probs = zipf_probabilities(config.vocab_size, config.zipf_exponent);
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  auto draw_zipf = [&] {
    const double u = uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
  };
  const std::size_t span =
      config.max_sentence_length - config.min_sentence_length + 1;

  std::vector<std::string> lines;
  std::size_t remaining = config.token_count;
  while (remaining > 0) {
    std::size_t length = config.min_sentence_length +
                         static_cast<std::size_t>(uniform() * span);
    length = std::min({length, config.max_sentence_length, remaining});
    std::string line;
    std::size_t previous = 0;
    for (std::size_t t = 0; t < length; ++t) {
      std::size_t word;
      if (t > 0 && uniform() < config.bigram_coherence) {
        word = partner_index(previous, config.vocab_size);
      } else {
        word = draw_zipf();
      }
      if (t) line += ' ';
      line += synthetic_word(word);
      previous = word;
    }
    lines.push_back(std::move(line));
    remaining -= length;
  }
  return lines;
}

}  // namespace pplu

#endif  // PPLU_SYNTHETIC_HPP_

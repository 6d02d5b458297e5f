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

// Brute-force reference implementations. Every query rescans the corpus.

#ifndef PPLU_TESTS_ORACLE_HPP_
#define PPLU_TESTS_ORACLE_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "pplu/pplu.hpp"

namespace oracle {

using pplu::TokenId;


// The last k-1 tokens of prefix, left-padded with </s>.
inline std::vector<TokenId> history(const std::vector<TokenId>& prefix,
                                    std::size_t k) {
  std::vector<TokenId> h;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    const std::ptrdiff_t pos =
        static_cast<std::ptrdiff_t>(prefix.size()) - static_cast<std::ptrdiff_t>(k - 1) +
        static_cast<std::ptrdiff_t>(j);
    h.push_back(pos < 0 ? pplu::kEosId : prefix[pos]);
  }
  return h;
}

// Number of positions whose (k-1)-history equals h and, when w is given,
// whose token equals *w.
inline double count(const pplu::TokenizedCorpus& corpus,
                    const std::vector<TokenId>& h, const TokenId* w) {
  double c = 0;
  for (const auto& s : corpus.sentences) {
    for (std::size_t t = 0; t < s.size(); ++t) {
      bool match = true;
      for (std::size_t j = 0; j < h.size(); ++j) {
        const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(t) -
                                   static_cast<std::ptrdiff_t>(h.size()) +
                                   static_cast<std::ptrdiff_t>(j);
        const TokenId got = pos < 0 ? pplu::kEosId : s[pos];
        if (got != h[j]) {
          match = false;
          break;
        }
      }
      if (match && (w == nullptr || s[t] == *w)) c += 1;
    }
  }
  return c;
}

inline double unigram_prob(const pplu::TokenizedCorpus& corpus, double alpha,
                           TokenId w) {
  double n = 0, c = 0;
  for (const auto& s : corpus.sentences) {
    for (TokenId x : s) {
      n += 1;
      if (x == w) c += 1;
    }
  }
  return (c + alpha) / (n + alpha * static_cast<double>(corpus.vocab_size));
}

// Order-k additive estimate; with alpha = 0 an unseen history defers to k-1.
inline double component_prob(const pplu::TokenizedCorpus& corpus,
                             std::size_t k, double alpha,
                             const std::vector<TokenId>& prefix, TokenId w) {
  const auto h = history(prefix, k);
  const double ch = count(corpus, h, nullptr);
  if (ch == 0 && alpha == 0) {
    return k == 1 ? 0.0 : component_prob(corpus, k - 1, alpha, prefix, w);
  }
  const double chw = count(corpus, h, &w);
  return (chw + alpha) / (ch + alpha * static_cast<double>(corpus.vocab_size));
}

inline double cond_prob(const pplu::TokenizedCorpus& corpus, std::size_t order,
                        double alpha, const std::vector<double>& weights,
                        const std::vector<TokenId>& prefix, TokenId w) {
  double p = 0;
  for (std::size_t k = 1; k <= order; ++k) {
    const double lambda =
        weights.empty() ? 1.0 / static_cast<double>(order) : weights[k - 1];
    if (lambda == 0) continue;
    p += lambda * component_prob(corpus, k, alpha, prefix, w);
  }
  return p;
}

inline double sentence_logprob(const pplu::TokenizedCorpus& corpus,
                               std::size_t order, double alpha,
                               const std::vector<double>& weights,
                               const std::vector<TokenId>& sentence) {
  double total = 0;
  std::vector<TokenId> prefix;
  for (TokenId w : sentence) {
    total += std::log(cond_prob(corpus, order, alpha, weights, prefix, w));
    prefix.push_back(w);
  }
  return total;
}

}  // namespace oracle

#endif  // PPLU_TESTS_ORACLE_HPP_

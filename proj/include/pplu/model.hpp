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

// Interfaces shared by trained models and the probability views layered on
// top of them (split views, merged/reduced views).

#ifndef PPLU_MODEL_HPP_
#define PPLU_MODEL_HPP_

#include <algorithm>
#include <array>
#include <concepts>
#include <cstddef>
#include <span>

#include "pplu/common.hpp"

namespace pplu {

inline constexpr std::size_t kMaxOrder = 16;

// A conditional distribution P(token | context) over a fixed vocabulary.
// Only the last context_length() context tokens are consulted; shorter
// contexts are treated as left-padded with </s>.
template <typename M>
concept ConditionalModel =
    requires(const M& m, std::span<const TokenId> context, TokenId token) {
      { m.cond_logprob(context, token) } -> std::convertible_to<double>;
      { m.vocab_size() } -> std::convertible_to<std::size_t>;
      { m.context_length() } -> std::convertible_to<std::size_t>;
    };

// A context-free distribution used as the PPLu normalizer.
template <typename M>
concept UnigramSource = requires(const M& m, TokenId token) {
  { m.logprob(token) } -> std::convertible_to<double>;
  { m.vocab_size() } -> std::convertible_to<std::size_t>;
};

// Fixed-capacity context window: the last `length` tokens of a context,
// left-padded with </s>.
class ContextWindow {
 public:
  ContextWindow(std::span<const TokenId> context, std::size_t length)
      : length_(length) {
    if (length > kMaxOrder) throw Error("context window too long");
    const std::size_t take = std::min(length, context.size());
    const std::size_t pad = length - take;
    for (std::size_t i = 0; i < pad; ++i) data_[i] = kEosId;
    for (std::size_t i = 0; i < take; ++i) {
      data_[pad + i] = context[context.size() - take + i];
    }
  }

  std::span<const TokenId> tokens() const { return {data_.data(), length_}; }
  std::span<TokenId> mutable_tokens() { return {data_.data(), length_}; }

  // The last n tokens of the window.
  std::span<const TokenId> suffix(std::size_t n) const {
    return tokens().subspan(length_ - n);
  }

 private:
  std::array<TokenId, kMaxOrder> data_{};
  std::size_t length_;
};

}  // namespace pplu

#endif  // PPLU_MODEL_HPP_

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

// Interpolated additively smoothed n-gram model.
//
//   P(w | h) = sum_k lambda_k * P_k(w | h_{k-1})
//   P_k(w | h) = (c(h, w) + alpha) / (c(h) + alpha * |V|)
//
// where h_{k-1} is the last k-1 tokens of the history (left-padded with </s>)
// and c(h) = sum_w c(h, w). Every order k <= n is counted at every position.
// With alpha = 0 an unseen history has no distribution of its own; that
// component then takes the value of the next lower order, which keeps every
// context exactly normalized.

#ifndef PPLU_NGRAM_HPP_
#define PPLU_NGRAM_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "pplu/common.hpp"
#include "pplu/corpus.hpp"
#include "pplu/io.hpp"
#include "pplu/log_math.hpp"
#include "pplu/model.hpp"

namespace pplu {

namespace detail {

struct IdSpanHash {
  using is_transparent = void;
  std::size_t operator()(std::span<const TokenId> ids) const {
    // FNV-1a over the ids.
    std::size_t h = 1469598103934665603ULL;
    for (TokenId id : ids) {
      h ^= id;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

struct IdSpanEqual {
  using is_transparent = void;
  bool operator()(std::span<const TokenId> a,
                  std::span<const TokenId> b) const {
    return std::ranges::equal(a, b);
  }
};

}  // namespace detail

class NGramModel {
 public:
  struct ContextStats {
    Count total = 0;
    std::unordered_map<TokenId, Count> next;
    friend bool operator==(const ContextStats&, const ContextStats&) = default;
  };
  using Table = std::unordered_map<std::vector<TokenId>, ContextStats,
                                   detail::IdSpanHash, detail::IdSpanEqual>;

  // Empty `weights` means uniform 1/order.
  NGramModel(std::size_t order, double alpha, std::vector<double> weights,
             std::size_t vocab_size)
      : order_(order), alpha_(alpha), vocab_size_(vocab_size) {
    if (order < 1) throw Error("n-gram order must be >= 1");
    if (order > kMaxOrder) {
      throw Error("n-gram order must be <= " + std::to_string(kMaxOrder));
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
      throw Error("n-gram alpha must be a non-negative finite number");
    }
    if (vocab_size == 0) throw Error("n-gram model needs a vocabulary");
    if (weights.empty()) weights.assign(order, 1.0 / static_cast<double>(order));
    if (weights.size() != order) {
      throw Error("expected " + std::to_string(order) +
                  " interpolation weights, got " +
                  std::to_string(weights.size()));
    }
    double sum = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw Error("interpolation weights must be non-negative");
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error("interpolation weights must sum to 1");
    }
    weights_ = std::move(weights);
    log_weights_.reserve(order);
    for (double w : weights_) log_weights_.push_back(std::log(w));
    smoothing_mass_ = alpha_ * static_cast<double>(vocab_size_);
    tables_.resize(order);
  }

  std::size_t order() const { return order_; }
  double alpha() const { return alpha_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t context_length() const { return order_ - 1; }
  std::span<const double> weights() const { return weights_; }

  // Adds `n` observations of `token` after `context`; the context length
  // selects the order (k = context.size() + 1).
  void add_count(std::span<const TokenId> context, TokenId token,
                 Count n = 1) {
    const std::size_t k = context.size() + 1;
    if (k > order_) throw Error("context longer than order - 1");
    check_token(token);
    for (TokenId id : context) check_token(id);
    Table& table = tables_[k - 1];
    auto it = table.find(context);
    if (it == table.end()) {
      it = table.emplace(std::vector<TokenId>(context.begin(), context.end()),
                         ContextStats{})
               .first;
    }
    it->second.total += n;
    it->second.next[token] += n;
  }

  // c(h) for a history of length k-1.
  Count context_count(std::span<const TokenId> context) const {
    const ContextStats* stats = find(context);
    return stats ? stats->total : 0;
  }

  // c(h, w).
  Count ngram_count(std::span<const TokenId> context, TokenId token) const {
    const ContextStats* stats = find(context);
    if (!stats) return 0;
    auto it = stats->next.find(token);
    return it == stats->next.end() ? 0 : it->second;
  }

  const Table& table(std::size_t k) const {
    if (k < 1 || k > order_) throw Error("order out of range");
    return tables_[k - 1];
  }

  // ln P_k(token | last k-1 tokens of context).
  double component_logprob(std::size_t k, std::span<const TokenId> context,
                           TokenId token) const {
    if (k < 1 || k > order_) throw Error("order out of range");
    check_token(token);
    const ContextWindow window(context, order_ - 1);
    return component(k, window, token);
  }

  // ln of the interpolated probability.
  double cond_logprob(std::span<const TokenId> context, TokenId token) const {
    check_token(token);
    const ContextWindow window(context, order_ - 1);
    std::array<double, kMaxOrder> terms{};
    std::size_t n = 0;
    for (std::size_t k = 1; k <= order_; ++k) {
      if (weights_[k - 1] == 0.0) continue;
      terms[n++] = log_weights_[k - 1] + component(k, window, token);
    }
    return log_sum_exp(std::span<const double>(terms.data(), n));
  }

  // Sum of cond_logprob over every position, </s> included.
  double sentence_logprob(std::span<const TokenId> sentence) const {
    if (sentence.empty()) throw Error("empty sentence");
    double total = 0.0;
    for (std::size_t t = 0; t < sentence.size(); ++t) {
      total += cond_logprob(sentence.first(t), sentence[t]);
    }
    return total;
  }

  friend bool operator==(const NGramModel& a, const NGramModel& b) {
    return a.order_ == b.order_ && a.alpha_ == b.alpha_ &&
           a.vocab_size_ == b.vocab_size_ && a.weights_ == b.weights_ &&
           a.tables_ == b.tables_;
  }

 private:
  void check_token(TokenId token) const {
    if (token >= vocab_size_) {
      throw Error("n-gram token id out of range: " + std::to_string(token));
    }
  }

  const ContextStats* find(std::span<const TokenId> context) const {
    const std::size_t k = context.size() + 1;
    if (k > order_) return nullptr;
    auto it = tables_[k - 1].find(context);
    return it == tables_[k - 1].end() ? nullptr : &it->second;
  }

  double component(std::size_t k, const ContextWindow& window,
                   TokenId token) const {
    const ContextStats* stats = find(window.suffix(k - 1));
    const Count history = stats ? stats->total : 0;
    if (history == 0 && alpha_ == 0.0) {
      if (k == 1) return kLogZero;
      return component(k - 1, window, token);
    }
    Count joint = 0;
    if (stats) {
      auto it = stats->next.find(token);
      if (it != stats->next.end()) joint = it->second;
    }
    const double numerator = static_cast<double>(joint) + alpha_;
    if (numerator == 0.0) return kLogZero;
    return std::log(numerator) -
           std::log(static_cast<double>(history) + smoothing_mass_);
  }

  std::size_t order_;
  double alpha_;
  std::size_t vocab_size_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  double smoothing_mass_ = 0.0;  // alpha * |V|
  std::vector<Table> tables_;
};

inline NGramModel train_ngram(const TokenizedCorpus& corpus, std::size_t order,
                              double alpha,
                              std::vector<double> weights = {}) {
  NGramModel model(order, alpha, std::move(weights), corpus.vocab_size);
  if (corpus.token_count == 0) throw Error("empty corpus");
  for (const auto& sentence : corpus.sentences) {
    const std::span<const TokenId> s(sentence);
    for (std::size_t t = 0; t < s.size(); ++t) {
      const ContextWindow window(s.first(t), order - 1);
      for (std::size_t k = 1; k <= order; ++k) {
        model.add_count(window.suffix(k - 1), s[t]);
      }
    }
  }
  return model;
}

// Plain-text count dump:
//   #pplu-ngram<TAB>1
//   #order / #alpha / #vocab_size / #weights header lines
//   k<TAB>context ids (space separated)<TAB>token id<TAB>count
// Count lines are sorted, so equal models produce identical files.
inline void write_ngram_model(std::ostream& out, const NGramModel& model) {
  write_tsv_header(out, "ngram");
  out << "#order\t" << model.order() << '\n';
  out << "#alpha\t" << detail::format_double(model.alpha()) << '\n';
  out << "#vocab_size\t" << model.vocab_size() << '\n';
  out << "#weights\t";
  for (std::size_t i = 0; i < model.order(); ++i) {
    if (i) out << ' ';
    out << detail::format_double(model.weights()[i]);
  }
  out << '\n';
  for (std::size_t k = 1; k <= model.order(); ++k) {
    std::vector<std::tuple<const std::vector<TokenId>*, TokenId, Count>> rows;
    for (const auto& [context, stats] : model.table(k)) {
      for (const auto& [token, count] : stats.next) {
        rows.emplace_back(&context, token, count);
      }
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      if (*std::get<0>(a) != *std::get<0>(b)) {
        return *std::get<0>(a) < *std::get<0>(b);
      }
      return std::get<1>(a) < std::get<1>(b);
    });
    for (const auto& [context, token, count] : rows) {
      out << k << '\t';
      for (std::size_t i = 0; i < context->size(); ++i) {
        if (i) out << ' ';
        out << (*context)[i];
      }
      out << '\t' << token << '\t' << count << '\n';
    }
  }
}

inline NGramModel read_ngram_model(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw Error("model file is empty");
  check_tsv_header(lines.front(), "ngram");
  std::optional<std::size_t> order;
  std::optional<std::size_t> vocab_size;
  std::optional<double> alpha;
  std::vector<double> weights;
  std::size_t i = 1;
  for (; i < lines.size() && lines[i].starts_with('#'); ++i) {
    const auto fields = split_tabs(lines[i]);
    if (fields.size() != 2) throw Error("malformed model header line");
    if (fields[0] == "#order") {
      order = parse_number<std::size_t>(fields[1], "order");
    } else if (fields[0] == "#alpha") {
      alpha = parse_number<double>(fields[1], "alpha");
    } else if (fields[0] == "#vocab_size") {
      vocab_size = parse_number<std::size_t>(fields[1], "vocab_size");
    } else if (fields[0] == "#weights") {
      for (auto w : split_whitespace(fields[1])) {
        weights.push_back(parse_number<double>(w, "weights"));
      }
    } else {
      throw Error("unknown model header field: " + std::string(fields[0]));
    }
  }
  if (!order) throw Error("model file missing field: order");
  if (!alpha) throw Error("model file missing field: alpha");
  if (!vocab_size) throw Error("model file missing field: vocab_size");
  NGramModel model(*order, *alpha, std::move(weights), *vocab_size);
  std::vector<TokenId> context;
  for (; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_tabs(lines[i]);
    if (fields.size() != 4) {
      throw Error("model line " + std::to_string(i + 1) +
                  ": expected 4 fields");
    }
    const auto k = parse_number<std::size_t>(fields[0], "order");
    context.clear();
    for (auto id : split_whitespace(fields[1])) {
      context.push_back(parse_number<TokenId>(id, "context token"));
    }
    if (context.size() + 1 != k) {
      throw Error("model line " + std::to_string(i + 1) +
                  ": context length does not match order");
    }
    model.add_count(context, parse_number<TokenId>(fields[2], "token"),
                    parse_number<Count>(fields[3], "count"));
  }
  return model;
}

}  // namespace pplu

#endif  // PPLU_NGRAM_HPP_

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

// Word splitting: one vocabulary entry v_ab becomes two entries v_a, v_b.
//
// v_a keeps the id of v_ab and v_b is appended as id |V|. In the analytic
// views every probability of v_ab is divided between the two new entries in
// the fixed ratio beta : (1 - beta), both for the language model and for the
// unigram normalizer:
//
//   P'(v_a | h') = beta       * P(v_ab | h)
//   P'(v_b | h') = (1 - beta) * P(v_ab | h)
//   P'(w   | h') = P(w | h)                    otherwise
//
// with h the history h' where v_b is mapped back to v_ab. Under these views
// ln PPL of a sentence shifts by -(sum_i ln r_i) / N while ln PPLu does not
// move at all.

#ifndef PPLU_SPLIT_HPP_
#define PPLU_SPLIT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pplu/common.hpp"
#include "pplu/corpus.hpp"
#include "pplu/metrics.hpp"
#include "pplu/model.hpp"
#include "pplu/ngram.hpp"
#include "pplu/unigram.hpp"
#include "pplu/vocabulary.hpp"

namespace pplu {

struct SplitSpec {
  TokenId target = 0;
  double beta = 0.5;
  std::string new_token_a;  // empty: "<target>_a"
  std::string new_token_b;  // empty: "<target>_b"
  std::uint64_t seed = 0;

  void validate(std::size_t vocab_size) const {
    if (!(beta > 0.0 && beta < 1.0)) {
      throw Error("split beta must lie strictly between 0 and 1");
    }
    if (is_reserved(target)) throw Error("cannot split a reserved token");
    if (target >= vocab_size) throw Error("split target id out of range");
  }
};

// Uniform doubles in [0, 1) from a 64-bit Mersenne twister, so that split
// assignments are identical on every platform for a given seed.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

enum class SplitMode {
  kAnalytic,  // exact probability views, no retraining
  kRandom,    // each occurrence -> v_a with probability beta, then retrain
  kSense,     // v_a iff the previous token is in a configured set, retrain
  kIdentity,  // corpus left unsplit, then retrain (control)
};

inline const char* to_string(SplitMode mode) {
  switch (mode) {
    case SplitMode::kAnalytic: return "analytic";
    case SplitMode::kRandom: return "random";
    case SplitMode::kSense: return "sense";
    case SplitMode::kIdentity: return "identity";
  }
  return "unknown";
}

inline TokenId split_b_id(std::size_t base_vocab_size) {
  return static_cast<TokenId>(base_vocab_size);
}

inline std::size_t count_token(const TokenizedCorpus& corpus, TokenId token) {
  std::size_t n = 0;
  for (const auto& s : corpus.sentences) n += std::ranges::count(s, token);
  return n;
}

// Replaces each occurrence of spec.target by v_a (probability beta) or v_b.
// Occurrences are visited in corpus order with a single RNG stream.
inline TokenizedCorpus random_split_ids(const TokenizedCorpus& corpus,
                                        const SplitSpec& spec,
                                        SplitRng& rng) {
  TokenizedCorpus out = corpus;
  out.vocab_size = corpus.vocab_size + 1;
  const TokenId b = split_b_id(corpus.vocab_size);
  for (auto& s : out.sentences) {
    for (auto& id : s) {
      if (id == spec.target && !(rng.uniform() < spec.beta)) id = b;
    }
  }
  return out;
}

inline TokenizedCorpus random_split_ids(const TokenizedCorpus& corpus,
                                        const SplitSpec& spec) {
  SplitRng rng(spec.seed);
  return random_split_ids(corpus, spec, rng);
}

// Sense-conditioned assignment: v_a when the preceding token (</s> at the
// start of a sentence) is one of `a_contexts`, v_b otherwise.
inline TokenizedCorpus sense_split_ids(const TokenizedCorpus& corpus,
                                       const SplitSpec& spec,
                                       const std::set<TokenId>& a_contexts) {
  TokenizedCorpus out = corpus;
  out.vocab_size = corpus.vocab_size + 1;
  const TokenId b = split_b_id(corpus.vocab_size);
  for (std::size_t i = 0; i < out.sentences.size(); ++i) {
    const Sentence& original = corpus.sentences[i];
    for (std::size_t t = 0; t < original.size(); ++t) {
      if (original[t] != spec.target) continue;
      const TokenId previous = t == 0 ? kEosId : original[t - 1];
      if (!a_contexts.contains(previous)) out.sentences[i][t] = b;
    }
  }
  return out;
}

inline std::string split_name(const Vocabulary& vocab, const SplitSpec& spec,
                              bool first) {
  const std::string& given = first ? spec.new_token_a : spec.new_token_b;
  if (!given.empty()) return given;
  return vocab.token(spec.target) + (first ? "_a" : "_b");
}

// The target slot is renamed to v_a and v_b is appended. Frequencies follow
// the split corpus counts.
inline Vocabulary split_vocabulary(const Vocabulary& vocab,
                                   const SplitSpec& spec,
                                   const TokenizedCorpus& split) {
  Vocabulary out = vocab;
  const TokenId b = split_b_id(vocab.size());
  const Count a_count = count_token(split, spec.target);
  const Count b_count = count_token(split, b);
  out.rename(spec.target, split_name(vocab, spec, true));
  out.add(split_name(vocab, spec, false), b_count);
  out.set_frequency(spec.target, a_count);
  return out;
}

inline std::pair<TokenizedCorpus, Vocabulary> split_corpus(
    const TokenizedCorpus& corpus, const Vocabulary& vocab,
    const SplitSpec& spec) {
  if (corpus.vocab_size != vocab.size()) {
    throw Error("corpus and vocabulary sizes differ");
  }
  spec.validate(vocab.size());
  if (count_token(corpus, spec.target) == 0) {
    throw Error("split target '" + vocab.token(spec.target) +
                "' does not occur in the corpus");
  }
  TokenizedCorpus split = random_split_ids(corpus, spec);
  Vocabulary split_vocab = split_vocabulary(vocab, spec, split);
  return {std::move(split), std::move(split_vocab)};
}

// Language-model view over the |V|+1 vocabulary.
template <ConditionalModel Base>
class SplitModelView {
 public:
  SplitModelView(const Base& base, TokenId target, double beta)
      : base_(&base),
        target_(target),
        b_(split_b_id(base.vocab_size())),
        log_a_(std::log(beta)),
        log_b_(std::log1p(-beta)) {
    SplitSpec spec;
    spec.target = target;
    spec.beta = beta;
    spec.validate(base.vocab_size());
  }

  std::size_t vocab_size() const { return base_->vocab_size() + 1; }
  std::size_t context_length() const { return base_->context_length(); }

  double cond_logprob(std::span<const TokenId> context, TokenId token) const {
    if (token >= vocab_size()) throw Error("split view token out of range");
    ContextWindow window(context, base_->context_length());
    for (auto& id : window.mutable_tokens()) {
      if (id == b_) id = target_;
    }
    if (token == target_) {
      return log_a_ + base_->cond_logprob(window.tokens(), target_);
    }
    if (token == b_) {
      return log_b_ + base_->cond_logprob(window.tokens(), target_);
    }
    return base_->cond_logprob(window.tokens(), token);
  }

 private:
  const Base* base_;
  TokenId target_;
  TokenId b_;
  double log_a_;
  double log_b_;
};

// Unigram view over the |V|+1 vocabulary.
template <UnigramSource Base>
class SplitUnigramView {
 public:
  SplitUnigramView(const Base& base, TokenId target, double beta)
      : base_(&base),
        target_(target),
        b_(split_b_id(base.vocab_size())),
        log_a_(std::log(beta)),
        log_b_(std::log1p(-beta)) {
    SplitSpec spec;
    spec.target = target;
    spec.beta = beta;
    spec.validate(base.vocab_size());
  }

  std::size_t vocab_size() const { return base_->vocab_size() + 1; }
  std::size_t context_length() const { return 0; }

  double logprob(TokenId token) const {
    if (token >= vocab_size()) throw Error("split view token out of range");
    if (token == target_) return log_a_ + base_->logprob(target_);
    if (token == b_) return log_b_ + base_->logprob(target_);
    return base_->logprob(token);
  }

  double cond_logprob(std::span<const TokenId>, TokenId token) const {
    return logprob(token);
  }

 private:
  const Base* base_;
  TokenId target_;
  TokenId b_;
  double log_a_;
  double log_b_;
};

template <ConditionalModel Lm, UnigramSource Uni>
std::pair<SplitModelView<Lm>, SplitUnigramView<Uni>> make_analytic_split_model(
    const Lm& base_lm, const Uni& base_uni, const SplitSpec& spec) {
  if (base_lm.vocab_size() != base_uni.vocab_size()) {
    throw Error("language model and unigram vocabularies differ");
  }
  spec.validate(base_lm.vocab_size());
  return {SplitModelView<Lm>(base_lm, spec.target, spec.beta),
          SplitUnigramView<Uni>(base_uni, spec.target, spec.beta)};
}

struct SplitSentence {
  std::size_t sentence_id = 0;
  std::size_t length = 0;
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  double ppl_base = 0.0;
  double ppl_split = 0.0;
  double pplu_base = 0.0;
  double pplu_split = 0.0;
  double log_ppl_shift = 0.0;   // ln PPL^S - ln PPL^B
  double log_pplu_shift = 0.0;  // ln PPLu^S - ln PPLu^B
  double expected_log_ppl_shift = 0.0;  // analytic mode only
};

struct SplitReport {
  SplitMode mode = SplitMode::kAnalytic;
  double beta = 0.5;
  double tolerance = 1e-10;
  std::size_t sentences_total = 0;
  std::vector<SplitSentence> sentences;  // target-containing only
  double corpus_ppl_base = 0.0;
  double corpus_ppl_split = 0.0;
  double corpus_pplu_base = 0.0;
  double corpus_pplu_split = 0.0;
  double max_pplu_deviation = 0.0;    // max |ln PPLu^S - ln PPLu^B|
  double max_ppl_shift_error = 0.0;   // analytic mode only
  std::size_t ppl_not_increased = 0;  // target sentences with PPL^S <= PPL^B
  std::size_t unchanged_violations = 0;  // other sentences whose scores moved
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }

  double corpus_log_ppl_ratio() const {
    return std::log(corpus_ppl_split) - std::log(corpus_ppl_base);
  }
  double corpus_log_pplu_ratio() const {
    return std::log(corpus_pplu_split) - std::log(corpus_pplu_base);
  }
};

namespace detail {

inline void fill_corpus_fields(SplitReport& report, const CorpusScore& base,
                               const CorpusScore& split) {
  report.sentences_total = base.sentences.size();
  report.corpus_ppl_base = base.ppl;
  report.corpus_ppl_split = split.ppl;
  report.corpus_pplu_base = base.pplu;
  report.corpus_pplu_split = split.pplu;
}

inline SplitSentence compare_sentence(const SentenceScore& base,
                                      const SentenceScore& split,
                                      std::span<const TokenId> split_tokens,
                                      TokenId a, TokenId b) {
  SplitSentence row;
  row.sentence_id = base.sentence_id;
  row.length = base.length;
  row.count_a = static_cast<std::size_t>(std::ranges::count(split_tokens, a));
  row.count_b = static_cast<std::size_t>(std::ranges::count(split_tokens, b));
  row.ppl_base = base.ppl;
  row.ppl_split = split.ppl;
  row.pplu_base = base.pplu;
  row.pplu_split = split.pplu;
  row.log_ppl_shift = split.log_ppl() - base.log_ppl();
  row.log_pplu_shift = split.log_pplu() - base.log_pplu();
  return row;
}

}  // namespace detail

// Scores every sentence under the base models and under the analytic split
// views (occurrences assigned with the spec's seeded RNG) and checks:
//  - |ln PPLu^S - ln PPLu^B| <= tolerance for target sentences,
//  - PPL^S > PPL^B with ln-ratio equal to -(sum ln r_i) / N within tolerance,
//  - bit-identical scores for every other sentence.
// Violations are collected in the report's failure list.
template <ConditionalModel Lm, UnigramSource Uni>
SplitReport verify_invariance(const Lm& base_lm, const Uni& base_uni,
                              const TokenizedCorpus& corpus,
                              const SplitSpec& spec,
                              double tolerance = 1e-10) {
  if (corpus.sentences.empty()) throw Error("empty corpus");
  auto [lm_view, uni_view] = make_analytic_split_model(base_lm, base_uni, spec);
  if (count_token(corpus, spec.target) == 0) {
    throw Error("split target id " + std::to_string(spec.target) +
                " does not occur in the corpus");
  }
  const TokenizedCorpus split = random_split_ids(corpus, spec);
  const TokenId b = split_b_id(corpus.vocab_size);
  const double log_a = std::log(spec.beta);
  const double log_b = std::log1p(-spec.beta);

  SplitReport report;
  report.mode = SplitMode::kAnalytic;
  report.beta = spec.beta;
  report.tolerance = tolerance;

  std::vector<SentenceScore> base_scores;
  std::vector<SentenceScore> split_scores;
  base_scores.reserve(corpus.sentences.size());
  split_scores.reserve(corpus.sentences.size());
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const auto& original = corpus.sentences[i];
    const auto& changed = split.sentences[i];
    base_scores.push_back(score_sentence(base_lm, base_uni, original, i));
    split_scores.push_back(score_sentence(lm_view, uni_view, changed, i));
    const SentenceScore& s_base = base_scores.back();
    const SentenceScore& s_split = split_scores.back();

    if (std::ranges::count(original, spec.target) == 0) {
      if (s_base.lm_logprob != s_split.lm_logprob ||
          s_base.uni_logprob != s_split.uni_logprob) {
        ++report.unchanged_violations;
      }
      continue;
    }
    SplitSentence row =
        detail::compare_sentence(s_base, s_split, changed, spec.target, b);
    row.expected_log_ppl_shift =
        -(static_cast<double>(row.count_a) * log_a +
          static_cast<double>(row.count_b) * log_b) /
        static_cast<double>(row.length);
    report.max_pplu_deviation =
        std::max(report.max_pplu_deviation, std::abs(row.log_pplu_shift));
    report.max_ppl_shift_error =
        std::max(report.max_ppl_shift_error,
                 std::abs(row.log_ppl_shift - row.expected_log_ppl_shift));
    if (!(row.ppl_split > row.ppl_base)) ++report.ppl_not_increased;
    report.sentences.push_back(row);
  }
  detail::fill_corpus_fields(report, pool_scores(std::move(base_scores)),
                             pool_scores(std::move(split_scores)));

  if (!(report.max_pplu_deviation <= tolerance)) {
    report.failures.push_back("PPLu deviation " +
                              detail::format_double(report.max_pplu_deviation) +
                              " exceeds tolerance");
  }
  if (!(report.max_ppl_shift_error <= tolerance)) {
    report.failures.push_back(
        "ln PPL shift deviates from closed form by " +
        detail::format_double(report.max_ppl_shift_error));
  }
  if (report.ppl_not_increased > 0) {
    report.failures.push_back(std::to_string(report.ppl_not_increased) +
                              " target sentences without a PPL increase");
  }
  if (report.unchanged_violations > 0) {
    report.failures.push_back(std::to_string(report.unchanged_violations) +
                              " sentences without the target changed score");
  }
  return report;
}

struct EmpiricalSplitConfig {
  SplitMode mode = SplitMode::kRandom;
  std::size_t order = 2;
  double alpha = 1.0;
  double unigram_alpha = 1.0;
  std::vector<double> weights;     // empty: uniform
  std::set<TokenId> a_contexts;    // kSense only
};

// Retrains an n-gram model and unigram on the split training corpus and
// compares test-set metrics with the unsplit pair. No invariance is asserted:
// a random split only approaches it as data grows, while a sense-conditioned
// split changes what the model can learn.
inline SplitReport empirical_split_experiment(const TokenizedCorpus& train,
                                              const TokenizedCorpus& test,
                                              const Vocabulary& vocab,
                                              const SplitSpec& spec,
                                              const EmpiricalSplitConfig& config) {
  if (config.mode == SplitMode::kAnalytic) {
    throw Error("analytic mode is handled by verify_invariance");
  }
  if (train.vocab_size != vocab.size() || test.vocab_size != vocab.size()) {
    throw Error("corpus and vocabulary sizes differ");
  }
  if (test.sentences.empty()) throw Error("empty corpus");
  spec.validate(vocab.size());
  if (count_token(train, spec.target) == 0) {
    throw Error("split target '" + vocab.token(spec.target) +
                "' does not occur in the training corpus");
  }

  TokenizedCorpus split_train;
  TokenizedCorpus split_test;
  switch (config.mode) {
    case SplitMode::kRandom: {
      SplitRng rng(spec.seed);
      split_train = random_split_ids(train, spec, rng);
      split_test = random_split_ids(test, spec, rng);
      break;
    }
    case SplitMode::kSense:
      split_train = sense_split_ids(train, spec, config.a_contexts);
      split_test = sense_split_ids(test, spec, config.a_contexts);
      break;
    default:
      split_train = train;
      split_test = test;
      break;
  }

  const NGramModel base_lm =
      train_ngram(train, config.order, config.alpha, config.weights);
  const UnigramModel base_uni = count_unigrams(train, config.unigram_alpha);
  const NGramModel split_lm =
      train_ngram(split_train, config.order, config.alpha, config.weights);
  const UnigramModel split_uni =
      count_unigrams(split_train, config.unigram_alpha);

  CorpusScore base = score_corpus(base_lm, base_uni, test);
  CorpusScore split = score_corpus(split_lm, split_uni, split_test);

  SplitReport report;
  report.mode = config.mode;
  report.beta = spec.beta;
  const TokenId b = split_b_id(vocab.size());
  for (std::size_t i = 0; i < test.sentences.size(); ++i) {
    if (std::ranges::count(test.sentences[i], spec.target) == 0) continue;
    SplitSentence row = detail::compare_sentence(
        base.sentences[i], split.sentences[i], split_test.sentences[i],
        spec.target, b);
    report.max_pplu_deviation =
        std::max(report.max_pplu_deviation, std::abs(row.log_pplu_shift));
    if (!(row.ppl_split > row.ppl_base)) ++report.ppl_not_increased;
    report.sentences.push_back(row);
  }
  detail::fill_corpus_fields(report, base, split);
  return report;
}

inline nlohmann::json to_json(const SplitReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : report.sentences) {
    rows.push_back({{"sentence_id", s.sentence_id},
                    {"length", s.length},
                    {"count_a", s.count_a},
                    {"count_b", s.count_b},
                    {"ppl_base", s.ppl_base},
                    {"ppl_split", s.ppl_split},
                    {"pplu_base", s.pplu_base},
                    {"pplu_split", s.pplu_split},
                    {"log_ppl_shift", s.log_ppl_shift},
                    {"log_pplu_shift", s.log_pplu_shift},
                    {"expected_log_ppl_shift", s.expected_log_ppl_shift}});
  }
  return {{"format_version", kFormatVersion},
          {"base", kMetricBase},
          {"mode", to_string(report.mode)},
          {"beta", report.beta},
          {"tolerance", report.tolerance},
          {"sentences_total", report.sentences_total},
          {"sentences_with_target", report.sentences.size()},
          {"corpus",
           {{"ppl_base", report.corpus_ppl_base},
            {"ppl_split", report.corpus_ppl_split},
            {"pplu_base", report.corpus_pplu_base},
            {"pplu_split", report.corpus_pplu_split}}},
          {"max_pplu_deviation", report.max_pplu_deviation},
          {"max_ppl_shift_error", report.max_ppl_shift_error},
          {"ppl_not_increased", report.ppl_not_increased},
          {"unchanged_violations", report.unchanged_violations},
          {"passed", report.passed()},
          {"failures", report.failures},
          {"sentences", rows}};
}

}  // namespace pplu

#endif  // PPLU_SPLIT_HPP_

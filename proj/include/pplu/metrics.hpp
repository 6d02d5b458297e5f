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

// Perplexity (PPL) and unigram-normalized perplexity (PPLu).
//
//   PPL  = exp(-(1/T) sum_t ln P(w_t | w_<t))
//   PPLu = exp(-(1/T) sum_t [ln P(w_t | w_<t) - ln P_uni(w_t)])
//
// ln PPLu is the negated average pointwise mutual information between each
// token and its history, so a model that adds nothing over word frequency
// scores exactly 1.

#ifndef PPLU_METRICS_HPP_
#define PPLU_METRICS_HPP_

#include <cmath>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pplu/common.hpp"
#include "pplu/corpus.hpp"
#include "pplu/model.hpp"

namespace pplu {

struct SentenceScore {
  std::size_t sentence_id = 0;
  std::size_t length = 0;  // T, </s> included
  double lm_logprob = 0.0;
  double uni_logprob = 0.0;
  double ppl = 0.0;
  double pplu = 0.0;

  double log_ppl() const { return -lm_logprob / static_cast<double>(length); }
  double log_pplu() const {
    return -(lm_logprob - uni_logprob) / static_cast<double>(length);
  }
  double mean_unigram_logprob() const {
    return uni_logprob / static_cast<double>(length);
  }
};

inline SentenceScore finalize_score(std::size_t sentence_id, std::size_t length,
                                    double lm_logprob, double uni_logprob) {
  SentenceScore score{sentence_id, length, lm_logprob, uni_logprob, 0.0, 0.0};
  score.ppl = std::exp(score.log_ppl());
  score.pplu = std::exp(score.log_pplu());
  return score;
}

// Scores `predicted` token by token. The history for position t is
// history[0, t); usually history and predicted are the same sentence, but
// views that change the predicted alphabet (merged vocabularies) condition on
// the original tokens.
template <ConditionalModel Lm, UnigramSource Uni>
SentenceScore score_tokens(const Lm& lm, const Uni& uni,
                           std::span<const TokenId> history,
                           std::span<const TokenId> predicted,
                           std::size_t sentence_id) {
  if (predicted.empty()) throw Error("empty sentence");
  if (history.size() != predicted.size()) {
    throw Error("history and predicted sentence lengths differ");
  }
  double lm_logprob = 0.0;
  double uni_logprob = 0.0;
  for (std::size_t t = 0; t < predicted.size(); ++t) {
    const TokenId w = predicted[t];
    if (w >= lm.vocab_size() || w >= uni.vocab_size()) {
      throw Error("sentence " + std::to_string(sentence_id) +
                  ": token id out of model vocabulary");
    }
    lm_logprob += lm.cond_logprob(history.first(t), w);
    uni_logprob += uni.logprob(w);
  }
  return finalize_score(sentence_id, predicted.size(), lm_logprob,
                        uni_logprob);
}

template <ConditionalModel Lm, UnigramSource Uni>
SentenceScore score_sentence(const Lm& lm, const Uni& uni,
                             std::span<const TokenId> sentence,
                             std::size_t sentence_id) {
  return score_tokens(lm, uni, sentence, sentence, sentence_id);
}

struct CorpusScore {
  double lm_logprob = 0.0;
  double uni_logprob = 0.0;
  std::size_t token_count = 0;
  double ppl = 0.0;   // token-pooled
  double pplu = 0.0;  // token-pooled
  std::vector<SentenceScore> sentences;
};

// Pools all tokens into one geometric mean (not an average of per-sentence
// perplexities).
inline CorpusScore pool_scores(std::vector<SentenceScore> scores) {
  if (scores.empty()) throw Error("empty corpus");
  CorpusScore corpus;
  for (const auto& s : scores) {
    corpus.lm_logprob += s.lm_logprob;
    corpus.uni_logprob += s.uni_logprob;
    corpus.token_count += s.length;
  }
  const auto n = static_cast<double>(corpus.token_count);
  corpus.ppl = std::exp(-corpus.lm_logprob / n);
  corpus.pplu = std::exp(-(corpus.lm_logprob - corpus.uni_logprob) / n);
  corpus.sentences = std::move(scores);
  return corpus;
}

template <ConditionalModel Lm, UnigramSource Uni>
CorpusScore score_corpus(const Lm& lm, const Uni& uni,
                         const TokenizedCorpus& corpus) {
  if (corpus.sentences.empty()) throw Error("empty corpus");
  std::vector<SentenceScore> scores;
  scores.reserve(corpus.sentences.size());
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    scores.push_back(score_sentence(lm, uni, corpus.sentences[i], i));
  }
  return pool_scores(std::move(scores));
}

// Plug-in estimate of the average PMI between a token and its history.
struct PmiSummary {
  double mean_log_pplu = 0.0;
  double mean_pmi = 0.0;
  std::size_t token_count = 0;
};

inline PmiSummary pmi_summary(std::span<const SentenceScore> scores) {
  if (scores.empty()) throw Error("no sentence scores");
  double log_ratio = 0.0;
  std::size_t tokens = 0;
  for (const auto& s : scores) {
    log_ratio += s.lm_logprob - s.uni_logprob;
    tokens += s.length;
  }
  PmiSummary summary;
  summary.token_count = tokens;
  summary.mean_log_pplu = -log_ratio / static_cast<double>(tokens);
  summary.mean_pmi = -summary.mean_log_pplu;
  return summary;
}

// |full - reduced| / full * 100.
inline double relative_difference(double full_value, double reduced_value) {
  if (!(full_value > 0.0)) {
    throw Error("relative difference needs a positive full-vocabulary value");
  }
  return std::abs(full_value - reduced_value) / full_value * 100.0;
}

// Scores file: one JSON object per sentence, then a summary record carrying
// the format version, the metric base and the run configuration.
inline nlohmann::json to_json(const SentenceScore& s) {
  return {{"type", "sentence"},         {"sentence_id", s.sentence_id},
          {"length", s.length},         {"lm_logprob", s.lm_logprob},
          {"uni_logprob", s.uni_logprob}, {"ppl", s.ppl},
          {"pplu", s.pplu}};
}

inline nlohmann::json summary_json(const CorpusScore& corpus,
                                   const nlohmann::json& config) {
  const PmiSummary pmi = pmi_summary(corpus.sentences);
  return {{"type", "summary"},
          {"format_version", kFormatVersion},
          {"base", kMetricBase},
          {"corpus_ppl", corpus.ppl},
          {"corpus_pplu", corpus.pplu},
          {"token_count", corpus.token_count},
          {"sentence_count", corpus.sentences.size()},
          {"mean_log_pplu", pmi.mean_log_pplu},
          {"mean_pmi", pmi.mean_pmi},
          {"config", config}};
}

inline void write_scores_jsonl(std::ostream& out, const CorpusScore& corpus,
                               const nlohmann::json& config) {
  for (const auto& s : corpus.sentences) out << to_json(s).dump() << '\n';
  out << summary_json(corpus, config).dump() << '\n';
}

namespace detail {

template <typename T>
T require_field(const nlohmann::json& record, const char* field,
                std::size_t line) {
  if (!record.contains(field)) {
    throw Error("scores line " + std::to_string(line) + ": missing field '" +
                field + "'");
  }
  try {
    return record.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error("scores line " + std::to_string(line) + ": bad field '" +
                field + "'");
  }
}

}  // namespace detail

// Reads a scores file back. The trailing summary record must carry a known
// format version and the natural-log base.
inline std::vector<SentenceScore> read_scores_jsonl(std::istream& in) {
  std::vector<SentenceScore> scores;
  bool have_summary = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (have_summary) throw Error("scores file: records after summary");
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw Error("scores line " + std::to_string(line_no) + ": invalid JSON");
    }
    const auto type = detail::require_field<std::string>(record, "type", line_no);
    if (type == "summary") {
      const int version =
          detail::require_field<int>(record, "format_version", line_no);
      if (version != kFormatVersion) {
        throw Error("unsupported scores format version: " +
                    std::to_string(version));
      }
      if (detail::require_field<std::string>(record, "base", line_no) !=
          kMetricBase) {
        throw Error("scores file uses an unsupported metric base");
      }
      have_summary = true;
    } else if (type == "sentence") {
      scores.push_back(finalize_score(
          detail::require_field<std::size_t>(record, "sentence_id", line_no),
          detail::require_field<std::size_t>(record, "length", line_no),
          detail::require_field<double>(record, "lm_logprob", line_no),
          detail::require_field<double>(record, "uni_logprob", line_no)));
      if (scores.back().length == 0) {
        throw Error("scores line " + std::to_string(line_no) +
                    ": field 'length' must be positive");
      }
    } else {
      throw Error("scores line " + std::to_string(line_no) +
                  ": unknown record type '" + type + "'");
    }
  }
  if (!have_summary) throw Error("scores file has no summary record");
  return scores;
}

}  // namespace pplu

#endif  // PPLU_METRICS_HPP_

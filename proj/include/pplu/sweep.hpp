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

// Vocabulary sweep: one model trained on the full vocabulary, evaluated under
// progressively smaller vocabularies. Discarded tokens are not deleted; their
// probability mass is summed onto <unk>, both in the language model and in
// the unigram normalizer. This is the merge that undoes a word split.

#ifndef PPLU_SWEEP_HPP_
#define PPLU_SWEEP_HPP_

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pplu/common.hpp"
#include "pplu/corpus.hpp"
#include "pplu/log_math.hpp"
#include "pplu/metrics.hpp"
#include "pplu/model.hpp"
#include "pplu/ngram.hpp"
#include "pplu/unigram.hpp"
#include "pplu/vocabulary.hpp"

namespace pplu {

// Groups old ids into classes: members[new_id] lists the old ids mapped to it.
class TokenMerge {
 public:
  TokenMerge(std::span<const TokenId> remap, std::size_t new_vocab_size)
      : members_(new_vocab_size), old_vocab_size_(remap.size()) {
    for (std::size_t old_id = 0; old_id < remap.size(); ++old_id) {
      if (remap[old_id] >= new_vocab_size) {
        throw Error("remap sends id " + std::to_string(old_id) +
                    " outside the reduced vocabulary");
      }
      members_[remap[old_id]].push_back(static_cast<TokenId>(old_id));
    }
    for (std::size_t id = 0; id < members_.size(); ++id) {
      if (members_[id].empty()) {
        throw Error("reduced id " + std::to_string(id) + " has no members");
      }
    }
  }

  std::size_t new_vocab_size() const { return members_.size(); }
  std::size_t old_vocab_size() const { return old_vocab_size_; }
  std::span<const TokenId> members(TokenId new_id) const {
    if (new_id >= members_.size()) throw Error("merged id out of range");
    return members_[new_id];
  }

  // ln sum_{m in class} exp(logprob(m)).
  template <typename LogProb>
  double class_logprob(TokenId new_id, LogProb&& logprob) const {
    const auto ids = members(new_id);
    if (ids.size() == 1) return logprob(ids.front());
    std::vector<double> terms;
    terms.reserve(ids.size());
    for (TokenId m : ids) terms.push_back(logprob(m));
    return log_sum_exp(terms);
  }

 private:
  std::vector<std::vector<TokenId>> members_;
  std::size_t old_vocab_size_;
};

// Conditional model over the reduced vocabulary. Histories stay in the
// original (full-vocabulary) ids; predicted tokens are reduced ids.
template <ConditionalModel Base>
class MergedModelView {
 public:
  MergedModelView(const Base& base, const TokenMerge& merge)
      : base_(&base), merge_(&merge) {
    if (merge.old_vocab_size() != base.vocab_size()) {
      throw Error("merge table does not match the model vocabulary");
    }
  }

  std::size_t vocab_size() const { return merge_->new_vocab_size(); }
  std::size_t context_length() const { return base_->context_length(); }

  double cond_logprob(std::span<const TokenId> context, TokenId token) const {
    return merge_->class_logprob(
        token, [&](TokenId m) { return base_->cond_logprob(context, m); });
  }

 private:
  const Base* base_;
  const TokenMerge* merge_;
};

template <UnigramSource Base>
class MergedUnigramView {
 public:
  MergedUnigramView(const Base& base, const TokenMerge& merge)
      : base_(&base), merge_(&merge) {
    if (merge.old_vocab_size() != base.vocab_size()) {
      throw Error("merge table does not match the unigram vocabulary");
    }
  }

  std::size_t vocab_size() const { return merge_->new_vocab_size(); }
  std::size_t context_length() const { return 0; }

  double logprob(TokenId token) const {
    return merge_->class_logprob(
        token, [&](TokenId m) { return base_->logprob(m); });
  }

  double cond_logprob(std::span<const TokenId>, TokenId token) const {
    return logprob(token);
  }

 private:
  const Base* base_;
  const TokenMerge* merge_;
};

// Scores `corpus` (full-vocabulary ids) after mapping every predicted token
// through `remap`, using merged views of the full models.
template <ConditionalModel Lm, UnigramSource Uni>
CorpusScore score_merged(const Lm& lm, const Uni& uni,
                         const TokenizedCorpus& corpus,
                         std::span<const TokenId> remap,
                         std::size_t new_vocab_size) {
  if (corpus.sentences.empty()) throw Error("empty corpus");
  const TokenMerge merge(remap, new_vocab_size);
  const MergedModelView<Lm> lm_view(lm, merge);
  const MergedUnigramView<Uni> uni_view(uni, merge);
  const TokenizedCorpus reduced = remap_corpus(corpus, remap, new_vocab_size);
  std::vector<SentenceScore> scores;
  scores.reserve(corpus.sentences.size());
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    scores.push_back(score_tokens(lm_view, uni_view, corpus.sentences[i],
                                  reduced.sentences[i], i));
  }
  return pool_scores(std::move(scores));
}

struct SweepPoint {
  std::size_t kept_vocab = 0;
  double ppl = 0.0;
  double pplu = 0.0;
  double rel_diff_ppl = 0.0;   // percent
  double rel_diff_pplu = 0.0;  // percent
};

struct SweepConfig {
  std::size_t order = 3;
  double alpha = 1.0;
  double unigram_alpha = 1.0;
  std::vector<double> weights;  // empty: uniform
};

inline void validate_keep_sizes(std::span<const std::size_t> keep_sizes,
                                std::size_t vocab_size) {
  if (keep_sizes.empty()) throw Error("keep sizes must not be empty");
  for (std::size_t i = 0; i < keep_sizes.size(); ++i) {
    if (keep_sizes[i] < kReservedCount || keep_sizes[i] > vocab_size) {
      throw Error("keep size " + std::to_string(keep_sizes[i]) +
                  " outside [" + std::to_string(kReservedCount) + ", " +
                  std::to_string(vocab_size) + "]");
    }
    if (i > 0 && keep_sizes[i] >= keep_sizes[i - 1]) {
      throw Error("keep sizes must be strictly decreasing");
    }
  }
}

// Evaluates already-trained full-vocabulary models under each reduction.
template <ConditionalModel Lm, UnigramSource Uni>
std::vector<SweepPoint> sweep_models(const Lm& lm, const Uni& uni,
                                     const TokenizedCorpus& test,
                                     const Vocabulary& vocab,
                                     std::span<const std::size_t> keep_sizes) {
  if (test.vocab_size != vocab.size() || lm.vocab_size() != vocab.size()) {
    throw Error("test corpus, model and vocabulary sizes differ");
  }
  validate_keep_sizes(keep_sizes, vocab.size());
  const CorpusScore full = score_corpus(lm, uni, test);
  std::vector<SweepPoint> points;
  points.reserve(keep_sizes.size());
  for (std::size_t keep : keep_sizes) {
    SweepPoint point;
    point.kept_vocab = keep;
    if (keep == vocab.size()) {
      point.ppl = full.ppl;
      point.pplu = full.pplu;
    } else {
      const VocabularyReduction reduction = reduce_vocabulary(vocab, keep);
      const CorpusScore reduced =
          score_merged(lm, uni, test, reduction.remap, reduction.vocab.size());
      point.ppl = reduced.ppl;
      point.pplu = reduced.pplu;
    }
    point.rel_diff_ppl = relative_difference(full.ppl, point.ppl);
    point.rel_diff_pplu = relative_difference(full.pplu, point.pplu);
    points.push_back(point);
  }
  return points;
}

// Trains the n-gram model and unigram once on the full-vocabulary training
// corpus, then sweeps the test corpus.
inline std::vector<SweepPoint> run_vocab_sweep(
    const TokenizedCorpus& train, const TokenizedCorpus& test,
    const Vocabulary& vocab, std::span<const std::size_t> keep_sizes,
    const SweepConfig& config) {
  if (train.vocab_size != vocab.size()) {
    throw Error("training corpus and vocabulary sizes differ");
  }
  validate_keep_sizes(keep_sizes, vocab.size());
  const NGramModel lm =
      train_ngram(train, config.order, config.alpha, config.weights);
  const UnigramModel uni = count_unigrams(train, config.unigram_alpha);
  return sweep_models(lm, uni, test, vocab, keep_sizes);
}

inline void write_sweep_csv(std::ostream& out,
                            std::span<const SweepPoint> points) {
  out << "kept_vocab,ppl,pplu,rel_diff_ppl,rel_diff_pplu\n";
  for (const auto& p : points) {
    out << p.kept_vocab << ',' << detail::format_double(p.ppl) << ','
        << detail::format_double(p.pplu) << ','
        << detail::format_double(p.rel_diff_ppl) << ','
        << detail::format_double(p.rel_diff_pplu) << '\n';
  }
}

}  // namespace pplu

#endif  // PPLU_SWEEP_HPP_

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

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "pplu/pplu.hpp"
#include "test_util.hpp"

namespace {

using pplu::TokenId;

struct Split {
  testutil::Data train;
  pplu::TokenizedCorpus test;
};

Split train_test(std::size_t vocab, std::size_t tokens, std::uint64_t seed,
                 double coherence) {
  pplu::SyntheticCorpusConfig cfg;
  cfg.vocab_size = vocab;
  cfg.token_count = tokens;
  cfg.seed = seed;
  cfg.bigram_coherence = coherence;
  const auto lines = pplu::generate_corpus(cfg);
  const std::size_t cut = lines.size() * 9 / 10;
  const std::vector<std::string> train(lines.begin(), lines.begin() + cut);
  const std::vector<std::string> test(lines.begin() + cut, lines.end());
  Split s{testutil::from_lines(train), {}};
  s.test = pplu::tokenize(test, s.train.vocab);
  return s;
}

TEST(Sweep, FullSizeOnlyHasZeroDifferences) {
  const auto s = train_test(200, 8000, 1, 0.5);
  const std::vector<std::size_t> keep{s.train.vocab.size()};
  const auto points = pplu::run_vocab_sweep(s.train.corpus, s.test,
                                            s.train.vocab, keep, {});
  ASSERT_EQ(points.size(), 1u);
  EXPECT_EQ(points[0].rel_diff_ppl, 0.0);
  EXPECT_EQ(points[0].rel_diff_pplu, 0.0);
  EXPECT_EQ(points[0].kept_vocab, s.train.vocab.size());
}

TEST(Sweep, IdentityMergeMatchesBaseExactly) {
  const auto s = train_test(200, 8000, 2, 0.5);
  const auto lm = pplu::train_ngram(s.train.corpus, 2, 0.3);
  const auto uni = pplu::count_unigrams(s.train.corpus);
  std::vector<TokenId> remap(s.train.vocab.size());
  for (TokenId i = 0; i < remap.size(); ++i) remap[i] = i;
  const auto merged = pplu::score_merged(lm, uni, s.test, remap, remap.size());
  const auto base = pplu::score_corpus(lm, uni, s.test);
  EXPECT_EQ(merged.ppl, base.ppl);
  EXPECT_EQ(merged.pplu, base.pplu);
}

TEST(Sweep, MergedViewsNormalize) {
  const auto s = train_test(150, 8000, 3, 0.5);
  const auto lm = pplu::train_ngram(s.train.corpus, 3, 0.1);
  const auto uni = pplu::count_unigrams(s.train.corpus);
  std::mt19937_64 rng(4);
  for (std::size_t keep : {std::size_t{120}, std::size_t{60}, std::size_t{2}}) {
    const auto red = pplu::reduce_vocabulary(s.train.vocab, keep);
    const pplu::TokenMerge merge(red.remap, red.vocab.size());
    const pplu::MergedModelView lm_view(lm, merge);
    const pplu::MergedUnigramView uni_view(uni, merge);
    for (int i = 0; i < 30; ++i) {
      const auto ctx = testutil::random_context(rng, lm.vocab_size(), 2);
      EXPECT_NEAR(testutil::total_probability(lm_view, ctx), 1.0, 1e-9);
    }
    EXPECT_NEAR(testutil::total_probability(uni_view, {}), 1.0, 1e-12);
  }
}

TEST(Sweep, UnkCarriesDiscardedMass) {
  const auto s = train_test(100, 5000, 5, 0.0);
  const auto uni = pplu::count_unigrams(s.train.corpus);
  const auto red = pplu::reduce_vocabulary(s.train.vocab, 50);
  const pplu::TokenMerge merge(red.remap, red.vocab.size());
  const pplu::MergedUnigramView view(uni, merge);
  double dropped = 0.0;
  for (TokenId id = 0; id < red.remap.size(); ++id) {
    if (red.remap[id] == pplu::kUnkId) dropped += uni.probability(id);
  }
  EXPECT_NEAR(std::exp(view.logprob(pplu::kUnkId)), dropped, 1e-12);
}

TEST(Sweep, PointsArePositiveAndOrdered) {
  const auto s = train_test(300, 15000, 6, 0.5);
  const std::size_t v = s.train.vocab.size();
  const std::vector<std::size_t> keep{v, v * 3 / 4, v / 2, v / 4};
  pplu::SweepConfig cfg;
  cfg.alpha = 0.1;
  const auto points =
      pplu::run_vocab_sweep(s.train.corpus, s.test, s.train.vocab, keep, cfg);
  ASSERT_EQ(points.size(), keep.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    EXPECT_EQ(points[i].kept_vocab, keep[i]);
    EXPECT_GT(points[i].ppl, 0.0);
    EXPECT_GT(points[i].pplu, 0.0);
    EXPECT_TRUE(std::isfinite(points[i].ppl));
    EXPECT_TRUE(std::isfinite(points[i].pplu));
  }
  // Merging can only raise probabilities, so PPL never increases.
  for (std::size_t i = 1; i < points.size(); ++i) {
    EXPECT_LE(points[i].ppl, points[i - 1].ppl);
  }
}

TEST(Sweep, PpluLessSensitiveOnAverage) {
  std::vector<double> ppl(3, 0.0), pplu(3, 0.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto s = train_test(500, 30000, seed, 0.5);
    const std::size_t v = s.train.vocab.size();
    const std::vector<std::size_t> keep{v, v * 9 / 10, v * 3 / 4, v / 2};
    pplu::SweepConfig cfg;
    cfg.alpha = 0.1;
    const auto points =
        pplu::run_vocab_sweep(s.train.corpus, s.test, s.train.vocab, keep, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
      ppl[i] += points[i + 1].rel_diff_ppl;
      pplu[i] += points[i + 1].rel_diff_pplu;
    }
  }
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE(pplu[i], ppl[i]) << i;
}

TEST(Sweep, KeepSizeValidation) {
  using V = std::vector<std::size_t>;
  EXPECT_THROW(pplu::validate_keep_sizes(V{}, 10), pplu::Error);
  EXPECT_THROW(pplu::validate_keep_sizes(V{11}, 10), pplu::Error);
  EXPECT_THROW(pplu::validate_keep_sizes(V{1}, 10), pplu::Error);
  EXPECT_THROW(pplu::validate_keep_sizes(V{8, 8}, 10), pplu::Error);
  EXPECT_THROW(pplu::validate_keep_sizes(V{5, 8}, 10), pplu::Error);
  EXPECT_NO_THROW(pplu::validate_keep_sizes(V{10, 5, 2}, 10));
  const std::vector<TokenId> bad_remap{0, 1, 5};
  EXPECT_THROW(pplu::TokenMerge(bad_remap, 3), pplu::Error);
  const std::vector<TokenId> gap{0, 1, 1};
  EXPECT_THROW(pplu::TokenMerge(gap, 3), pplu::Error);
}

TEST(Sweep, CsvFormat) {
  const std::vector<pplu::SweepPoint> points{{10, 5.5, 1.25, 0.0, 0.0},
                                             {8, 4.0, 1.5, 27.27, 20.0}};
  std::ostringstream out;
  pplu::write_sweep_csv(out, points);
  EXPECT_EQ(out.str(),
            "kept_vocab,ppl,pplu,rel_diff_ppl,rel_diff_pplu\n"
            "10,5.5,1.25,0,0\n"
            "8,4,1.5,27.27,20\n");
}

}  // namespace

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

// Acceptance gate: one PASS/FAIL line per criterion. Every tolerance, budget
// and experiment setting is fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "pplu/pplu.hpp"
#include "test_util.hpp"

namespace {

using pplu::TokenId;

// AC1
constexpr double kUnitTolerance = 1e-12;
constexpr std::size_t kUnitSentences = 10000;
constexpr double kUnitBudgetSeconds = 1.0;
// AC2
constexpr double kSplitTolerance = 1e-10;
constexpr std::size_t kSplitMinSentences = 1000;
constexpr double kSplitBudgetSeconds = 10.0;
// AC3
constexpr double kPmiIdentityTolerance = 1e-12;
constexpr double kIndependentPmiBound = 0.05;
constexpr double kDependentPmiFloor = 0.1;
constexpr double kPmiBudgetSeconds = 30.0;
// AC4
constexpr double kSweepBudgetSeconds = 120.0;
// AC5
constexpr double kRankBudgetSeconds = 10.0;
// AC6
constexpr double kOracleTolerance = 1e-12;
constexpr std::size_t kOracleSentences = 50;
// AC7
constexpr double kNormTolerance = 1e-9;
constexpr std::size_t kNormContexts = 1000;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const Outcome& o,
            double seconds) {
  std::printf("%s %s  %s: %s [%.2f s]\n", id, o.pass ? "PASS" : "FAIL", title,
              o.detail.c_str(), seconds);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

std::vector<std::string> generate(std::size_t vocab, std::size_t tokens,
                                  std::uint64_t seed, double coherence) {
  pplu::SyntheticCorpusConfig cfg;
  cfg.vocab_size = vocab;
  cfg.token_count = tokens;
  cfg.seed = seed;
  cfg.bigram_coherence = coherence;
  return pplu::generate_corpus(cfg);
}

// Vocabulary and both corpora from a 90/10 split of one generated corpus.
struct HeldOut {
  pplu::Vocabulary vocab;
  pplu::TokenizedCorpus train;
  pplu::TokenizedCorpus test;
};

HeldOut held_out(std::size_t vocab, std::size_t tokens, std::uint64_t seed,
                 double coherence) {
  const auto lines = generate(vocab, tokens, seed, coherence);
  const std::size_t cut = lines.size() * 9 / 10;
  const std::vector<std::string> train(lines.begin(), lines.begin() + cut);
  const std::vector<std::string> test(lines.begin() + cut, lines.end());
  HeldOut h;
  h.vocab = pplu::build_vocabulary(train);
  h.train = pplu::tokenize(train, h.vocab);
  h.test = pplu::tokenize(test, h.vocab);
  return h;
}

// AC1: the unigram model scored against itself gives PPLu = 1.
Outcome ac1(double& seconds) {
  auto lines = generate(2000, 140000, 1, 0.5);
  if (lines.size() < kUnitSentences) return {false, "corpus too small"};
  lines.resize(kUnitSentences);
  const auto d = testutil::from_lines(lines);
  const auto uni = pplu::count_unigrams(d.corpus);
  const auto start = Clock::now();
  const auto scores = pplu::score_corpus(uni, uni, d.corpus);
  seconds = seconds_since(start);
  double worst = std::abs(scores.pplu - 1.0);
  for (const auto& s : scores.sentences) {
    worst = std::max(worst, std::abs(s.pplu - 1.0));
  }
  // A second, unrelated corpus with OOV tokens and unsmoothed counts.
  const auto small = testutil::from_lines({"a b c", "d e f a", "a"});
  const auto other = pplu::tokenize(
      std::vector<std::string>{"a z b", "q q", "f"}, small.vocab);
  const auto small_uni = pplu::count_unigrams(small.corpus, 0.0);
  std::vector<pplu::Count> with_unk(small_uni.counts().begin(),
                                    small_uni.counts().end());
  with_unk[pplu::kUnkId] = 1;
  const pplu::UnigramModel uni2(with_unk, 0.0);
  const auto scores2 = pplu::score_corpus(uni2, uni2, other);
  worst = std::max(worst, std::abs(scores2.pplu - 1.0));
  for (const auto& s : scores2.sentences) {
    worst = std::max(worst, std::abs(s.pplu - 1.0));
  }
  const bool pass = worst <= kUnitTolerance &&
                    scores.sentences.size() == kUnitSentences &&
                    seconds < kUnitBudgetSeconds;
  return {pass, fmt("max |PPLu - 1| = %.3g", worst) + " over " +
                    std::to_string(scores.sentences.size()) +
                    " sentences (tol 1e-12, budget 1 s)"};
}

// AC2: analytic split views keep PPLu and shift ln PPL by -(sum ln r)/N.
Outcome ac2(double& seconds) {
  const auto start = Clock::now();
  const auto d = testutil::from_lines(generate(2000, 100000, 1, 0.5));
  const auto uni = pplu::count_unigrams(d.corpus);
  const TokenId target = d.vocab.id("w1");
  bool pass = true;
  double worst_pplu = 0.0, worst_shift = 0.0;
  std::size_t min_sentences = SIZE_MAX, not_increased = 0, runs = 0;
  for (std::size_t order : {1, 2, 3}) {
    const auto lm = pplu::train_ngram(d.corpus, order, 0.1);
    for (double beta : {0.1, 0.5, 0.9}) {
      pplu::SplitSpec spec;
      spec.target = target;
      spec.beta = beta;
      spec.seed = 100 + order;
      const auto r =
          pplu::verify_invariance(lm, uni, d.corpus, spec, kSplitTolerance);
      pass = pass && r.passed();
      worst_pplu = std::max(worst_pplu, r.max_pplu_deviation);
      worst_shift = std::max(worst_shift, r.max_ppl_shift_error);
      min_sentences = std::min(min_sentences, r.sentences.size());
      not_increased += r.ppl_not_increased;
      ++runs;
    }
  }
  seconds = seconds_since(start);
  pass = pass && min_sentences >= kSplitMinSentences && not_increased == 0 &&
         worst_pplu <= kSplitTolerance && worst_shift <= kSplitTolerance &&
         seconds < kSplitBudgetSeconds;
  return {pass, std::to_string(runs) + " runs, >= " +
                    std::to_string(min_sentences) +
                    " target sentences each; max |d ln PPLu| = " +
                    fmt("%.3g", worst_pplu) +
                    ", max shift error = " + fmt("%.3g", worst_shift) +
                    ", PPL not increased: " + std::to_string(not_increased) +
                    " (tol 1e-10, budget 10 s)"};
}

// AC3: PMI identity, and PMI near zero only for independent tokens.
// Held-out protocol: bigram, alpha 0.1, weights (0.8, 0.2), unigram alpha 1,
// 90/10 split of 100k tokens over 2000 types, seeds 1..5.
Outcome ac3(double& seconds) {
  const auto start = Clock::now();
  double worst_identity = 0.0;
  bool exact = true;
  double max_independent = 0.0;
  double min_dependent = INFINITY;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (double coherence : {0.0, 0.8}) {
      const auto h = held_out(2000, 100000, seed, coherence);
      const auto lm = pplu::train_ngram(h.train, 2, 0.1, {0.8, 0.2});
      const auto uni = pplu::count_unigrams(h.train, 1.0);
      const auto c = pplu::score_corpus(lm, uni, h.test);
      const auto pmi = pplu::pmi_summary(c.sentences);
      worst_identity = std::max(
          worst_identity, std::abs(pmi.mean_log_pplu - std::log(c.pplu)));
      exact = exact && pmi.mean_pmi == -pmi.mean_log_pplu;
      if (coherence == 0.0) {
        max_independent = std::max(max_independent, std::abs(pmi.mean_pmi));
      } else {
        min_dependent = std::min(min_dependent, pmi.mean_pmi);
      }
    }
  }
  seconds = seconds_since(start);
  const bool pass = worst_identity <= kPmiIdentityTolerance && exact &&
                    max_independent < kIndependentPmiBound &&
                    min_dependent > kDependentPmiFloor &&
                    seconds < kPmiBudgetSeconds;
  return {pass, fmt("identity error %.3g", worst_identity) +
                    (exact ? ", mean_pmi == -mean_log_pplu" : ", sign MISMATCH") +
                    fmt("; coherence 0: max |mean_pmi| = %.4f (< 0.05)",
                        max_independent) +
                    fmt("; coherence 0.8: min mean_pmi = %.3f (> 0.1)",
                        min_dependent) +
                    " over 5 seeds (budget 30 s)"};
}

// AC4: averaged over 5 seeds, PPLu moves less than PPL as the vocabulary
// shrinks. Trigram, alpha 0.1, coherence 0.5, 100k tokens, 2000 types.
Outcome ac4(double& seconds) {
  const auto start = Clock::now();
  std::vector<double> ppl(3, 0.0), pplu(3, 0.0);
  const int seeds = 5;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const auto h = held_out(2000, 100000, seed, 0.5);
    const std::size_t v = h.vocab.size();
    const std::vector<std::size_t> keep{v, v * 9 / 10, v * 3 / 4, v / 2};
    pplu::SweepConfig cfg;
    cfg.order = 3;
    cfg.alpha = 0.1;
    const auto points =
        pplu::run_vocab_sweep(h.train, h.test, h.vocab, keep, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
      ppl[i] += points[i + 1].rel_diff_ppl / seeds;
      pplu[i] += points[i + 1].rel_diff_pplu / seeds;
    }
  }
  seconds = seconds_since(start);
  bool pass = seconds < kSweepBudgetSeconds;
  std::string detail;
  const char* labels[] = {"90%", "75%", "50%"};
  for (std::size_t i = 0; i < 3; ++i) {
    pass = pass && pplu[i] <= ppl[i];
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s keep: ppl %.2f%% vs pplu %.2f%%; ",
                  labels[i], ppl[i], pplu[i]);
    detail += buf;
  }
  return {pass, detail + "mean rel. diff over 5 seeds (budget 120 s)"};
}

// AC5: sentences made of frequent words rank better by PPL than by PPLu.
// Training: 50k tokens, 1000 types, coherence 0.5. Evaluation: 3000 tokens
// from another seed plus 10 sentences drawn from {w1, w3, w5, w7}. Bigram,
// alpha 0.1, weights (0.8, 0.2), unigram alpha 1. Seeds 1..3.
Outcome ac5(double& seconds) {
  const auto start = Clock::now();
  bool pass = true;
  std::size_t frequent_total = 0, frequent_ok = 0;
  double min_corr = INFINITY;
  std::size_t best_ppl = SIZE_MAX, worst_pplu = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto d = testutil::from_lines(generate(1000, 50000, seed, 0.5));
    auto eval = generate(1000, 3000, seed + 100, 0.5);
    const std::size_t first_frequent = eval.size();
    std::mt19937_64 rng(seed);
    const std::vector<std::string> frequent{"w1", "w3", "w5", "w7"};
    for (int i = 0; i < 10; ++i) {
      const std::size_t len = 6 + rng() % 6;
      std::string line;
      for (std::size_t t = 0; t < len; ++t) {
        if (t) line += ' ';
        line += frequent[rng() % frequent.size()];
      }
      eval.push_back(line);
    }
    const auto test = pplu::tokenize(eval, d.vocab);
    const auto lm = pplu::train_ngram(d.corpus, 2, 0.1, {0.8, 0.2});
    const auto uni = pplu::count_unigrams(d.corpus, 1.0);
    const auto scores = pplu::score_corpus(lm, uni, test);
    const auto ranks = pplu::rank_sentences(scores.sentences);
    for (std::size_t i = first_frequent; i < ranks.size(); ++i) {
      ++frequent_total;
      if (ranks[i].rank_ppl < ranks[i].rank_pplu) ++frequent_ok;
      best_ppl = std::min(best_ppl, ranks[i].rank_ppl);
      worst_pplu = std::max(worst_pplu, ranks[i].rank_pplu);
    }
    const auto rep = pplu::divergence_report(ranks, 3);
    min_corr = std::min(min_corr, rep.displacement_frequency_correlation);
  }
  seconds = seconds_since(start);
  pass = frequent_ok == frequent_total && min_corr > 0.0 &&
         seconds < kRankBudgetSeconds;
  return {pass, std::to_string(frequent_ok) + "/" +
                    std::to_string(frequent_total) +
                    " frequent-word sentences rank better by PPL" +
                    fmt("; min corr(displacement, mean ln P_uni) = %.3f",
                        min_corr) +
                    " (budget 10 s)"};
}

// AC6: library values equal brute-force recomputation.
Outcome ac6(double& seconds) {
  const auto start = Clock::now();
  const auto c = testutil::random_corpus(10, kOracleSentences, 8, 2024);
  double worst_cond = 0.0, worst_uni = 0.0, worst_sent = 0.0;
  std::size_t checks = 0;
  struct Setting {
    std::size_t order;
    double alpha;
    std::vector<double> weights;
  };
  const std::vector<Setting> settings{{1, 1.0, {}},
                                      {2, 0.5, {0.4, 0.6}},
                                      {3, 0.1, {}},
                                      {3, 1.0, {0.1, 0.3, 0.6}}};
  for (double alpha : {0.0, 0.5, 1.0}) {
    const auto uni = pplu::count_unigrams(c, alpha);
    for (TokenId v = 0; v < c.vocab_size; ++v) {
      worst_uni = std::max(worst_uni, std::abs(uni.probability(v) -
                                               oracle::unigram_prob(c, alpha, v)));
      ++checks;
    }
  }
  for (const auto& s : settings) {
    const auto lm = pplu::train_ngram(c, s.order, s.alpha, s.weights);
    for (const auto& sent : c.sentences) {
      std::vector<TokenId> prefix;
      for (TokenId w : sent) {
        for (TokenId v = 0; v < c.vocab_size; ++v) {
          const double p =
              oracle::cond_prob(c, s.order, s.alpha, s.weights, prefix, v);
          worst_cond =
              std::max(worst_cond, std::abs(lm.cond_logprob(prefix, v) -
                                            std::log(p)));
          ++checks;
        }
        prefix.push_back(w);
      }
      worst_sent = std::max(
          worst_sent,
          std::abs(lm.sentence_logprob(sent) -
                   oracle::sentence_logprob(c, s.order, s.alpha, s.weights,
                                            sent)));
      ++checks;
    }
  }
  seconds = seconds_since(start);
  const double worst = std::max({worst_cond, worst_uni, worst_sent});
  return {worst <= kOracleTolerance,
          std::to_string(checks) + " values on " +
              std::to_string(c.sentences.size()) + " sentences" +
              fmt("; max error: cond %.3g", worst_cond) +
              fmt(", unigram %.3g", worst_uni) +
              fmt(", sentence %.3g (tol 1e-12)", worst_sent)};
}

// AC7: conditional distributions sum to one.
Outcome ac7(double& seconds) {
  const auto start = Clock::now();
  const auto d = testutil::from_lines(generate(500, 30000, 5, 0.5));
  const auto uni = pplu::count_unigrams(d.corpus);
  std::mt19937_64 rng(77);
  double worst = 0.0;
  std::size_t families = 0;
  auto check = [&](const auto& model) {
    ++families;
    for (std::size_t i = 0; i < kNormContexts; ++i) {
      std::vector<TokenId> ctx;
      if (i % 2 == 0) {
        ctx = testutil::random_context(rng, model.vocab_size(), rng() % 4);
      } else {
        const auto& s = d.corpus.sentences[rng() % d.corpus.sentences.size()];
        ctx.assign(s.begin(), s.begin() + rng() % s.size());
      }
      worst = std::max(worst,
                       std::abs(testutil::total_probability(model, ctx) - 1.0));
    }
  };
  for (std::size_t order : {1, 2, 3}) {
    check(pplu::train_ngram(d.corpus, order, 0.1));
  }
  const auto sparse = pplu::train_ngram(d.corpus, 3, 0.0, {0.2, 0.3, 0.5});
  check(sparse);
  const auto lm = pplu::train_ngram(d.corpus, 3, 0.1);
  pplu::SplitSpec spec;
  spec.target = d.vocab.id("w1");
  spec.beta = 0.3;
  const auto [lm_split, uni_split] =
      pplu::make_analytic_split_model(lm, uni, spec);
  check(lm_split);
  check(uni_split);
  const auto red = pplu::reduce_vocabulary(d.vocab, d.vocab.size() / 2);
  const pplu::TokenMerge merge(red.remap, red.vocab.size());
  const pplu::MergedModelView lm_merged(lm, merge);
  check(lm_merged);
  const pplu::MergedUnigramView uni_merged(uni, merge);
  check(uni_merged);
  seconds = seconds_since(start);
  return {worst <= kNormTolerance,
          std::to_string(families) + " models x " +
              std::to_string(kNormContexts) +
              " contexts (n-gram orders 1-3, alpha 0 trigram, split and "
              "reduced views)" +
              fmt("; max |sum P - 1| = %.3g (tol 1e-9)", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome(double&)>>>
      criteria{{"unigram-as-LM gives PPLu = 1", ac1},
               {"split invariance", ac2},
               {"PMI identity and sign", ac3},
               {"vocabulary sweep direction", ac4},
               {"ranking divergence direction", ac5},
               {"oracle equivalence", ac6},
               {"normalization", ac7}};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const std::string id = "AC" + std::to_string(i + 1);
    double seconds = 0.0;
    const auto total_start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second(seconds);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (seconds == 0.0) seconds = seconds_since(total_start);
    report(id.c_str(), criteria[i].first, o, seconds);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

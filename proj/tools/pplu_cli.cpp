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

// pplu: build vocabularies, train n-gram models, and report PPL / PPLu.
//
// Data goes to --out files or stdout; diagnostics go to stderr.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pplu/pplu.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Fully resolved configuration of one run; copied into every report.
struct RunConfig {
  std::string subcommand;
  std::string corpus;
  std::string test;
  std::string vocab;
  std::string model;
  std::string counts;
  std::string scores;
  std::string out;
  std::string counts_out;
  std::string lm = "ngram";
  std::string target;
  std::size_t order = 3;
  double alpha = 1.0;
  double unigram_alpha = 1.0;
  std::string weights;
  double beta = 0.5;
  std::uint64_t seed = 1;
  std::string keep_sizes;
  std::size_t top_k = 3;
  pplu::Count min_count = 1;
  std::size_t max_size = 0;  // 0: unlimited
  std::size_t vocab_size = 2000;
  std::size_t tokens = 100000;
  double zipf = 1.0;
  double coherence = 0.0;
  double tolerance = 1e-10;

  json to_json() const {
    json j = {{"subcommand", subcommand},
              {"format_version", pplu::kFormatVersion},
              {"base", pplu::kMetricBase}};
    auto put = [&](const char* key, const std::string& value) {
      if (!value.empty()) j[key] = value;
    };
    put("corpus", corpus);
    put("test", test);
    put("vocab", vocab);
    put("model", model);
    put("counts", counts);
    put("scores", scores);
    put("out", out);
    if (subcommand == "score" || subcommand == "rank") j["lm"] = lm;
    if (subcommand == "split-check") {
      j["target"] = target;
      j["beta"] = beta;
      j["seed"] = seed;
      j["tolerance"] = tolerance;
    }
    if (subcommand == "train" || subcommand == "sweep") {
      j["order"] = order;
      j["alpha"] = alpha;
      put("weights", weights);
    }
    if (subcommand != "train" && subcommand != "gen-corpus" &&
        subcommand != "build-vocab") {
      j["unigram_alpha"] = unigram_alpha;
    }
    if (subcommand == "sweep") j["keep_sizes"] = keep_sizes;
    if (subcommand == "rank") j["top_k"] = top_k;
    return j;
  }
};

class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& text,
                                      const char* flag) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(pplu::parse_number<double>(item, flag));
    } catch (const pplu::Error&) {
      throw CommandError(std::string(flag) + ": malformed value '" + item + "'");
    }
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text,
                                         const char* flag) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(pplu::parse_number<std::size_t>(item, flag));
    } catch (const pplu::Error&) {
      throw CommandError(std::string(flag) + ": malformed value '" + item + "'");
    }
  }
  if (out.empty()) throw CommandError(std::string(flag) + ": empty list");
  return out;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw CommandError("missing required option " +
                                        std::string(flag));
}

// Runs `fn` on the --out stream or stdout.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  auto out = pplu::open_output(path);
  fn(out);
  if (!out) throw pplu::Error("write failed: " + path);
}

pplu::Vocabulary load_vocabulary(const std::string& path) {
  auto in = pplu::open_input(path);
  try {
    return pplu::read_vocabulary(in);
  } catch (const pplu::Error& e) {
    throw pplu::Error(path + ": " + e.what());
  }
}

pplu::TokenizedCorpus load_corpus(const std::string& path,
                                  const pplu::Vocabulary& vocab) {
  const auto lines = pplu::read_lines(fs::path(path));
  auto corpus = pplu::tokenize(lines, vocab);
  if (corpus.empty()) throw pplu::Error(path + ": empty corpus");
  return corpus;
}

pplu::UnigramModel load_unigram(const RunConfig& cfg,
                                const pplu::Vocabulary& vocab) {
  auto in = pplu::open_input(cfg.counts);
  try {
    return pplu::UnigramModel(pplu::read_counts(in, vocab), cfg.unigram_alpha);
  } catch (const pplu::Error& e) {
    throw pplu::Error(cfg.counts + ": " + e.what());
  }
}

pplu::NGramModel load_ngram(const RunConfig& cfg,
                            const pplu::Vocabulary& vocab) {
  auto in = pplu::open_input(cfg.model);
  try {
    auto model = pplu::read_ngram_model(in);
    if (model.vocab_size() != vocab.size()) {
      throw pplu::Error("model vocab_size " +
                        std::to_string(model.vocab_size()) +
                        " does not match vocabulary size " +
                        std::to_string(vocab.size()));
    }
    return model;
  } catch (const pplu::Error& e) {
    throw pplu::Error(cfg.model + ": " + e.what());
  }
}

int cmd_gen_corpus(const RunConfig& cfg) {
  pplu::SyntheticCorpusConfig gen;
  gen.vocab_size = cfg.vocab_size;
  gen.token_count = cfg.tokens;
  gen.zipf_exponent = cfg.zipf;
  gen.seed = cfg.seed;
  gen.bigram_coherence = cfg.coherence;
  try {
    gen.validate();
  } catch (const pplu::Error& e) {
    throw CommandError(e.what());
  }
  const auto lines = pplu::generate_corpus(gen);
  with_output(cfg.out, [&](std::ostream& out) {
    for (const auto& line : lines) out << line << '\n';
  });
  return 0;
}

int cmd_build_vocab(const RunConfig& cfg) {
  require(cfg.corpus, "--corpus");
  const auto lines = pplu::read_lines(fs::path(cfg.corpus));
  std::optional<std::size_t> max_size;
  if (cfg.max_size > 0) max_size = cfg.max_size;
  const auto vocab = pplu::build_vocabulary(lines, cfg.min_count, max_size);
  with_output(cfg.out,
              [&](std::ostream& out) { pplu::write_vocabulary(out, vocab); });
  std::cerr << "vocabulary size " << vocab.size() << '\n';
  return 0;
}

int cmd_train(const RunConfig& cfg) {
  require(cfg.corpus, "--corpus");
  require(cfg.vocab, "--vocab");
  const auto vocab = load_vocabulary(cfg.vocab);
  const auto corpus = load_corpus(cfg.corpus, vocab);
  const auto model = pplu::train_ngram(corpus, cfg.order, cfg.alpha,
                                       parse_double_list(cfg.weights, "--weights"));
  with_output(cfg.out,
              [&](std::ostream& out) { pplu::write_ngram_model(out, model); });
  if (!cfg.counts_out.empty()) {
    const auto uni = pplu::count_unigrams(corpus, cfg.unigram_alpha);
    with_output(cfg.counts_out, [&](std::ostream& out) {
      pplu::write_counts(out, uni, vocab);
    });
  }
  return 0;
}

template <typename Fn>
auto with_language_model(const RunConfig& cfg, const pplu::Vocabulary& vocab,
                         const pplu::UnigramModel& uni, Fn&& fn) {
  if (cfg.lm == "unigram") return fn(uni);
  if (cfg.lm != "ngram") {
    throw CommandError("--lm: expected 'ngram' or 'unigram', got '" + cfg.lm +
                       "'");
  }
  require(cfg.model, "--model");
  const auto model = load_ngram(cfg, vocab);
  return fn(model);
}

int cmd_score(const RunConfig& cfg) {
  require(cfg.vocab, "--vocab");
  require(cfg.counts, "--counts");
  require(cfg.corpus, "--corpus");
  const auto vocab = load_vocabulary(cfg.vocab);
  const auto uni = load_unigram(cfg, vocab);
  const auto corpus = load_corpus(cfg.corpus, vocab);
  const auto scored = with_language_model(cfg, vocab, uni, [&](const auto& lm) {
    return pplu::score_corpus(lm, uni, corpus);
  });
  if (!cfg.out.empty()) {
    with_output(cfg.out, [&](std::ostream& out) {
      pplu::write_scores_jsonl(out, scored, cfg.to_json());
    });
  }
  const auto pmi = pplu::pmi_summary(scored.sentences);
  std::cout << "sentences\t" << scored.sentences.size() << '\n'
            << "tokens\t" << scored.token_count << '\n'
            << "corpus_ppl\t" << pplu::detail::format_double(scored.ppl) << '\n'
            << "corpus_pplu\t" << pplu::detail::format_double(scored.pplu)
            << '\n'
            << "mean_pmi\t" << pplu::detail::format_double(pmi.mean_pmi)
            << '\n';
  return 0;
}

int cmd_split_check(const RunConfig& cfg) {
  require(cfg.vocab, "--vocab");
  require(cfg.counts, "--counts");
  require(cfg.corpus, "--corpus");
  require(cfg.model, "--model");
  require(cfg.target, "--target");
  const auto vocab = load_vocabulary(cfg.vocab);
  const auto target = vocab.find(cfg.target);
  if (!target) {
    throw CommandError("--target: token '" + cfg.target +
                       "' is not in the vocabulary");
  }
  const auto uni = load_unigram(cfg, vocab);
  const auto lm = load_ngram(cfg, vocab);
  const auto corpus = load_corpus(cfg.corpus, vocab);
  pplu::SplitSpec spec;
  spec.target = *target;
  spec.beta = cfg.beta;
  spec.seed = cfg.seed;
  try {
    spec.validate(vocab.size());
  } catch (const pplu::Error& e) {
    throw CommandError(std::string("--target/--beta: ") + e.what());
  }
  const auto report =
      pplu::verify_invariance(lm, uni, corpus, spec, cfg.tolerance);
  if (!cfg.out.empty()) {
    with_output(cfg.out, [&](std::ostream& out) {
      json j = pplu::to_json(report);
      j["config"] = cfg.to_json();
      out << j.dump(2) << '\n';
    });
  }
  auto row = [](const char* check, bool ok, const std::string& detail) {
    std::printf("%-34s %-4s %s\n", check, ok ? "PASS" : "FAIL", detail.c_str());
  };
  using pplu::detail::format_double;
  std::printf("split '%s' beta=%s: %zu of %zu sentences contain the target\n",
              cfg.target.c_str(), format_double(cfg.beta).c_str(),
              report.sentences.size(), report.sentences_total);
  row("PPLu invariant (max |d ln PPLu|)",
      report.max_pplu_deviation <= cfg.tolerance,
      format_double(report.max_pplu_deviation));
  row("ln PPL shift = -(sum ln r)/N",
      report.max_ppl_shift_error <= cfg.tolerance,
      format_double(report.max_ppl_shift_error));
  row("PPL increased on target sentences", report.ppl_not_increased == 0,
      std::to_string(report.ppl_not_increased) + " violations");
  row("other sentences unchanged", report.unchanged_violations == 0,
      std::to_string(report.unchanged_violations) + " violations");
  std::printf("corpus PPL  %s -> %s\n",
              format_double(report.corpus_ppl_base).c_str(),
              format_double(report.corpus_ppl_split).c_str());
  std::printf("corpus PPLu %s -> %s\n",
              format_double(report.corpus_pplu_base).c_str(),
              format_double(report.corpus_pplu_split).c_str());
  std::fflush(stdout);
  if (!report.passed()) {
    for (const auto& f : report.failures) std::cerr << "split-check: " << f << '\n';
    return 1;
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  require(cfg.corpus, "--corpus");
  require(cfg.test, "--test");
  require(cfg.vocab, "--vocab");
  require(cfg.keep_sizes, "--keep-sizes");
  const auto vocab = load_vocabulary(cfg.vocab);
  const auto train = load_corpus(cfg.corpus, vocab);
  const auto test = load_corpus(cfg.test, vocab);
  const auto keep = parse_size_list(cfg.keep_sizes, "--keep-sizes");
  try {
    pplu::validate_keep_sizes(keep, vocab.size());
  } catch (const pplu::Error& e) {
    throw CommandError(std::string("--keep-sizes: ") + e.what());
  }
  // Frequencies from the training corpus decide which tokens go first.
  const auto uni_counts = pplu::count_unigrams(train, cfg.unigram_alpha);
  std::vector<pplu::Count> freqs(uni_counts.counts().begin(),
                                 uni_counts.counts().end());
  freqs[pplu::kUnkId] = 0;
  freqs[pplu::kEosId] = 0;
  const auto ranked_vocab = pplu::Vocabulary::from_tokens(
      std::vector<std::string>(vocab.tokens().begin(), vocab.tokens().end()),
      freqs);
  pplu::SweepConfig sweep;
  sweep.order = cfg.order;
  sweep.alpha = cfg.alpha;
  sweep.unigram_alpha = cfg.unigram_alpha;
  sweep.weights = parse_double_list(cfg.weights, "--weights");
  const auto points =
      pplu::run_vocab_sweep(train, test, ranked_vocab, keep, sweep);
  with_output(cfg.out, [&](std::ostream& out) {
    pplu::write_sweep_csv(out, points);
  });
  if (!cfg.out.empty() && cfg.out != "-") {
    with_output(cfg.out + ".meta.json", [&](std::ostream& out) {
      out << cfg.to_json().dump(2) << '\n';
    });
  }
  return 0;
}

int cmd_rank(const RunConfig& cfg) {
  std::vector<pplu::SentenceScore> scores;
  std::vector<std::string> texts;
  if (!cfg.scores.empty()) {
    if (!cfg.corpus.empty()) {
      throw CommandError("--scores and --corpus are mutually exclusive");
    }
    auto in = pplu::open_input(cfg.scores);
    try {
      scores = pplu::read_scores_jsonl(in);
    } catch (const pplu::Error& e) {
      throw pplu::Error(cfg.scores + ": " + e.what());
    }
  } else {
    require(cfg.vocab, "--vocab");
    require(cfg.counts, "--counts");
    require(cfg.corpus, "--corpus");
    const auto vocab = load_vocabulary(cfg.vocab);
    const auto uni = load_unigram(cfg, vocab);
    for (auto& line : pplu::read_lines(fs::path(cfg.corpus))) {
      if (!pplu::split_whitespace(line).empty()) texts.push_back(std::move(line));
    }
    const auto corpus = pplu::tokenize(texts, vocab);
    if (corpus.empty()) throw pplu::Error(cfg.corpus + ": empty corpus");
    scores = with_language_model(cfg, vocab, uni, [&](const auto& lm) {
      return pplu::score_corpus(lm, uni, corpus).sentences;
    });
  }
  if (scores.empty()) throw pplu::Error("no sentences to rank");
  if (cfg.top_k > scores.size()) {
    throw CommandError("--top-k: " + std::to_string(cfg.top_k) +
                       " exceeds the number of sentences (" +
                       std::to_string(scores.size()) + ")");
  }
  const auto records = pplu::rank_sentences(scores);
  const auto report = pplu::divergence_report(records, cfg.top_k);
  if (!cfg.out.empty()) {
    with_output(cfg.out, [&](std::ostream& out) {
      json j = pplu::to_json(report, records);
      j["config"] = cfg.to_json();
      out << j.dump(2) << '\n';
    });
  }
  pplu::print_divergence_table(std::cout, report, texts);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perplexity and unigram-normalized perplexity toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* gen = app.add_subcommand("gen-corpus", "Write a synthetic Zipf corpus");
  gen->add_option("--vocab-size", cfg.vocab_size, "Number of word types")
      ->check(CLI::PositiveNumber);
  gen->add_option("--tokens", cfg.tokens, "Number of words (excluding </s>)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--zipf", cfg.zipf, "Zipf exponent (> 0)");
  gen->add_option("--coherence", cfg.coherence,
                  "Bigram dependence strength in [0,1]");
  gen->add_option("--seed", cfg.seed, "Random seed");
  gen->add_option("--out", cfg.out, "Output corpus file (default stdout)");

  auto* build = app.add_subcommand("build-vocab", "Build a vocabulary file");
  build->add_option("--corpus", cfg.corpus, "Corpus text file")->required();
  build->add_option("--min-count", cfg.min_count, "Minimum token frequency")
      ->check(CLI::PositiveNumber);
  build->add_option("--max-size", cfg.max_size,
                    "Maximum entries including <unk> and </s> (0: no limit)");
  build->add_option("--out", cfg.out, "Output vocabulary file");

  auto* train = app.add_subcommand("train", "Train an n-gram model");
  train->add_option("--corpus", cfg.corpus, "Training corpus")->required();
  train->add_option("--vocab", cfg.vocab, "Vocabulary file")->required();
  train->add_option("--order", cfg.order, "n-gram order");
  train->add_option("--alpha", cfg.alpha, "Additive smoothing constant");
  train->add_option("--weights", cfg.weights,
                    "Comma-separated interpolation weights, unigram first");
  train->add_option("--out", cfg.out, "Output model dump");
  train->add_option("--counts-out", cfg.counts_out, "Output unigram counts");

  auto add_scoring = [&](CLI::App* sub) {
    sub->add_option("--vocab", cfg.vocab, "Vocabulary file");
    sub->add_option("--counts", cfg.counts, "Unigram counts file");
    sub->add_option("--unigram-alpha", cfg.unigram_alpha,
                    "Unigram smoothing constant");
  };

  auto* score = app.add_subcommand("score", "Score a corpus (PPL and PPLu)");
  add_scoring(score);
  score->add_option("--model", cfg.model, "n-gram model dump");
  score->add_option("--corpus", cfg.corpus, "Corpus to score");
  score->add_option("--lm", cfg.lm, "Language model: ngram or unigram");
  score->add_option("--out", cfg.out, "Scores JSONL output");

  auto* split = app.add_subcommand(
      "split-check", "Verify PPLu invariance under an analytic word split");
  add_scoring(split);
  split->add_option("--model", cfg.model, "n-gram model dump");
  split->add_option("--corpus", cfg.corpus, "Corpus to score");
  split->add_option("--target", cfg.target, "Token to split");
  split->add_option("--beta", cfg.beta, "Split ratio in (0,1)");
  split->add_option("--seed", cfg.seed, "Seed for assigning occurrences");
  split->add_option("--tolerance", cfg.tolerance, "Allowed |d ln PPLu|");
  split->add_option("--out", cfg.out, "Report JSON output");

  auto* sweep = app.add_subcommand(
      "sweep", "Evaluate one model under reduced vocabularies");
  sweep->add_option("--corpus", cfg.corpus, "Training corpus");
  sweep->add_option("--test", cfg.test, "Test corpus");
  sweep->add_option("--vocab", cfg.vocab, "Full vocabulary file");
  sweep->add_option("--order", cfg.order, "n-gram order");
  sweep->add_option("--alpha", cfg.alpha, "n-gram smoothing constant");
  sweep->add_option("--unigram-alpha", cfg.unigram_alpha,
                    "Unigram smoothing constant");
  sweep->add_option("--weights", cfg.weights, "Interpolation weights");
  sweep->add_option("--keep-sizes", cfg.keep_sizes,
                    "Comma-separated, strictly decreasing vocabulary sizes");
  sweep->add_option("--out", cfg.out, "Sweep CSV output (default stdout)");

  auto* rank = app.add_subcommand("rank", "Rank sentences by PPL and PPLu");
  add_scoring(rank);
  rank->add_option("--model", cfg.model, "n-gram model dump");
  rank->add_option("--corpus", cfg.corpus, "Corpus to rank");
  rank->add_option("--scores", cfg.scores, "Existing scores JSONL");
  rank->add_option("--lm", cfg.lm, "Language model: ngram or unigram");
  rank->add_option("--top-k", cfg.top_k, "Rows per table");
  rank->add_option("--out", cfg.out, "Report JSON output");

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
    if (cfg.subcommand == "gen-corpus") return cmd_gen_corpus(cfg);
    if (cfg.subcommand == "build-vocab") return cmd_build_vocab(cfg);
    if (cfg.subcommand == "train") return cmd_train(cfg);
    if (cfg.subcommand == "score") return cmd_score(cfg);
    if (cfg.subcommand == "split-check") return cmd_split_check(cfg);
    if (cfg.subcommand == "sweep") return cmd_sweep(cfg);
    if (cfg.subcommand == "rank") return cmd_rank(cfg);
  } catch (const CommandError& e) {
    std::cerr << "pplu " << cfg.subcommand << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "pplu " << cfg.subcommand << ": " << e.what() << '\n';
    return 1;
  }
  return 2;
}

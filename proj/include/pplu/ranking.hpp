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

#ifndef PPLU_RANKING_HPP_
#define PPLU_RANKING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pplu/common.hpp"
#include "pplu/metrics.hpp"

namespace pplu {

struct RankRecord {
  std::size_t sentence_id = 0;
  std::size_t rank_ppl = 0;   // 1-based, lower is better
  std::size_t rank_pplu = 0;  // 1-based, lower is better
  double ppl = 0.0;
  double pplu = 0.0;
  double mean_unigram_logprob = 0.0;

  // Positive when the sentence looks better under PPL than under PPLu.
  long displacement() const {
    return static_cast<long>(rank_pplu) - static_cast<long>(rank_ppl);
  }
};

// Ranks ascending under each metric; ties go to the smaller sentence id.
// Records come back in input order.
inline std::vector<RankRecord> rank_sentences(
    std::span<const SentenceScore> scores) {
  if (scores.empty()) throw Error("no sentence scores to rank");
  std::vector<RankRecord> records(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    records[i].sentence_id = scores[i].sentence_id;
    records[i].ppl = scores[i].ppl;
    records[i].pplu = scores[i].pplu;
    records[i].mean_unigram_logprob = scores[i].mean_unigram_logprob();
  }
  std::vector<std::size_t> order(scores.size());
  auto assign = [&](auto key, auto rank_field) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double ka = key(records[a]);
      const double kb = key(records[b]);
      if (ka != kb) return ka < kb;
      return records[a].sentence_id < records[b].sentence_id;
    });
    for (std::size_t r = 0; r < order.size(); ++r) {
      records[order[r]].*rank_field = r + 1;
    }
  };
  assign([](const RankRecord& r) { return r.ppl; }, &RankRecord::rank_ppl);
  assign([](const RankRecord& r) { return r.pplu; }, &RankRecord::rank_pplu);
  return records;
}

// Pearson correlation; 0 when either side has no variance.
inline double pearson_correlation(std::span<const double> x,
                                  std::span<const double> y) {
  if (x.size() != y.size() || x.empty()) {
    throw Error("correlation needs two equal-length non-empty series");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

struct DivergenceReport {
  std::size_t top_k = 0;
  std::vector<RankRecord> top_by_ppl;
  std::vector<RankRecord> top_by_pplu;
  double mean_abs_displacement = 0.0;
  // Correlation of (rank_pplu - rank_ppl) with mean unigram log-probability.
  double displacement_frequency_correlation = 0.0;
};

inline DivergenceReport divergence_report(std::span<const RankRecord> records,
                                          std::size_t top_k) {
  if (records.empty()) throw Error("no ranked sentences");
  if (top_k > records.size()) {
    throw Error("top_k " + std::to_string(top_k) + " exceeds sentence count " +
                std::to_string(records.size()));
  }
  DivergenceReport report;
  report.top_k = top_k;
  std::vector<RankRecord> by_ppl(records.begin(), records.end());
  std::vector<RankRecord> by_pplu = by_ppl;
  std::sort(by_ppl.begin(), by_ppl.end(),
            [](const auto& a, const auto& b) { return a.rank_ppl < b.rank_ppl; });
  std::sort(by_pplu.begin(), by_pplu.end(), [](const auto& a, const auto& b) {
    return a.rank_pplu < b.rank_pplu;
  });
  report.top_by_ppl.assign(by_ppl.begin(), by_ppl.begin() + top_k);
  report.top_by_pplu.assign(by_pplu.begin(), by_pplu.begin() + top_k);

  std::vector<double> displacement;
  std::vector<double> frequency;
  double abs_sum = 0.0;
  for (const auto& r : records) {
    displacement.push_back(static_cast<double>(r.displacement()));
    frequency.push_back(r.mean_unigram_logprob);
    abs_sum += std::abs(static_cast<double>(r.displacement()));
  }
  report.mean_abs_displacement = abs_sum / static_cast<double>(records.size());
  report.displacement_frequency_correlation =
      pearson_correlation(displacement, frequency);
  return report;
}

inline nlohmann::json to_json(const RankRecord& r) {
  return {{"sentence_id", r.sentence_id},
          {"rank_ppl", r.rank_ppl},
          {"rank_pplu", r.rank_pplu},
          {"ppl", r.ppl},
          {"pplu", r.pplu},
          {"mean_unigram_logprob", r.mean_unigram_logprob}};
}

inline nlohmann::json to_json(const DivergenceReport& report,
                              std::span<const RankRecord> records) {
  nlohmann::json top_ppl = nlohmann::json::array();
  nlohmann::json top_pplu = nlohmann::json::array();
  nlohmann::json all = nlohmann::json::array();
  for (const auto& r : report.top_by_ppl) top_ppl.push_back(to_json(r));
  for (const auto& r : report.top_by_pplu) top_pplu.push_back(to_json(r));
  for (const auto& r : records) all.push_back(to_json(r));
  return {{"format_version", kFormatVersion},
          {"base", kMetricBase},
          {"top_k", report.top_k},
          {"mean_abs_displacement", report.mean_abs_displacement},
          {"displacement_frequency_correlation",
           report.displacement_frequency_correlation},
          {"top_by_ppl", top_ppl},
          {"top_by_pplu", top_pplu},
          {"records", all}};
}

// Human-readable top-k tables. texts[id], when present, is printed for each
// sentence; otherwise its id.
inline void print_divergence_table(std::ostream& out,
                                   const DivergenceReport& report,
                                   std::span<const std::string> texts = {}) {
  auto table = [&](const char* title, std::span<const RankRecord> rows) {
    out << title << '\n';
    out << "  rank_ppl rank_pplu        ppl       pplu  sentence\n";
    char buf[96];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof(buf), "  %8zu %9zu %10.4g %10.4g  ",
                    r.rank_ppl, r.rank_pplu, r.ppl, r.pplu);
      out << buf;
      if (r.sentence_id < texts.size()) {
        out << texts[r.sentence_id];
      } else {
        out << '#' << r.sentence_id;
      }
      out << '\n';
    }
  };
  table("top sentences by PPL", report.top_by_ppl);
  table("top sentences by PPLu", report.top_by_pplu);
  out << "mean |rank_ppl - rank_pplu|: " << report.mean_abs_displacement
      << '\n';
  out << "corr(rank_pplu - rank_ppl, mean ln P_uni): "
      << report.displacement_frequency_correlation << '\n';
}

}  // namespace pplu

#endif  // PPLU_RANKING_HPP_

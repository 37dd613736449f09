// Copyright 2026 The Authors.
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

#include "alsel/analyze.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <unordered_map>

#include "alsel/errors.h"

namespace alsel {

namespace {

using NgramCounts = std::unordered_map<Phrase, std::int64_t>;

void CountNgrams(std::span<const std::string> tokens, int n,
                 NgramCounts* out) {
  if (tokens.size() < static_cast<std::size_t>(n)) return;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    Phrase p(Tokens(tokens.begin() + i, tokens.begin() + i + n));
    ++(*out)[p];
  }
}

std::optional<double> ParseDouble(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == line.npos) break;
    start = tab + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') {
    out.back().pop_back();
  }
  return out;
}

std::unordered_map<SentenceId, const Sentence*> IndexHypotheses(
    const Corpus& hypotheses, const Corpus& references) {
  std::unordered_map<SentenceId, const Sentence*> out;
  for (const auto& h : hypotheses.sentences()) {
    if (!references.Find(h.id)) {
      throw ArgumentError("hypothesis id " + std::to_string(h.id) +
                          " has no reference");
    }
    out.emplace(h.id, &h);
  }
  return out;
}

}  // namespace

CoverageReport NgramCoverage(std::span<const Tokens> covering,
                             std::span<const Tokens> test, int max_n,
                             CoverageWeighting weighting) {
  if (max_n < 1) throw ArgumentError("max_n must be >= 1");
  if (test.empty()) throw ArgumentError("empty test set");
  CoverageReport report;
  report.max_n = max_n;
  report.weighting = weighting;
  for (int n = 1; n <= max_n; ++n) {
    NgramCounts test_counts;
    for (const auto& s : test) CountNgrams(s, n, &test_counts);
    NgramCounts cover_counts;
    for (const auto& s : covering) CountNgrams(s, n, &cover_counts);
    std::int64_t denom = 0;
    std::int64_t hit = 0;
    for (const auto& [p, c] : test_counts) {
      const std::int64_t w = weighting == CoverageWeighting::kTypes ? 1 : c;
      denom += w;
      if (cover_counts.contains(p)) hit += w;
    }
    report.test_ngrams.push_back(denom);
    report.percent.push_back(
        denom == 0 ? 0.0
                   : 100.0 * static_cast<double>(hit) /
                         static_cast<double>(denom));
  }
  return report;
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw ArgumentError("pearson: length mismatch");
  }
  if (xs.size() < 2) throw ArgumentError("pearson: need at least 2 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateError("pearson: zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<CorrelationRow> CorrelateTable(std::istream& tsv) {
  std::string line;
  std::vector<std::string> header;
  while (header.empty() && std::getline(tsv, line)) {
    if (Tokenize(line)) header = SplitTabs(line);
  }
  if (header.empty()) throw ParseError("correlation table has no header", 0);
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(tsv, line)) {
    ++line_no;
    if (!Tokenize(line)) continue;
    auto cells = SplitTabs(line);
    if (cells.size() != header.size()) {
      throw ParseError("correlation table line " + std::to_string(line_no) +
                           ": expected " + std::to_string(header.size()) +
                           " columns",
                       line_no);
    }
    rows.push_back(std::move(cells));
  }
  std::vector<std::size_t> numeric;
  std::vector<std::vector<double>> values(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    bool ok = !rows.empty();
    for (const auto& r : rows) {
      auto v = ParseDouble(r[c]);
      if (!v) {
        ok = false;
        break;
      }
      values[c].push_back(*v);
    }
    if (ok) numeric.push_back(c);
  }
  if (numeric.size() < 2) {
    throw ArgumentError("correlation table needs at least two numeric columns");
  }
  const std::size_t score = numeric.back();
  std::vector<CorrelationRow> out;
  for (std::size_t i = 0; i + 1 < numeric.size(); ++i) {
    const std::size_t c = numeric[i];
    out.push_back({header[c], Pearson(values[c], values[score])});
  }
  return out;
}

BleuResult SentenceBleu(std::span<const std::string> hypothesis,
                        std::span<const std::string> reference, int max_n,
                        BleuSmoothing smoothing) {
  if (reference.empty()) throw ArgumentError("empty reference");
  if (max_n < 1) throw ArgumentError("max_n must be >= 1");
  BleuResult result;
  if (hypothesis.empty()) {
    result.empty_hypothesis = true;
    return result;
  }
  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    NgramCounts hyp, ref;
    CountNgrams(hypothesis, n, &hyp);
    CountNgrams(reference, n, &ref);
    double matched = 0.0;
    double total = 0.0;
    for (const auto& [p, c] : hyp) {
      total += static_cast<double>(c);
      auto it = ref.find(p);
      if (it != ref.end()) {
        matched += static_cast<double>(std::min(c, it->second));
      }
    }
    if (smoothing == BleuSmoothing::kAddOneAboveUnigram && n >= 2) {
      matched += 1.0;
      total += 1.0;
    }
    if (matched == 0.0 || total == 0.0) return result;
    log_sum += std::log(matched / total);
  }
  const double c = static_cast<double>(hypothesis.size());
  const double r = static_cast<double>(reference.size());
  const double log_bp = c > r ? 0.0 : 1.0 - r / c;
  result.score = 100.0 * std::exp(log_sum / max_n + log_bp);
  return result;
}

std::unordered_set<std::string> Vocabulary(std::span<const Tokens> sentences) {
  std::unordered_set<std::string> v;
  for (const auto& s : sentences) v.insert(s.begin(), s.end());
  return v;
}

InDomainWordStats ComputeInDomainWordStats(std::span<const Tokens> selected,
                                           std::span<const Tokens> ood,
                                           std::span<const Tokens> test) {
  const auto ood_vocab = Vocabulary(ood);
  std::unordered_set<std::string> in_domain;
  for (const auto& s : test) {
    for (const auto& w : s) {
      if (!ood_vocab.contains(w)) in_domain.insert(w);
    }
  }
  InDomainWordStats stats;
  std::unordered_set<std::string> types, id_types;
  for (const auto& s : selected) {
    for (const auto& w : s) {
      ++stats.tokens;
      types.insert(w);
      if (in_domain.contains(w)) {
        ++stats.in_domain_tokens;
        id_types.insert(w);
      }
    }
  }
  stats.types = static_cast<std::int64_t>(types.size());
  stats.in_domain_types = static_cast<std::int64_t>(id_types.size());
  if (stats.types > 0) {
    stats.type_ratio = 100.0 * static_cast<double>(stats.in_domain_types) /
                       static_cast<double>(stats.types);
  }
  if (stats.tokens > 0) {
    stats.token_ratio = 100.0 * static_cast<double>(stats.in_domain_tokens) /
                        static_cast<double>(stats.tokens);
  }
  return stats;
}

AccuracyResult InDomainTranslationAccuracy(
    const ParallelCorpus& test, const Corpus& hypotheses,
    std::span<const AlignmentLinks> alignments,
    const std::unordered_set<std::string>& ood_vocab) {
  if (alignments.size() != test.size()) {
    throw ArgumentError("expected one alignment line per test pair");
  }
  const auto hyps = IndexHypotheses(hypotheses, test.SourceSide());
  AccuracyResult result;
  result.mode = "alignment";
  auto pairs = test.pairs();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& pair = pairs[k];
    std::unordered_set<std::string> bag;
    if (auto it = hyps.find(pair.id); it != hyps.end()) {
      bag.insert(it->second->tokens.begin(), it->second->tokens.end());
    }
    std::map<std::uint32_t, std::vector<std::uint32_t>> by_source;
    for (const auto& l : alignments[k]) by_source[l.source].push_back(l.target);
    for (const auto& [i, targets] : by_source) {
      if (i >= pair.source.size() || ood_vocab.contains(pair.source[i])) {
        continue;
      }
      ++result.evaluated;
      bool ok = true;
      for (auto j : targets) {
        if (j >= pair.target.size() || !bag.contains(pair.target[j])) {
          ok = false;
          break;
        }
      }
      if (ok) ++result.correct;
    }
  }
  if (result.evaluated > 0) {
    result.accuracy = static_cast<double>(result.correct) /
                      static_cast<double>(result.evaluated);
  }
  return result;
}

AccuracyResult InDomainTranslationAccuracy(
    const ParallelCorpus& test, const Corpus& hypotheses,
    const TranslationTable& table,
    const std::unordered_set<std::string>& ood_vocab) {
  const auto hyps = IndexHypotheses(hypotheses, test.SourceSide());
  AccuracyResult result;
  result.mode = "table-top1";
  for (const auto& pair : test.pairs()) {
    std::unordered_set<std::string> bag;
    if (auto it = hyps.find(pair.id); it != hyps.end()) {
      bag.insert(it->second->tokens.begin(), it->second->tokens.end());
    }
    for (const auto& w : pair.source) {
      if (ood_vocab.contains(w)) continue;
      auto best = table.BestTranslation(w);
      if (!best) continue;
      ++result.evaluated;
      if (bag.contains(*best)) ++result.correct;
    }
  }
  if (result.evaluated > 0) {
    result.accuracy = static_cast<double>(result.correct) /
                      static_cast<double>(result.evaluated);
  }
  return result;
}

double LengthRatio(const Corpus& hypotheses, const Corpus& references) {
  const auto hyps = IndexHypotheses(hypotheses, references);
  const std::int64_t ref_total = references.TotalWords();
  if (ref_total == 0) throw ArgumentError("empty reference corpus");
  std::int64_t hyp_total = 0;
  for (const auto& [id, s] : hyps) hyp_total += Cost(*s);
  return static_cast<double>(hyp_total) / static_cast<double>(ref_total);
}

nlohmann::json ToJson(const CoverageReport& report) {
  nlohmann::json j;
  j["max_n"] = report.max_n;
  j["weighting"] =
      report.weighting == CoverageWeighting::kTypes ? "types" : "tokens";
  j["percent"] = report.percent;
  j["test_ngrams"] = report.test_ngrams;
  j["covering"] = report.covering_description;
  return j;
}

nlohmann::json ToJson(const InDomainWordStats& stats) {
  return {{"idwt", stats.in_domain_types},
          {"wt", stats.types},
          {"idwc", stats.in_domain_tokens},
          {"wc", stats.tokens},
          {"type_ratio", stats.type_ratio},
          {"token_ratio", stats.token_ratio}};
}

nlohmann::json ToJson(const AccuracyResult& result) {
  return {{"accuracy", result.accuracy},
          {"evaluated", result.evaluated},
          {"correct", result.correct},
          {"mode", result.mode}};
}

}  // namespace alsel

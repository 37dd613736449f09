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

// Diagnostics over selected data and system outputs: test n-gram coverage,
// Pearson correlation, smoothed sentence BLEU, in-domain word statistics,
// in-domain word translation accuracy and output/reference length ratio.

#ifndef ALSEL_ANALYZE_H_
#define ALSEL_ANALYZE_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "alsel/align.h"
#include "alsel/corpus.h"
#include "json.hpp"

namespace alsel {

enum class CoverageWeighting {
  kTypes,   // share of distinct test n-grams present in the covering text
  kTokens,  // share of test n-gram occurrences whose type is covered
};

struct CoverageReport {
  int max_n = 0;
  CoverageWeighting weighting = CoverageWeighting::kTypes;
  // percent[n-1] in [0, 100]; 0 when the test side has no n-grams of size n.
  std::vector<double> percent;
  // Denominator per n (distinct types or occurrences).
  std::vector<std::int64_t> test_ngrams;
  std::string covering_description;
};

// Throws ArgumentError on an empty test side or max_n < 1.
CoverageReport NgramCoverage(std::span<const Tokens> covering,
                             std::span<const Tokens> test, int max_n,
                             CoverageWeighting weighting =
                                 CoverageWeighting::kTypes);

// Sample Pearson r. Throws ArgumentError on size mismatch or fewer than 2
// points, and DegenerateError when either side has zero variance.
double Pearson(std::span<const double> xs, std::span<const double> ys);

struct CorrelationRow {
  std::string column;
  double r = 0.0;
};

// Tab-separated table with a header row. The last numeric column is the
// score; every other numeric column is correlated with it. A leading
// non-numeric column (row labels) is ignored.
std::vector<CorrelationRow> CorrelateTable(std::istream& tsv);

enum class BleuSmoothing {
  kNone,
  // Add one to the matched and total counts of every n >= 2 precision.
  kAddOneAboveUnigram,
};

struct BleuResult {
  double score = 0.0;  // [0, 100]
  bool empty_hypothesis = false;
};

// Throws ArgumentError on an empty reference.
BleuResult SentenceBleu(std::span<const std::string> hypothesis,
                        std::span<const std::string> reference, int max_n = 4,
                        BleuSmoothing smoothing =
                            BleuSmoothing::kAddOneAboveUnigram);

struct InDomainWordStats {
  std::int64_t in_domain_types = 0;   // IDWT
  std::int64_t types = 0;             // WT
  std::int64_t in_domain_tokens = 0;  // IDWC
  std::int64_t tokens = 0;            // WC
  double type_ratio = 0.0;   // 100 * IDWT / WT
  double token_ratio = 0.0;  // 100 * IDWC / WC
};

// An in-domain word is a test word type that never occurs in `ood`.
InDomainWordStats ComputeInDomainWordStats(std::span<const Tokens> selected,
                                           std::span<const Tokens> ood,
                                           std::span<const Tokens> test);

std::unordered_set<std::string> Vocabulary(std::span<const Tokens> sentences);

struct AccuracyResult {
  double accuracy = 0.0;
  std::int64_t evaluated = 0;
  std::int64_t correct = 0;
  std::string mode;  // "alignment" or "table-top1"
};

// For every in-domain source token of the test set that has at least one
// reference alignment link, counts it correct when all of its aligned
// reference tokens occur in the hypothesis. `alignments` is indexed like
// test.pairs(); hypotheses are matched by id.
AccuracyResult InDomainTranslationAccuracy(
    const ParallelCorpus& test, const Corpus& hypotheses,
    std::span<const AlignmentLinks> alignments,
    const std::unordered_set<std::string>& ood_vocab);

// Fallback without alignments: correct when the table's top-1 translation
// of the source token occurs in the hypothesis; tokens without a
// translation are not evaluated.
AccuracyResult InDomainTranslationAccuracy(
    const ParallelCorpus& test, const Corpus& hypotheses,
    const TranslationTable& table,
    const std::unordered_set<std::string>& ood_vocab);

// Total hypothesis tokens over total reference tokens, pairs matched by id.
double LengthRatio(const Corpus& hypotheses, const Corpus& references);

nlohmann::json ToJson(const CoverageReport& report);
nlohmann::json ToJson(const InDomainWordStats& stats);
nlohmann::json ToJson(const AccuracyResult& result);

}  // namespace alsel

#endif  // ALSEL_ANALYZE_H_

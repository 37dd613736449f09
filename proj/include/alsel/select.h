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

// Budgeted selection of sentences and phrases for annotation.
//
// Every strategy ranks its candidates once and then takes them greedily
// while the pool's spend is still below the pool budget, so the last item
// taken may overshoot. Removing that last item always brings the spend
// strictly under budget.
//
// Tie-breaks: sentences by ascending id; phrases by shorter length, then
// lexicographic token order.

#ifndef ALSEL_SELECT_H_
#define ALSEL_SELECT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "alsel/corpus.h"
#include "alsel/embed.h"
#include "alsel/ngram.h"
#include "json.hpp"

namespace alsel {

struct SelectionBudget {
  std::int64_t total = 0;
  std::int64_t sentence_share = 0;
  std::int64_t phrase_share = 0;
  std::int64_t spent_sentence = 0;
  std::int64_t spent_phrase = 0;
};

// Even split with the odd word going to sentences: ceil(B/2), floor(B/2).
SelectionBudget SplitBudget(std::int64_t total);

struct SelectedSentence {
  SentenceId id = 0;
  double score = 0.0;
  std::int64_t cost = 0;
};

struct SelectedPhrase {
  Phrase phrase;
  double score = 0.0;
  std::int64_t cost = 0;
};

struct SelectionResult {
  std::string strategy;
  std::uint64_t seed = 0;
  SelectionBudget budget;
  // In selection order.
  std::vector<SelectedSentence> sentences;
  std::vector<SelectedPhrase> phrases;
  // The candidate pool ran out before the budget was reached.
  bool exhausted = false;
  // Candidates dropped because they could not be scored.
  std::int64_t skipped = 0;
};

// Number of leading items (with the given costs) taken by the greedy loop
// "while spent < budget: take next".
std::size_t TakeWithinBudget(std::span<const std::int64_t> costs,
                             std::int64_t budget);

// (sum - last) < budget, or true for an empty selection.
bool WithinOvershootBound(std::span<const std::int64_t> costs,
                          std::int64_t budget);

SelectionResult SelectRandomSentences(const Corpus& unlabeled,
                                      std::int64_t budget, std::uint64_t seed);

struct CsseOptions {
  DistanceMode mode = DistanceMode::kLiteral;
  int workers = 1;
};

// `scorer` pairs the unlabeled embeddings (left) with the labeled subset
// (right). Scores are computed once; sentences that cannot be scored are
// skipped and counted.
SelectionResult SelectCsse(const Corpus& unlabeled, const RatioScorer& scorer,
                           std::int64_t budget, const CsseOptions& options);

// Per-sentence uncertainty scores from an external round-trip scorer.
using SentenceScores = std::map<SentenceId, double>;

// "id TAB score" lines.
SentenceScores ParseScores(std::istream& in);
SentenceScores LoadScores(const std::filesystem::path& path);
void WriteScores(std::ostream& out, const SentenceScores& scores);

// Sentence BLEU of each sentence against its round-trip reconstruction,
// keyed by id. Sentences missing from `round_trip` get no score.
SentenceScores RoundTripBleuScores(const Corpus& unlabeled,
                                   const Corpus& round_trip);

// Lowest score first. Throws ConfigError listing ids without a score.
SelectionResult SelectRttl(const Corpus& unlabeled,
                           const SentenceScores& scores, std::int64_t budget);

// Phrases that may never be selected (e.g. ones the oracle cannot translate).
using PhraseSet = std::unordered_set<Phrase>;

SelectionResult SelectRandomPhrases(const OccurrenceIndex& unlabeled,
                                    const OccurrenceIndex& exclude,
                                    std::int64_t budget, std::uint64_t seed,
                                    const PhraseSet* blocked = nullptr);

// Most frequent unlabeled phrases absent from the labeled index.
SelectionResult SelectNgf(const OccurrenceIndex& unlabeled,
                          const OccurrenceIndex& labeled, std::int64_t budget,
                          const PhraseSet* blocked = nullptr);

// SelectNgf restricted to the semi-maximal phrases of `unlabeled`.
SelectionResult SelectNgfSmp(const OccurrenceIndex& unlabeled,
                             const OccurrenceIndex& labeled,
                             std::int64_t budget,
                             const PhraseSet* blocked = nullptr);

using PoolSelector = std::function<SelectionResult(std::int64_t budget)>;
// Receives the sentence pool's result so phrases can be drawn from U \ S.
using PhrasePoolSelector = std::function<SelectionResult(
    std::int64_t budget, const SelectionResult& sentences)>;

// Runs `sentences` under ceil(B/2), then `phrases` under floor(B/2).
SelectionResult SelectHybrid(std::int64_t budget, const PoolSelector& sentences,
                             const PhrasePoolSelector& phrases);

// `count` ids drawn uniformly without replacement (all of them when count
// is at least ids.size()), returned in ascending order.
std::vector<SentenceId> SubsampleIds(std::span<const SentenceId> ids,
                                     std::size_t count, std::uint64_t seed);

// One JSON record per selected item:
//   {"kind":"sentence","id":..,"score":..,"cost":..,"rank":..}
//   {"kind":"phrase","tokens":"..","score":..,"cost":..,"rank":..}
void WriteSelectionJsonl(std::ostream& out, const SelectionResult& result);
// Restores the item lists; strategy metadata lives in the summary.
SelectionResult ReadSelectionJsonl(std::istream& in);
nlohmann::json SelectionSummary(const SelectionResult& result);

}  // namespace alsel

#endif  // ALSEL_SELECT_H_

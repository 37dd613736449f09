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

// Phrase extraction and counting up to a fixed length, plus the semi-order
// relation used to drop phrases that mostly occur inside a longer phrase.

#ifndef ALSEL_NGRAM_H_
#define ALSEL_NGRAM_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "alsel/corpus.h"

namespace alsel {

struct Occurrence {
  SentenceId sentence = 0;
  std::uint32_t start = 0;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

// Every contiguous span of length 1..max_n in a corpus, with its positions.
// Overlapping occurrences count individually ("a a a" holds "a a" twice).
class OccurrenceIndex {
 public:
  explicit OccurrenceIndex(int max_n);

  int max_n() const { return max_n_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // occ(p): number of stored occurrences, 0 when absent.
  std::int64_t Count(const Phrase& p) const;
  bool Contains(const Phrase& p) const { return entries_.contains(p); }
  // Empty when absent.
  std::span<const Occurrence> Positions(const Phrase& p) const;

  // Throws ArgumentError if the phrase is empty or longer than max_n.
  void Add(const Phrase& p, Occurrence where);

  const std::unordered_map<Phrase, std::vector<Occurrence>>& entries() const {
    return entries_;
  }

  // Descending count, then lexicographic by token sequence.
  std::vector<Phrase> SortedPhrases() const;

 private:
  int max_n_;
  std::unordered_map<Phrase, std::vector<Occurrence>> entries_;
};

// Throws ArgumentError when max_n < 1.
OccurrenceIndex ExtractNgrams(std::span<const Sentence> sentences, int max_n);
inline OccurrenceIndex ExtractNgrams(const Corpus& corpus, int max_n) {
  return ExtractNgrams(corpus.sentences(), max_n);
}

// "phrase TAB count" lines in SortedPhrases() order.
void WriteIndexTsv(std::ostream& out, const OccurrenceIndex& index);

// True iff `inner` is a contiguous strict substring of `outer`.
bool IsStrictSubstring(std::span<const std::string> inner,
                       std::span<const std::string> outer);

// p is semi-ordered under p' iff p is a strict substring of p' and
// occ(p') > occ(p) / 2, compared exactly as 2 * occ(p') > occ(p).
bool SemiOrder(const Phrase& p, const Phrase& p_prime,
               const OccurrenceIndex& index);

class SemiMaximalSet {
 public:
  bool Contains(const Phrase& p) const { return phrases_.contains(p); }
  std::size_t size() const { return phrases_.size(); }
  const std::unordered_set<Phrase>& phrases() const { return phrases_; }
  void Insert(Phrase p) { phrases_.insert(std::move(p)); }

 private:
  std::unordered_set<Phrase> phrases_;
};

// Phrases of `index` with no semi-ordered superstring among the index's
// phrases. Superstrings are limited to the index's max_n.
SemiMaximalSet ComputeSemiMaximalSet(const OccurrenceIndex& index);

// A superstring p' in the index with SemiOrder(p, p'), choosing the shortest
// and then lexicographically smallest; nullopt when p is semi-maximal.
std::optional<Phrase> FindSemiOrderWitness(const Phrase& p,
                                           const OccurrenceIndex& index);

}  // namespace alsel

#endif  // ALSEL_NGRAM_H_

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

// IBM Model 1 word alignment (source -> target, with a NULL source word),
// Pharaoh-format alignment IO and source-span to target-span projection.

#ifndef ALSEL_ALIGN_H_
#define ALSEL_ALIGN_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alsel/corpus.h"

namespace alsel {

inline constexpr std::string_view kNullToken = "<NULL>";

// t(target | source). Each source row sums to one over the targets it
// co-occurred with in training; everything else has probability zero.
class TranslationTable {
 public:
  TranslationTable() = default;

  double Prob(std::string_view source, std::string_view target) const;
  bool HasSource(std::string_view source) const;
  // Row entries sorted by target token.
  std::vector<std::pair<std::string, double>> Row(
      std::string_view source) const;
  // Highest-probability target; ties by lexicographic target.
  std::optional<std::string> BestTranslation(std::string_view source) const;

  std::size_t source_vocab_size() const { return source_vocab_.size(); }
  std::size_t target_vocab_size() const { return target_vocab_.size(); }

  // "src TAB tgt TAB prob", sorted by source then target.
  void WriteTsv(std::ostream& out) const;
  static TranslationTable ReadTsv(std::istream& in);

 private:
  friend class Ibm1Trainer;

  std::int32_t SourceIndex(std::string_view s) const;
  std::int32_t TargetIndex(std::string_view t) const;
  void Set(const std::string& source, const std::string& target, double p);

  std::vector<std::string> source_vocab_;
  std::vector<std::string> target_vocab_;
  std::unordered_map<std::string, std::int32_t> source_index_;
  std::unordered_map<std::string, std::int32_t> target_index_;
  // rows_[source] = (target index, prob) sorted by target index.
  std::vector<std::vector<std::pair<std::int32_t, double>>> rows_;
};

struct Ibm1Options {
  int iterations = 5;
  int workers = 1;
};

struct Ibm1Result {
  TranslationTable table;
  // Corpus log-likelihood of the initial table and after each iteration
  // (iterations + 1 values), up to the constant length terms.
  std::vector<double> log_likelihoods;
};

// EM from a uniform table. Throws ArgumentError on an empty corpus or
// iterations < 1. Results do not depend on options.workers.
Ibm1Result TrainIbm1(const ParallelCorpus& corpus, const Ibm1Options& options);

struct AlignmentLink {
  std::uint32_t source = 0;
  std::uint32_t target = 0;

  friend bool operator==(const AlignmentLink&, const AlignmentLink&) = default;
  friend auto operator<=>(const AlignmentLink&,
                          const AlignmentLink&) = default;
};

// Sorted by (source, target), no duplicates.
using AlignmentLinks = std::vector<AlignmentLink>;

// Links every target position to its most probable source word; ties go to
// the lowest source index. Targets whose best source is NULL (strictly more
// probable than every word) or that have zero probability everywhere stay
// unlinked.
AlignmentLinks Align(std::span<const std::string> source,
                     std::span<const std::string> target,
                     const TranslationTable& table);

// Align() in either direction. With `reverse`, `table` holds
// t(source | target) and the resulting links are flipped back to
// (source, target) order.
AlignmentLinks AlignPair(const SentencePair& pair, const TranslationTable& table,
                         bool reverse = false);

// Same ids with source and target exchanged.
ParallelCorpus Swapped(const ParallelCorpus& corpus);

// Aligns every pair of `corpus`, in pair order.
std::vector<AlignmentLinks> AlignCorpus(const ParallelCorpus& corpus,
                                        const TranslationTable& table,
                                        int workers = 1);

// Parses "i-j i-j ..." and validates indices against the sentence lengths.
// ParseError::position() is the byte offset of the offending token.
AlignmentLinks ParsePharaoh(std::string_view line, std::size_t source_len,
                            std::size_t target_len);
std::string FormatPharaoh(const AlignmentLinks& links);

// One Pharaoh line per pair of `corpus`, in the same order.
std::vector<AlignmentLinks> LoadPharaohFile(const std::filesystem::path& path,
                                            const ParallelCorpus& corpus);

// Inclusive target interval.
struct TargetSpan {
  std::uint32_t first = 0;
  std::uint32_t last = 0;

  std::uint32_t size() const { return last - first + 1; }
  friend bool operator==(const TargetSpan&, const TargetSpan&) = default;
};

// Convex hull of the targets linked to source positions
// [source_begin, source_begin + source_len); nullopt when none are linked.
std::optional<TargetSpan> AlignedTargetSpan(const AlignmentLinks& links,
                                            std::size_t source_begin,
                                            std::size_t source_len);

// AlignedTargetSpan, additionally rejecting hulls that contain a target
// linked to a source position outside the span.
std::optional<TargetSpan> ConsistentTargetSpan(const AlignmentLinks& links,
                                               std::size_t source_begin,
                                               std::size_t source_len);

}  // namespace alsel

#endif  // ALSEL_ALIGN_H_

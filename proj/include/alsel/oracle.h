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

// Simulated translator backed by a reference parallel corpus whose sources
// include every unlabeled sentence. Sentences are looked up by id; phrases
// are translated by aligning every reference pair that contains them and
// taking a majority vote over the aligned target spans.

#ifndef ALSEL_ORACLE_H_
#define ALSEL_ORACLE_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "alsel/align.h"
#include "alsel/corpus.h"
#include "alsel/ngram.h"
#include "json.hpp"

namespace alsel {

struct OracleResponse {
  enum class Kind { kSentence, kPhrase };
  Kind kind = Kind::kSentence;
  SentenceId id = 0;  // sentences only
  Tokens source;
  Tokens target;
  // Reference pairs supporting the translation. For phrases: the
  // occurrences that voted for the winning span.
  std::vector<SentenceId> provenance;
  std::int64_t votes = 0;
};

// Throws ArgumentError on duplicate ids and OracleGapError listing every id
// missing from `reference`.
std::vector<OracleResponse> TranslateSentences(
    std::span<const SentenceId> ids, const ParallelCorpus& reference);

struct DroppedPhrase {
  Phrase phrase;
  std::string reason;  // "absent-from-reference" or "no-aligned-span"
};

struct PhraseTranslation {
  // Same order as the input phrases, minus drops.
  std::vector<OracleResponse> responses;
  std::vector<DroppedPhrase> dropped;
};

// Word alignment for a reference pair, by position in reference.pairs().
using ReferenceAligner = std::function<AlignmentLinks(std::size_t row)>;

// Aligner that runs Model 1 with `table` on demand.
ReferenceAligner TableAligner(const ParallelCorpus& reference,
                              const TranslationTable& table,
                              bool reverse = false);
// Aligner over precomputed links (e.g. loaded from a Pharaoh file).
ReferenceAligner FixedAligner(std::vector<AlignmentLinks> links);

// Votes count one per occurrence. Ties: most votes, then the shorter span,
// then lexicographic target tokens.
PhraseTranslation TranslatePhrases(std::span<const Phrase> phrases,
                                   const ParallelCorpus& reference,
                                   const ReferenceAligner& aligner,
                                   int workers = 1);

// "source TAB target" lines.
void WriteResponsesTsv(std::ostream& out,
                       std::span<const OracleResponse> responses);
// One JSON provenance record per response.
void WriteProvenanceJsonl(std::ostream& out,
                          std::span<const OracleResponse> responses);
std::vector<OracleResponse> ReadProvenanceJsonl(std::istream& in);

nlohmann::json DroppedJson(std::span<const DroppedPhrase> dropped);

}  // namespace alsel

#endif  // ALSEL_ORACLE_H_

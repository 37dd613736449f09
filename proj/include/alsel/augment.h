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

// Synthetic parallel data from annotated phrase pairs. For an unlabeled
// sentence x holding annotated phrases, the most similar labeled pair
// (x*, y*) is retrieved and the phrases are either switched into it or
// appended to it.

#ifndef ALSEL_AUGMENT_H_
#define ALSEL_AUGMENT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alsel/align.h"
#include "alsel/corpus.h"
#include "alsel/embed.h"
#include "alsel/lm.h"
#include "json.hpp"

namespace alsel {

struct PhrasePair {
  Phrase source;
  Phrase target;

  friend bool operator==(const PhrasePair&, const PhrasePair&) = default;
};

enum class Recipe { kSwitch, kContextualize };

std::string RecipeName(Recipe r);

struct SyntheticPair {
  Tokens source;
  Tokens target;
  Recipe recipe = Recipe::kSwitch;
  SentenceId unlabeled_id = 0;  // x
  SentenceId retrieved_id = 0;  // (x*, y*)
  PhrasePair phrase;
  // Switch only: source window start and the replaced target span.
  std::size_t position = 0;
  TargetSpan target_span;
  // Contextualize only.
  std::string separator;
  double lm_score = 0.0;
};

// x*[<i] + p + x*[>=i+|p|]. Throws ArgumentError unless i + |p| <= |x*|
// and p is non-empty.
Tokens Switch(std::span<const std::string> x_star, const Phrase& p,
              std::size_t i);

// x* + p, or x* + separator + p with a non-empty separator. Throws
// ArgumentError on an empty x* or p.
Tokens Contextualize(std::span<const std::string> x_star, const Phrase& p,
                     std::string_view separator = "");

// Labeled pair most similar to `x`: argmax ratio, ties by ascending id.
SentenceId RetrieveContext(SentenceId x, const RatioScorer& scorer);

struct SwitchOutcome {
  std::optional<SyntheticPair> pair;
  std::int64_t candidates = 0;       // (phrase, position) pairs enumerated
  std::int64_t unresolved_span = 0;  // skipped: no consistent target span
};

// Searches every annotated phrase and every position 0 <= i < |x*| - |p|
// jointly; the highest LM score wins, ties to the first candidate.
SwitchOutcome BestSwitch(SentenceId x, std::span<const PhrasePair> annotated,
                         const SentencePair& retrieved,
                         const AlignmentLinks& retrieved_links,
                         const NGramLM& lm);

// Throws ArgumentError when `annotated` is empty.
SyntheticPair BestContextualize(SentenceId x,
                                std::span<const PhrasePair> annotated,
                                const SentencePair& retrieved,
                                const NGramLM& lm,
                                std::string_view separator = "");

// Rebuilds (source, target) from the recipe fields alone.
std::pair<Tokens, Tokens> Replay(const SyntheticPair& pair,
                                 const SentencePair& retrieved);

// Phrase pairs whose source occurs contiguously in `sentence`, in input order.
std::vector<PhrasePair> AnnotatedPhrasesIn(std::span<const std::string> sentence,
                                           std::span<const PhrasePair> pairs);

struct AugmentOptions {
  bool do_switch = true;
  bool do_contextualize = true;
  std::string separator;
  // The table holds t(source | target); see AlignPair.
  bool reverse_alignment = false;
  int workers = 1;
};

struct AugmentReport {
  // In unlabeled-corpus order; switch before contextualize per sentence.
  std::vector<SyntheticPair> pairs;
  std::int64_t sentences = 0;  // unlabeled sentences holding a phrase
  std::int64_t retrieval_failures = 0;
  std::int64_t switch_without_candidate = 0;
  std::int64_t unresolved_span = 0;
};

// `scorer` pairs the unlabeled embeddings (left) with `labeled` (right).
AugmentReport Augment(const Corpus& unlabeled,
                      std::span<const PhrasePair> phrases,
                      const ParallelCorpus& labeled, const RatioScorer& scorer,
                      const TranslationTable& table, const NGramLM& lm,
                      const AugmentOptions& options);

nlohmann::json RecipeJson(const SyntheticPair& pair);
SyntheticPair SyntheticFromJson(const nlohmann::json& j);

void WriteSyntheticTsv(std::ostream& out, std::span<const SyntheticPair> pairs);
void WriteSyntheticJsonl(std::ostream& out,
                         std::span<const SyntheticPair> pairs);

}  // namespace alsel

#endif  // ALSEL_AUGMENT_H_

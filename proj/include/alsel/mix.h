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

// Fine-tuning manifest assembly: annotated sentences and phrases, labeled
// pairs drawn from L' (sampled or retrieved) and synthetic pairs.

#ifndef ALSEL_MIX_H_
#define ALSEL_MIX_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "alsel/augment.h"
#include "alsel/corpus.h"
#include "alsel/embed.h"
#include "alsel/oracle.h"
#include "json.hpp"

namespace alsel {

enum class Origin {
  kAnnotatedSentence,
  kAnnotatedPhrase,
  kRetrieved,
  kSampled,
  kSyntheticSwitch,
  kSyntheticContext,
};
inline constexpr std::size_t kOriginCount = 6;

std::string OriginName(Origin o);
Origin ParseOrigin(std::string_view name);

struct ManifestEntry {
  Tokens source;
  Tokens target;
  Origin origin = Origin::kAnnotatedSentence;
  // Sentence or pair id in the artifact the entry came from; for phrases the
  // rank within L_p.
  std::int64_t provenance = 0;
};

struct MixManifest {
  std::vector<ManifestEntry> entries;
  std::array<std::int64_t, kOriginCount> counts{};
  // Number of retrieved or sampled pairs.
  std::int64_t m = 0;
  std::int64_t dedupe_removed = 0;

  std::int64_t Count(Origin o) const {
    return counts[static_cast<std::size_t>(o)];
  }
};

// M pairs uniformly without replacement, in the drawn order. Throws
// ArgumentError when m > |L'|.
std::vector<SentencePair> SampleRandom(const ParallelCorpus& labeled,
                                       std::size_t m, std::uint64_t seed);

struct RetrievalResult {
  std::vector<SentencePair> pairs;
  std::int64_t skipped = 0;  // degenerate embeddings
};

// Ranks L' by nearest-neighbour ratio to U, most similar first, ties by
// ascending id, and keeps the top M. `scorer` pairs the L' embeddings
// (left) with the unlabeled embeddings (right). Throws ArgumentError when
// fewer than M pairs can be scored.
RetrievalResult RetrieveSimilar(const ParallelCorpus& labeled,
                                const RatioScorer& scorer, std::size_t m,
                                int workers = 1);

// Default M: |L_p| when L_p came from NGF-SMP, else the size of an NGF-SMP
// selection at the same budget (`ngf_smp_size`), unless `override_m` >= 0.
std::size_t ResolveMixSize(bool phrase_strategy_is_ngf_smp,
                           std::size_t phrase_pairs, std::size_t ngf_smp_size,
                           std::int64_t override_m = -1);

struct AssembleInput {
  std::span<const OracleResponse> sentences;
  std::span<const OracleResponse> phrases;
  std::span<const SentencePair> mixed;
  Origin mixed_origin = Origin::kRetrieved;
  std::span<const SyntheticPair> synthetic;
  bool dedupe = false;
};

// Order: L_s, L_p, L_r, synthetic. With dedupe, later exact (source,
// target) duplicates are removed. Throws ArgumentError when the result
// would be empty.
MixManifest Assemble(const AssembleInput& input);

void WriteManifestJsonl(std::ostream& out, const MixManifest& manifest);
void WriteManifestTsv(std::ostream& out, const MixManifest& manifest);
nlohmann::json ManifestSummary(const MixManifest& manifest);

// Freeze file: one {"id":..} record per retrieved pair, in order.
void WriteFreezeFile(const std::filesystem::path& path,
                     std::span<const SentencePair> pairs);
std::vector<SentenceId> ReadFreezeFile(const std::filesystem::path& path);

}  // namespace alsel

#endif  // ALSEL_MIX_H_

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

// Pipeline stages. Each stage reads the configured inputs plus the files
// earlier stages wrote into the run directory, and writes its own files
// there. Nothing is handed from one stage to the next in memory.
//
// Run directory layout:
//   ngrams.tsv, semimaximal.tsv              extract
//   selection.jsonl, selection.json          select
//   ttable.tsv, l_s.tsv, l_p.tsv,
//   oracle.jsonl, oracle.json                oracle
//   synthetic.tsv, synthetic.jsonl,
//   augment.json                             augment
//   mixed.jsonl, manifest.jsonl,
//   manifest.tsv, mix.json                   mix
//   analysis.json                            analyze

#ifndef ALSEL_STAGES_H_
#define ALSEL_STAGES_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "alsel/align.h"
#include "alsel/config.h"
#include "alsel/corpus.h"
#include "alsel/embed.h"
#include "alsel/lm.h"
#include "alsel/ngram.h"
#include "alsel/select.h"
#include "json.hpp"

namespace alsel {

// Lazily loaded inputs of one configuration.
class Inputs {
 public:
  explicit Inputs(RunConfig config);
  ~Inputs();

  const RunConfig& config() const { return config_; }

  const Corpus& Unlabeled();
  const ParallelCorpus& Labeled();
  // L': the seeded labeled subset used for similarity scoring.
  const ParallelCorpus& LabeledPrime();
  const ParallelCorpus& Reference();
  // Throws ConfigError when no test set is configured.
  const ParallelCorpus& Test();
  const EmbeddingStore& UnlabeledEmbeddings();
  const EmbeddingStore& LabeledPrimeEmbeddings();
  // n-grams of the labeled sources, up to max_n.
  const OccurrenceIndex& LabeledIndex();
  // U (left) against L' (right).
  const RatioScorer& SelectionScorer();
  // L' (left) against U (right).
  const RatioScorer& RetrievalScorer();
  const NGramLM& LanguageModel();

 private:
  struct Cache;
  RunConfig config_;
  std::unique_ptr<Cache> cache_;
};

struct StageOutput {
  std::string stage;
  nlohmann::json summary = nlohmann::json::object();
  // Files written, relative to the run directory.
  std::vector<std::string> files;
};

StageOutput StageExtract(Inputs& in, const std::filesystem::path& run_dir);

// Runs the configured strategy at `budget`; `blocked` phrases are never
// selected.
SelectionResult RunSelection(Inputs& in, std::int64_t budget,
                             const PhraseSet* blocked = nullptr);
StageOutput StageSelect(Inputs& in, const std::filesystem::path& run_dir,
                        std::int64_t budget,
                        const PhraseSet* blocked = nullptr);

// Alignment table for the oracle and augmentation: Model 1 over L plus the
// reference corpus, in the configured direction.
TranslationTable TrainAlignmentTable(Inputs& in);

// With refund_dropped, phrases the oracle cannot translate are blocked and
// the selection is redone (rewriting the selection files) until no phrase
// is dropped.
StageOutput StageOracle(Inputs& in, const std::filesystem::path& run_dir,
                        std::int64_t budget);
StageOutput StageAugment(Inputs& in, const std::filesystem::path& run_dir);
StageOutput StageMix(Inputs& in, const std::filesystem::path& run_dir,
                     std::int64_t budget);
StageOutput StageAnalyze(Inputs& in, const std::filesystem::path& run_dir);

// Helpers shared with the CLI.
void WriteTextFile(const std::filesystem::path& path, const std::string& text);
nlohmann::json ReadJsonFile(const std::filesystem::path& path);

}  // namespace alsel

#endif  // ALSEL_STAGES_H_

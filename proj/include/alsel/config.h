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

// Run configuration. Stored as a JSON object whose keys are the field names
// below; unknown keys are rejected. Relative paths are resolved against the
// directory of the config file.

#ifndef ALSEL_CONFIG_H_
#define ALSEL_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace alsel {

struct RunConfig {
  // Inputs.
  std::string unlabeled;             // U, one sentence per line
  std::string labeled;               // L, "source TAB target"
  std::string reference;             // oracle reference, ids aligned with U
  std::string test;                  // in-domain test set (TSV), optional
  std::string unlabeled_embeddings;  // "dim=D" header, "id TAB v1 v2 .."
  std::string labeled_embeddings;
  std::string rttl_scores;     // "id TAB score"
  std::string rttl_roundtrip;  // round-trip outputs, scored by sentence BLEU
  std::string alignments;      // Pharaoh links for the reference corpus
  std::string freeze_file;     // fixed L_r ids, JSONL
  std::string output_dir = "runs";

  // random-sent | csse | rttl | random-phrase | ngf | ngf-smp | hybrid
  std::string strategy = "hybrid";
  std::string sentence_strategy = "csse";    // hybrid only
  std::string phrase_strategy = "ngf-smp";   // hybrid only
  std::vector<std::int64_t> budgets = {200};
  std::uint64_t seed = 1;
  int k = 4;
  int max_n = 4;
  std::int64_t labeled_subset_size = 10000;
  std::string dist_mode = "literal";  // literal | nn
  std::string neighborhood = "cross";  // cross | same

  std::string mixing = "retrieved";  // retrieved | sampled | none
  std::int64_t mix_size = -1;        // -1: default size rule
  bool dedupe = false;

  std::string augmentation = "none";  // none | switch | contextualize | both
  int lm_order = 3;
  double lm_add_k = 0.1;
  std::string context_separator;
  int ibm1_iterations = 5;
  std::string alignment_direction = "source-target";  // or target-source

  bool refund_dropped = false;
  bool simulate_only = false;
  int workers = 1;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json ToJson(const RunConfig& config);
// Throws ConfigError on unknown keys or mistyped values.
RunConfig ConfigFromJson(const nlohmann::json& j);
// Reads and parses; relative input paths become relative to the file.
RunConfig LoadConfig(const std::filesystem::path& path);

// Sets one field from its command-line text. Lists take comma-separated
// values; booleans take true/false/1/0. Throws ConfigError.
void ApplyOverride(RunConfig& config, const std::string& key,
                   const std::string& value);

// Every problem found, empty when the config is usable. Reads input headers
// but never touches the output directory.
std::vector<std::string> ValidateConfig(const RunConfig& config);

bool UsesSentenceStrategy(const RunConfig& config, const std::string& name);
bool UsesPhraseSelection(const RunConfig& config);
bool NeedsEmbeddings(const RunConfig& config);

}  // namespace alsel

#endif  // ALSEL_CONFIG_H_

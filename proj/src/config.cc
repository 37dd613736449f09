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

#include "alsel/config.h"

#include <algorithm>
#include <set>

#include "alsel/corpus.h"
#include "alsel/embed.h"
#include "alsel/errors.h"

namespace alsel {

namespace {

const std::set<std::string> kSentenceStrategies = {"random-sent", "csse",
                                                   "rttl"};
const std::set<std::string> kPhraseStrategies = {"random-phrase", "ngf",
                                                 "ngf-smp"};

// Applies `fn` to every (key, member) pair so serialization and parsing
// cannot drift apart.
template <typename Config, typename Fn>
void VisitFields(Config& c, Fn&& fn) {
  fn("unlabeled", c.unlabeled);
  fn("labeled", c.labeled);
  fn("reference", c.reference);
  fn("test", c.test);
  fn("unlabeled_embeddings", c.unlabeled_embeddings);
  fn("labeled_embeddings", c.labeled_embeddings);
  fn("rttl_scores", c.rttl_scores);
  fn("rttl_roundtrip", c.rttl_roundtrip);
  fn("alignments", c.alignments);
  fn("freeze_file", c.freeze_file);
  fn("output_dir", c.output_dir);
  fn("strategy", c.strategy);
  fn("sentence_strategy", c.sentence_strategy);
  fn("phrase_strategy", c.phrase_strategy);
  fn("budgets", c.budgets);
  fn("seed", c.seed);
  fn("k", c.k);
  fn("max_n", c.max_n);
  fn("labeled_subset_size", c.labeled_subset_size);
  fn("dist_mode", c.dist_mode);
  fn("neighborhood", c.neighborhood);
  fn("mixing", c.mixing);
  fn("mix_size", c.mix_size);
  fn("dedupe", c.dedupe);
  fn("augmentation", c.augmentation);
  fn("lm_order", c.lm_order);
  fn("lm_add_k", c.lm_add_k);
  fn("context_separator", c.context_separator);
  fn("ibm1_iterations", c.ibm1_iterations);
  fn("alignment_direction", c.alignment_direction);
  fn("refund_dropped", c.refund_dropped);
  fn("simulate_only", c.simulate_only);
  fn("workers", c.workers);
}

void CheckFile(const std::string& field, const std::string& path,
               std::vector<std::string>* failures) {
  if (path.empty()) {
    failures->push_back(field + ": required but not set");
  } else if (!std::filesystem::is_regular_file(path)) {
    failures->push_back(field + ": no such file '" + path + "'");
  }
}

void CheckOneOf(const std::string& field, const std::string& value,
                const std::set<std::string>& allowed,
                std::vector<std::string>* failures) {
  if (allowed.contains(value)) return;
  std::string list;
  for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
  failures->push_back(field + ": '" + value + "' is not one of " + list);
}

}  // namespace

nlohmann::json ToJson(const RunConfig& config) {
  nlohmann::json j = nlohmann::json::object();
  VisitFields(config, [&](const char* key, const auto& value) { j[key] = value; });
  return j;
}

RunConfig ConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig config;
  std::set<std::string> known;
  VisitFields(config, [&](const char* key, auto& value) {
    known.insert(key);
    auto it = j.find(key);
    if (it == j.end()) return;
    try {
      it->get_to(value);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
  });
  for (const auto& [key, unused] : j.items()) {
    if (!known.contains(key)) {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  return config;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  RunConfig config = ConfigFromJson(j);
  const auto base = path.parent_path();
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) {
      p = (base / p).lexically_normal().string();
    }
  };
  for (std::string* p :
       {&config.unlabeled, &config.labeled, &config.reference, &config.test,
        &config.unlabeled_embeddings, &config.labeled_embeddings,
        &config.rttl_scores, &config.rttl_roundtrip, &config.alignments,
        &config.freeze_file, &config.output_dir}) {
    resolve(*p);
  }
  return config;
}

bool UsesSentenceStrategy(const RunConfig& config, const std::string& name) {
  return config.strategy == name ||
         (config.strategy == "hybrid" && config.sentence_strategy == name);
}

bool UsesPhraseSelection(const RunConfig& config) {
  return config.strategy == "hybrid" ||
         kPhraseStrategies.contains(config.strategy);
}

bool NeedsEmbeddings(const RunConfig& config) {
  return UsesSentenceStrategy(config, "csse") ||
         (!config.simulate_only &&
          (config.mixing == "retrieved" || config.augmentation != "none"));
}

void ApplyOverride(RunConfig& config, const std::string& key,
                   const std::string& value) {
  nlohmann::json j = ToJson(config);
  if (!j.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  nlohmann::json& slot = j[key];
  auto bad = [&]() {
    return ConfigError("bad value '" + value + "' for " + key);
  };
  auto parse_int = [&](const std::string& text) -> std::int64_t {
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(text, &pos);
    } catch (const std::exception&) {
      throw bad();
    }
    if (pos != text.size()) throw bad();
    return v;
  };
  if (slot.is_string()) {
    slot = value;
  } else if (slot.is_boolean()) {
    if (value == "true" || value == "1") {
      slot = true;
    } else if (value == "false" || value == "0") {
      slot = false;
    } else {
      throw bad();
    }
  } else if (slot.is_number_unsigned()) {
    const std::int64_t v = parse_int(value);
    if (v < 0) throw bad();
    slot = static_cast<std::uint64_t>(v);
  } else if (slot.is_number_integer()) {
    slot = parse_int(value);
  } else if (slot.is_number_float()) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &pos);
    } catch (const std::exception&) {
      throw bad();
    }
    if (pos != value.size()) throw bad();
    slot = v;
  } else if (slot.is_array()) {
    nlohmann::json list = nlohmann::json::array();
    std::size_t start = 0;
    while (start <= value.size()) {
      auto comma = value.find(',', start);
      if (comma == std::string::npos) comma = value.size();
      list.push_back(parse_int(value.substr(start, comma - start)));
      start = comma + 1;
    }
    slot = list;
  }
  config = ConfigFromJson(j);
}

std::vector<std::string> ValidateConfig(const RunConfig& config) {
  std::vector<std::string> failures;
  std::set<std::string> all = kSentenceStrategies;
  all.insert(kPhraseStrategies.begin(), kPhraseStrategies.end());
  all.insert("hybrid");
  CheckOneOf("strategy", config.strategy, all, &failures);
  if (config.strategy == "hybrid") {
    CheckOneOf("sentence_strategy", config.sentence_strategy,
               kSentenceStrategies, &failures);
    CheckOneOf("phrase_strategy", config.phrase_strategy, kPhraseStrategies,
               &failures);
  }
  CheckOneOf("dist_mode", config.dist_mode, {"literal", "nn"}, &failures);
  CheckOneOf("neighborhood", config.neighborhood, {"cross", "same"},
             &failures);
  CheckOneOf("mixing", config.mixing, {"retrieved", "sampled", "none"},
             &failures);
  CheckOneOf("augmentation", config.augmentation,
             {"none", "switch", "contextualize", "both"}, &failures);
  CheckOneOf("alignment_direction", config.alignment_direction,
             {"source-target", "target-source"}, &failures);

  if (config.budgets.empty()) failures.push_back("budgets: empty list");
  for (auto b : config.budgets) {
    if (b <= 0) {
      failures.push_back("budgets: " + std::to_string(b) + " is not positive");
    }
  }
  std::set<std::int64_t> distinct(config.budgets.begin(), config.budgets.end());
  if (distinct.size() != config.budgets.size()) {
    failures.push_back("budgets: duplicate entries");
  }
  if (config.max_n < 1) failures.push_back("max_n: must be >= 1");
  if (config.k < 1) failures.push_back("k: must be >= 1");
  if (config.labeled_subset_size < 1) {
    failures.push_back("labeled_subset_size: must be >= 1");
  }
  if (config.workers < 1) failures.push_back("workers: must be >= 1");
  if (config.lm_order < 1) failures.push_back("lm_order: must be >= 1");
  if (!(config.lm_add_k > 0.0)) failures.push_back("lm_add_k: must be > 0");
  if (config.ibm1_iterations < 1) {
    failures.push_back("ibm1_iterations: must be >= 1");
  }
  if (config.mix_size < -1) failures.push_back("mix_size: must be >= -1");
  if (config.output_dir.empty()) failures.push_back("output_dir: not set");
  if (config.context_separator.find_first_of(" \t\n\r") != std::string::npos) {
    failures.push_back("context_separator: must not contain whitespace");
  }

  CheckFile("unlabeled", config.unlabeled, &failures);
  CheckFile("labeled", config.labeled, &failures);
  if (!config.simulate_only) CheckFile("reference", config.reference, &failures);
  for (const auto& [field, path] :
       {std::pair{"test", &config.test}, {"alignments", &config.alignments}}) {
    if (!path->empty()) CheckFile(field, *path, &failures);
  }
  if (UsesSentenceStrategy(config, "rttl")) {
    if (config.rttl_scores.empty() && config.rttl_roundtrip.empty()) {
      failures.push_back("rttl_scores: required by strategy rttl");
    } else if (!config.rttl_scores.empty()) {
      CheckFile("rttl_scores", config.rttl_scores, &failures);
    } else {
      CheckFile("rttl_roundtrip", config.rttl_roundtrip, &failures);
    }
  }
  if (NeedsEmbeddings(config)) {
    const std::size_t before = failures.size();
    CheckFile("unlabeled_embeddings", config.unlabeled_embeddings, &failures);
    CheckFile("labeled_embeddings", config.labeled_embeddings, &failures);
    if (failures.size() == before) {
      try {
        const int du = ReadEmbeddingDim(config.unlabeled_embeddings);
        const int dl = ReadEmbeddingDim(config.labeled_embeddings);
        if (du != dl) {
          failures.push_back("embeddings: dimension mismatch (" +
                             std::to_string(du) + " vs " + std::to_string(dl) +
                             ")");
        }
      } catch (const Error& e) {
        failures.push_back(std::string("embeddings: ") + e.what());
      }
    }
  }
  return failures;
}

}  // namespace alsel

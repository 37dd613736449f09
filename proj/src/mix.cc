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

#include "alsel/mix.h"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <set>

#include "alsel/errors.h"
#include "alsel/parallel.h"

namespace alsel {

namespace {

constexpr std::array<std::string_view, kOriginCount> kOriginNames = {
    "annotated-sentence", "annotated-phrase",  "retrieved",
    "sampled",            "synthetic-switch", "synthetic-context"};

}  // namespace

std::string OriginName(Origin o) {
  return std::string(kOriginNames[static_cast<std::size_t>(o)]);
}

Origin ParseOrigin(std::string_view name) {
  for (std::size_t i = 0; i < kOriginCount; ++i) {
    if (kOriginNames[i] == name) return static_cast<Origin>(i);
  }
  throw ParseError("unknown origin '" + std::string(name) + "'", 0);
}

std::vector<SentencePair> SampleRandom(const ParallelCorpus& labeled,
                                       std::size_t m, std::uint64_t seed) {
  if (m > labeled.size()) {
    throw ArgumentError("cannot sample " + std::to_string(m) + " of " +
                        std::to_string(labeled.size()) + " pairs");
  }
  std::vector<std::size_t> order(labeled.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return labeled.pairs()[a].id < labeled.pairs()[b].id;
  });
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<SentencePair> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back(labeled.pairs()[order[i]]);
  return out;
}

RetrievalResult RetrieveSimilar(const ParallelCorpus& labeled,
                                const RatioScorer& scorer, std::size_t m,
                                int workers) {
  auto pairs = labeled.pairs();
  std::vector<std::optional<double>> score(pairs.size());
  ParallelFor(pairs.size(), workers, [&](std::size_t k) {
    try {
      score[k] = scorer.NearestSimilarity(pairs[k].id);
    } catch (const DegenerateError&) {
    } catch (const LookupError&) {
    }
  });
  std::vector<std::size_t> usable;
  RetrievalResult result;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (score[k]) {
      usable.push_back(k);
    } else {
      ++result.skipped;
    }
  }
  if (usable.size() < m) {
    throw ArgumentError("retrieval needs " + std::to_string(m) +
                        " pairs but only " + std::to_string(usable.size()) +
                        " can be scored (shortfall " +
                        std::to_string(m - usable.size()) + ")");
  }
  std::sort(usable.begin(), usable.end(), [&](std::size_t a, std::size_t b) {
    if (*score[a] != *score[b]) return *score[a] > *score[b];
    return pairs[a].id < pairs[b].id;
  });
  for (std::size_t i = 0; i < m; ++i) result.pairs.push_back(pairs[usable[i]]);
  return result;
}

std::size_t ResolveMixSize(bool phrase_strategy_is_ngf_smp,
                           std::size_t phrase_pairs, std::size_t ngf_smp_size,
                           std::int64_t override_m) {
  if (override_m >= 0) return static_cast<std::size_t>(override_m);
  return phrase_strategy_is_ngf_smp ? phrase_pairs : ngf_smp_size;
}

MixManifest Assemble(const AssembleInput& input) {
  MixManifest manifest;
  std::set<std::pair<Tokens, Tokens>> seen;
  auto add = [&](const Tokens& s, const Tokens& t, Origin o,
                 std::int64_t prov) {
    if (s.empty() || t.empty()) {
      throw ArgumentError("manifest entry with an empty side (" +
                          OriginName(o) + " " + std::to_string(prov) + ")");
    }
    if (input.dedupe && !seen.emplace(s, t).second) {
      ++manifest.dedupe_removed;
      return;
    }
    manifest.entries.push_back({s, t, o, prov});
    ++manifest.counts[static_cast<std::size_t>(o)];
  };
  for (const auto& r : input.sentences) {
    add(r.source, r.target, Origin::kAnnotatedSentence, r.id);
  }
  for (std::size_t i = 0; i < input.phrases.size(); ++i) {
    add(input.phrases[i].source, input.phrases[i].target,
        Origin::kAnnotatedPhrase, static_cast<std::int64_t>(i));
  }
  if (input.mixed_origin != Origin::kRetrieved &&
      input.mixed_origin != Origin::kSampled) {
    throw ArgumentError("mixed pairs must be retrieved or sampled");
  }
  for (const auto& p : input.mixed) {
    add(p.source, p.target, input.mixed_origin, p.id);
  }
  manifest.m = static_cast<std::int64_t>(input.mixed.size());
  for (const auto& s : input.synthetic) {
    add(s.source, s.target,
        s.recipe == Recipe::kSwitch ? Origin::kSyntheticSwitch
                                    : Origin::kSyntheticContext,
        s.unlabeled_id);
  }
  if (manifest.entries.empty() && manifest.dedupe_removed == 0) {
    throw ArgumentError("all manifest inputs are empty");
  }
  return manifest;
}

void WriteManifestJsonl(std::ostream& out, const MixManifest& manifest) {
  for (const auto& e : manifest.entries) {
    nlohmann::json j;
    j["source"] = JoinTokens(e.source);
    j["target"] = JoinTokens(e.target);
    j["origin"] = OriginName(e.origin);
    j["provenance"] = e.provenance;
    out << j.dump() << '\n';
  }
}

void WriteManifestTsv(std::ostream& out, const MixManifest& manifest) {
  for (const auto& e : manifest.entries) {
    out << JoinTokens(e.source) << '\t' << JoinTokens(e.target) << '\n';
  }
}

nlohmann::json ManifestSummary(const MixManifest& manifest) {
  nlohmann::json counts = nlohmann::json::object();
  for (std::size_t i = 0; i < kOriginCount; ++i) {
    counts[std::string(kOriginNames[i])] = manifest.counts[i];
  }
  return {{"entries", manifest.entries.size()},
          {"counts", counts},
          {"m", manifest.m},
          {"dedupe_removed", manifest.dedupe_removed}};
}

void WriteFreezeFile(const std::filesystem::path& path,
                     std::span<const SentencePair> pairs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& p : pairs) out << nlohmann::json{{"id", p.id}}.dump() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<SentenceId> ReadFreezeFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<SentenceId> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Tokenize(line)) continue;
    try {
      ids.push_back(nlohmann::json::parse(line).at("id").get<SentenceId>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ": line " + std::to_string(line_no) +
                           ": " + e.what(),
                       line_no);
    }
  }
  return ids;
}

}  // namespace alsel

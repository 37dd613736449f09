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

#include "alsel/augment.h"

#include <algorithm>
#include <ostream>

#include "alsel/errors.h"
#include "alsel/ngram.h"
#include "alsel/parallel.h"

namespace alsel {

std::string RecipeName(Recipe r) {
  return r == Recipe::kSwitch ? "switch" : "contextualize";
}

Tokens Switch(std::span<const std::string> x_star, const Phrase& p,
              std::size_t i) {
  if (p.empty()) throw ArgumentError("switch: empty phrase");
  if (i + p.size() > x_star.size()) {
    throw ArgumentError("switch: window [" + std::to_string(i) + ", " +
                        std::to_string(i + p.size()) +
                        ") out of bounds for length " +
                        std::to_string(x_star.size()));
  }
  Tokens out(x_star.begin(), x_star.end());
  std::copy(p.tokens.begin(), p.tokens.end(), out.begin() + i);
  return out;
}

Tokens Contextualize(std::span<const std::string> x_star, const Phrase& p,
                     std::string_view separator) {
  if (x_star.empty()) throw ArgumentError("contextualize: empty sentence");
  if (p.empty()) throw ArgumentError("contextualize: empty phrase");
  Tokens out(x_star.begin(), x_star.end());
  if (!separator.empty()) out.emplace_back(separator);
  out.insert(out.end(), p.tokens.begin(), p.tokens.end());
  return out;
}

SentenceId RetrieveContext(SentenceId x, const RatioScorer& scorer) {
  return scorer.BestMatch(x).id;
}

namespace {

Tokens SubstituteTarget(std::span<const std::string> y_star,
                        const TargetSpan& span, const Phrase& p_y) {
  Tokens out(y_star.begin(), y_star.begin() + span.first);
  out.insert(out.end(), p_y.tokens.begin(), p_y.tokens.end());
  out.insert(out.end(), y_star.begin() + span.last + 1, y_star.end());
  return out;
}

}  // namespace

SwitchOutcome BestSwitch(SentenceId x, std::span<const PhrasePair> annotated,
                         const SentencePair& retrieved,
                         const AlignmentLinks& retrieved_links,
                         const NGramLM& lm) {
  SwitchOutcome outcome;
  const std::size_t len = retrieved.source.size();
  for (const auto& pp : annotated) {
    const std::size_t plen = pp.source.size();
    if (plen == 0 || plen >= len) continue;
    for (std::size_t i = 0; i < len - plen; ++i) {
      ++outcome.candidates;
      auto span = ConsistentTargetSpan(retrieved_links, i, plen);
      if (!span) {
        ++outcome.unresolved_span;
        continue;
      }
      Tokens source = Switch(retrieved.source, pp.source, i);
      const double score = lm.LogProb(source);
      if (outcome.pair && !(score > outcome.pair->lm_score)) continue;
      SyntheticPair s;
      s.source = std::move(source);
      s.target = SubstituteTarget(retrieved.target, *span, pp.target);
      s.recipe = Recipe::kSwitch;
      s.unlabeled_id = x;
      s.retrieved_id = retrieved.id;
      s.phrase = pp;
      s.position = i;
      s.target_span = *span;
      s.lm_score = score;
      outcome.pair = std::move(s);
    }
  }
  return outcome;
}

SyntheticPair BestContextualize(SentenceId x,
                                std::span<const PhrasePair> annotated,
                                const SentencePair& retrieved,
                                const NGramLM& lm,
                                std::string_view separator) {
  if (annotated.empty()) {
    throw ArgumentError("contextualize: no annotated phrase pairs");
  }
  std::optional<SyntheticPair> best;
  for (const auto& pp : annotated) {
    Tokens source = Contextualize(retrieved.source, pp.source, separator);
    const double score = lm.LogProb(source);
    if (best && !(score > best->lm_score)) continue;
    SyntheticPair s;
    s.source = std::move(source);
    s.target = Contextualize(retrieved.target, pp.target, separator);
    s.recipe = Recipe::kContextualize;
    s.unlabeled_id = x;
    s.retrieved_id = retrieved.id;
    s.phrase = pp;
    s.separator = std::string(separator);
    s.lm_score = score;
    best = std::move(s);
  }
  return *best;
}

std::pair<Tokens, Tokens> Replay(const SyntheticPair& pair,
                                 const SentencePair& retrieved) {
  if (retrieved.id != pair.retrieved_id) {
    throw ArgumentError("replay: retrieved pair id mismatch");
  }
  if (pair.recipe == Recipe::kSwitch) {
    if (pair.target_span.last >= retrieved.target.size() ||
        pair.target_span.first > pair.target_span.last) {
      throw ArgumentError("replay: target span out of bounds");
    }
    return {Switch(retrieved.source, pair.phrase.source, pair.position),
            SubstituteTarget(retrieved.target, pair.target_span,
                             pair.phrase.target)};
  }
  return {Contextualize(retrieved.source, pair.phrase.source, pair.separator),
          Contextualize(retrieved.target, pair.phrase.target, pair.separator)};
}

std::vector<PhrasePair> AnnotatedPhrasesIn(std::span<const std::string> sentence,
                                           std::span<const PhrasePair> pairs) {
  std::vector<PhrasePair> out;
  for (const auto& pp : pairs) {
    if (pp.source.empty()) continue;
    if (pp.source.size() == sentence.size()
            ? std::equal(sentence.begin(), sentence.end(),
                         pp.source.tokens.begin())
            : IsStrictSubstring(pp.source.tokens, sentence)) {
      out.push_back(pp);
    }
  }
  return out;
}

AugmentReport Augment(const Corpus& unlabeled,
                      std::span<const PhrasePair> phrases,
                      const ParallelCorpus& labeled, const RatioScorer& scorer,
                      const TranslationTable& table, const NGramLM& lm,
                      const AugmentOptions& options) {
  struct Slot {
    bool has_phrase = false;
    bool retrieval_failed = false;
    bool switch_none = false;
    std::int64_t unresolved = 0;
    std::vector<SyntheticPair> pairs;
  };
  auto sentences = unlabeled.sentences();
  std::vector<Slot> slots(sentences.size());
  ParallelFor(sentences.size(), options.workers, [&](std::size_t k) {
    const Sentence& x = sentences[k];
    Slot& slot = slots[k];
    auto annotated = AnnotatedPhrasesIn(x.tokens, phrases);
    if (annotated.empty()) return;
    slot.has_phrase = true;
    const SentencePair* retrieved = nullptr;
    try {
      retrieved = &labeled.At(RetrieveContext(x.id, scorer));
    } catch (const DegenerateError&) {
      slot.retrieval_failed = true;
      return;
    } catch (const LookupError&) {
      slot.retrieval_failed = true;
      return;
    }
    if (options.do_switch) {
      auto links = AlignPair(*retrieved, table, options.reverse_alignment);
      auto outcome = BestSwitch(x.id, annotated, *retrieved, links, lm);
      slot.unresolved = outcome.unresolved_span;
      if (outcome.pair) {
        slot.pairs.push_back(std::move(*outcome.pair));
      } else {
        slot.switch_none = true;
      }
    }
    if (options.do_contextualize) {
      slot.pairs.push_back(
          BestContextualize(x.id, annotated, *retrieved, lm, options.separator));
    }
  });
  AugmentReport report;
  for (auto& slot : slots) {
    if (!slot.has_phrase) continue;
    ++report.sentences;
    if (slot.retrieval_failed) ++report.retrieval_failures;
    if (slot.switch_none) ++report.switch_without_candidate;
    report.unresolved_span += slot.unresolved;
    for (auto& p : slot.pairs) report.pairs.push_back(std::move(p));
  }
  return report;
}

nlohmann::json RecipeJson(const SyntheticPair& pair) {
  nlohmann::json j;
  j["recipe"] = RecipeName(pair.recipe);
  j["source"] = JoinTokens(pair.source);
  j["target"] = JoinTokens(pair.target);
  j["unlabeled_id"] = pair.unlabeled_id;
  j["retrieved_id"] = pair.retrieved_id;
  j["phrase_source"] = pair.phrase.source.ToString();
  j["phrase_target"] = pair.phrase.target.ToString();
  if (pair.recipe == Recipe::kSwitch) {
    j["position"] = pair.position;
    j["target_span"] = {pair.target_span.first, pair.target_span.last};
  } else {
    j["separator"] = pair.separator;
  }
  j["lm_score"] = pair.lm_score;
  return j;
}

SyntheticPair SyntheticFromJson(const nlohmann::json& j) {
  SyntheticPair s;
  const std::string recipe = j.at("recipe").get<std::string>();
  if (recipe == "switch") {
    s.recipe = Recipe::kSwitch;
    s.position = j.at("position").get<std::size_t>();
    s.target_span.first = j.at("target_span").at(0).get<std::uint32_t>();
    s.target_span.last = j.at("target_span").at(1).get<std::uint32_t>();
  } else if (recipe == "contextualize") {
    s.recipe = Recipe::kContextualize;
    s.separator = j.value("separator", "");
  } else {
    throw ParseError("unknown recipe '" + recipe + "'", 0);
  }
  s.source = Phrase::FromString(j.at("source").get<std::string>()).tokens;
  s.target = Phrase::FromString(j.at("target").get<std::string>()).tokens;
  s.unlabeled_id = j.at("unlabeled_id").get<SentenceId>();
  s.retrieved_id = j.at("retrieved_id").get<SentenceId>();
  s.phrase.source = Phrase::FromString(j.at("phrase_source").get<std::string>());
  s.phrase.target = Phrase::FromString(j.at("phrase_target").get<std::string>());
  s.lm_score = j.at("lm_score").get<double>();
  return s;
}

void WriteSyntheticTsv(std::ostream& out,
                       std::span<const SyntheticPair> pairs) {
  for (const auto& p : pairs) {
    out << JoinTokens(p.source) << '\t' << JoinTokens(p.target) << '\n';
  }
}

void WriteSyntheticJsonl(std::ostream& out,
                         std::span<const SyntheticPair> pairs) {
  for (const auto& p : pairs) out << RecipeJson(p).dump() << '\n';
}

}  // namespace alsel

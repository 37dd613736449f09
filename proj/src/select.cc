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

#include "alsel/select.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>

#include "alsel/analyze.h"
#include "alsel/errors.h"
#include "alsel/parallel.h"

namespace alsel {

namespace {

void CheckBudget(std::int64_t budget) {
  if (budget < 0) throw ArgumentError("budget must be non-negative");
}

SelectionResult SentenceResult(std::string strategy, std::int64_t budget) {
  SelectionResult r;
  r.strategy = std::move(strategy);
  r.budget.total = budget;
  r.budget.sentence_share = budget;
  return r;
}

SelectionResult PhraseResult(std::string strategy, std::int64_t budget) {
  SelectionResult r;
  r.strategy = std::move(strategy);
  r.budget.total = budget;
  r.budget.phrase_share = budget;
  return r;
}

struct ScoredSentence {
  SentenceId id;
  double score;
  std::int64_t cost;
};

// Takes the ranked candidates while the spend is below budget.
void TakeSentences(std::span<const ScoredSentence> ranked, std::int64_t budget,
                   SelectionResult& out) {
  std::int64_t spent = 0;
  std::size_t i = 0;
  for (; i < ranked.size() && spent < budget; ++i) {
    out.sentences.push_back({ranked[i].id, ranked[i].score, ranked[i].cost});
    spent += ranked[i].cost;
  }
  out.budget.spent_sentence = spent;
  out.exhausted = spent < budget && i == ranked.size();
}

struct ScoredPhrase {
  const Phrase* phrase;
  double score;
};

void TakePhrases(std::span<const ScoredPhrase> ranked, std::int64_t budget,
                 SelectionResult& out) {
  std::int64_t spent = 0;
  std::size_t i = 0;
  for (; i < ranked.size() && spent < budget; ++i) {
    const std::int64_t cost = Cost(*ranked[i].phrase);
    out.phrases.push_back({*ranked[i].phrase, ranked[i].score, cost});
    spent += cost;
  }
  out.budget.spent_phrase = spent;
  out.exhausted = spent < budget && i == ranked.size();
}

bool PhraseBefore(const ScoredPhrase& a, const ScoredPhrase& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.phrase->size() != b.phrase->size()) {
    return a.phrase->size() < b.phrase->size();
  }
  return a.phrase->tokens < b.phrase->tokens;
}

bool Eligible(const Phrase& p, const OccurrenceIndex& labeled,
              const PhraseSet* blocked) {
  return !labeled.Contains(p) && !(blocked && blocked->contains(p));
}

SelectionResult FrequencySelect(std::string strategy,
                                const OccurrenceIndex& unlabeled,
                                const OccurrenceIndex& labeled,
                                std::int64_t budget, const PhraseSet* blocked,
                                const SemiMaximalSet* restrict_to) {
  CheckBudget(budget);
  if (unlabeled.max_n() != labeled.max_n()) {
    throw ArgumentError("phrase indexes disagree on max_n");
  }
  std::vector<ScoredPhrase> pool;
  for (const auto& [p, positions] : unlabeled.entries()) {
    if (restrict_to && !restrict_to->Contains(p)) continue;
    if (!Eligible(p, labeled, blocked)) continue;
    pool.push_back({&p, static_cast<double>(positions.size())});
  }
  std::sort(pool.begin(), pool.end(), PhraseBefore);
  SelectionResult r = PhraseResult(std::move(strategy), budget);
  TakePhrases(pool, budget, r);
  return r;
}

}  // namespace

SelectionBudget SplitBudget(std::int64_t total) {
  CheckBudget(total);
  SelectionBudget b;
  b.total = total;
  b.sentence_share = total - total / 2;
  b.phrase_share = total / 2;
  return b;
}

std::size_t TakeWithinBudget(std::span<const std::int64_t> costs,
                             std::int64_t budget) {
  std::int64_t spent = 0;
  std::size_t i = 0;
  while (i < costs.size() && spent < budget) spent += costs[i++];
  return i;
}

bool WithinOvershootBound(std::span<const std::int64_t> costs,
                          std::int64_t budget) {
  if (costs.empty()) return true;
  std::int64_t sum = 0;
  for (auto c : costs) sum += c;
  return sum - costs.back() < budget;
}

SelectionResult SelectRandomSentences(const Corpus& unlabeled,
                                      std::int64_t budget,
                                      std::uint64_t seed) {
  CheckBudget(budget);
  std::vector<ScoredSentence> order;
  order.reserve(unlabeled.size());
  for (const auto& s : unlabeled.sentences()) {
    order.push_back({s.id, 0.0, Cost(s)});
  }
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  SelectionResult r = SentenceResult("random-sent", budget);
  r.seed = seed;
  TakeSentences(order, budget, r);
  return r;
}

SelectionResult SelectCsse(const Corpus& unlabeled, const RatioScorer& scorer,
                           std::int64_t budget, const CsseOptions& options) {
  CheckBudget(budget);
  auto sentences = unlabeled.sentences();
  for (const auto& s : sentences) {
    if (!scorer.left().Contains(s.id)) {
      throw ArgumentError("no embedding for unlabeled sentence " +
                          std::to_string(s.id));
    }
  }
  std::vector<std::optional<double>> scores(sentences.size());
  ParallelFor(sentences.size(), options.workers, [&](std::size_t i) {
    try {
      scores[i] = scorer.Distance(sentences[i].id, options.mode);
    } catch (const DegenerateError&) {
      // Skipped below.
    }
  });

  SelectionResult r = SentenceResult(
      options.mode == DistanceMode::kLiteral ? "csse" : "csse-nn", budget);
  std::vector<ScoredSentence> ranked;
  ranked.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!scores[i]) {
      ++r.skipped;
      continue;
    }
    ranked.push_back({sentences[i].id, *scores[i], Cost(sentences[i])});
  }
  // Literal: largest min-ratio first. Nearest-neighbour: smallest max-ratio.
  const bool descending = options.mode == DistanceMode::kLiteral;
  std::sort(ranked.begin(), ranked.end(),
            [descending](const ScoredSentence& a, const ScoredSentence& b) {
              if (a.score != b.score) {
                return descending ? a.score > b.score : a.score < b.score;
              }
              return a.id < b.id;
            });
  TakeSentences(ranked, budget, r);
  return r;
}

SentenceScores ParseScores(std::istream& in) {
  SentenceScores scores;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = Tokenize(line);
    if (!fields) continue;
    auto fail = [&] {
      throw ParseError("score line " + std::to_string(line_no) +
                           ": expected \"id TAB score\"",
                       line_no);
    };
    if (fields->size() != 2) fail();
    const auto& id_s = (*fields)[0];
    const auto& v_s = (*fields)[1];
    SentenceId id = 0;
    double v = 0.0;
    auto r1 = std::from_chars(id_s.data(), id_s.data() + id_s.size(), id);
    auto r2 = std::from_chars(v_s.data(), v_s.data() + v_s.size(), v);
    if (r1.ec != std::errc() || r1.ptr != id_s.data() + id_s.size() ||
        r2.ec != std::errc() || r2.ptr != v_s.data() + v_s.size()) {
      fail();
    }
    if (!scores.emplace(id, v).second) {
      throw ParseError("duplicate score for id " + id_s, line_no);
    }
  }
  return scores;
}

SentenceScores LoadScores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ParseScores(in);
}

void WriteScores(std::ostream& out, const SentenceScores& scores) {
  char buf[32];
  for (const auto& [id, v] : scores) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << id << '\t' << buf << '\n';
  }
}

SentenceScores RoundTripBleuScores(const Corpus& unlabeled,
                                   const Corpus& round_trip) {
  SentenceScores scores;
  for (const auto& s : unlabeled.sentences()) {
    const Sentence* rt = round_trip.Find(s.id);
    if (!rt) continue;
    scores[s.id] = SentenceBleu(rt->tokens, s.tokens).score;
  }
  return scores;
}

SelectionResult SelectRttl(const Corpus& unlabeled,
                           const SentenceScores& scores, std::int64_t budget) {
  CheckBudget(budget);
  std::vector<ScoredSentence> ranked;
  std::vector<SentenceId> missing;
  for (const auto& s : unlabeled.sentences()) {
    auto it = scores.find(s.id);
    if (it == scores.end()) {
      missing.push_back(s.id);
      continue;
    }
    ranked.push_back({s.id, it->second, Cost(s)});
  }
  if (!missing.empty()) {
    std::string msg = "round-trip scores missing for " +
                      std::to_string(missing.size()) + " sentence(s):";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
      msg += " " + std::to_string(missing[i]);
    }
    if (missing.size() > 20) msg += " ...";
    throw ConfigError(msg);
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const ScoredSentence& a, const ScoredSentence& b) {
              if (a.score != b.score) return a.score < b.score;
              return a.id < b.id;
            });
  SelectionResult r = SentenceResult("rttl", budget);
  TakeSentences(ranked, budget, r);
  return r;
}

SelectionResult SelectRandomPhrases(const OccurrenceIndex& unlabeled,
                                    const OccurrenceIndex& exclude,
                                    std::int64_t budget, std::uint64_t seed,
                                    const PhraseSet* blocked) {
  CheckBudget(budget);
  std::vector<ScoredPhrase> pool;
  for (const auto& [p, positions] : unlabeled.entries()) {
    if (Eligible(p, exclude, blocked)) pool.push_back({&p, 0.0});
  }
  // Canonical order first so the shuffle does not depend on hash layout.
  std::sort(pool.begin(), pool.end(),
            [](const ScoredPhrase& a, const ScoredPhrase& b) {
              return a.phrase->tokens < b.phrase->tokens;
            });
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  SelectionResult r = PhraseResult("random-phrase", budget);
  r.seed = seed;
  TakePhrases(pool, budget, r);
  return r;
}

SelectionResult SelectNgf(const OccurrenceIndex& unlabeled,
                          const OccurrenceIndex& labeled, std::int64_t budget,
                          const PhraseSet* blocked) {
  return FrequencySelect("ngf", unlabeled, labeled, budget, blocked, nullptr);
}

SelectionResult SelectNgfSmp(const OccurrenceIndex& unlabeled,
                             const OccurrenceIndex& labeled,
                             std::int64_t budget, const PhraseSet* blocked) {
  const SemiMaximalSet smp = ComputeSemiMaximalSet(unlabeled);
  return FrequencySelect("ngf-smp", unlabeled, labeled, budget, blocked, &smp);
}

SelectionResult SelectHybrid(std::int64_t budget, const PoolSelector& sentences,
                             const PhrasePoolSelector& phrases) {
  const SelectionBudget split = SplitBudget(budget);
  SelectionResult s = sentences(split.sentence_share);
  SelectionResult p = phrases(split.phrase_share, s);
  SelectionResult r;
  r.strategy = "hybrid(" + p.strategy + "," + s.strategy + ")";
  r.seed = s.seed;
  r.budget = split;
  r.budget.spent_sentence = s.budget.spent_sentence;
  r.budget.spent_phrase = p.budget.spent_phrase;
  r.sentences = std::move(s.sentences);
  r.phrases = std::move(p.phrases);
  r.exhausted = s.exhausted || p.exhausted;
  r.skipped = s.skipped + p.skipped;
  return r;
}

std::vector<SentenceId> SubsampleIds(std::span<const SentenceId> ids,
                                     std::size_t count, std::uint64_t seed) {
  std::vector<SentenceId> pool(ids.begin(), ids.end());
  std::sort(pool.begin(), pool.end());
  if (count < pool.size()) {
    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
  }
  return pool;
}

void WriteSelectionJsonl(std::ostream& out, const SelectionResult& result) {
  for (std::size_t i = 0; i < result.sentences.size(); ++i) {
    const auto& s = result.sentences[i];
    nlohmann::json j = {{"kind", "sentence"}, {"id", s.id},
                        {"score", s.score},   {"cost", s.cost},
                        {"rank", i}};
    out << j.dump() << '\n';
  }
  for (std::size_t i = 0; i < result.phrases.size(); ++i) {
    const auto& p = result.phrases[i];
    nlohmann::json j = {{"kind", "phrase"}, {"tokens", p.phrase.ToString()},
                        {"score", p.score}, {"cost", p.cost},
                        {"rank", i}};
    out << j.dump() << '\n';
  }
}

SelectionResult ReadSelectionJsonl(std::istream& in) {
  SelectionResult r;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Tokenize(line)) continue;
    try {
      auto j = nlohmann::json::parse(line);
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "sentence") {
        r.sentences.push_back({j.at("id").get<SentenceId>(),
                               j.at("score").get<double>(),
                               j.at("cost").get<std::int64_t>()});
        r.budget.spent_sentence += r.sentences.back().cost;
      } else if (kind == "phrase") {
        Phrase p = Phrase::FromString(j.at("tokens").get<std::string>());
        if (p.empty()) throw ArgumentError("empty phrase");
        r.phrases.push_back({std::move(p), j.at("score").get<double>(),
                             j.at("cost").get<std::int64_t>()});
        r.budget.spent_phrase += r.phrases.back().cost;
      } else {
        throw ArgumentError("unknown kind '" + kind + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError("selection line " + std::to_string(line_no) + ": " +
                           e.what(),
                       line_no);
    }
  }
  return r;
}

nlohmann::json SelectionSummary(const SelectionResult& r) {
  auto costs = [](const auto& items) {
    std::vector<std::int64_t> c;
    for (const auto& it : items) c.push_back(it.cost);
    return c;
  };
  const auto sc = costs(r.sentences);
  const auto pc = costs(r.phrases);
  auto pool = [](std::int64_t allocated, std::int64_t spent,
                 const std::vector<std::int64_t>& c) {
    return nlohmann::json{
        {"allocated", allocated},
        {"spent", spent},
        {"overshoot", std::max<std::int64_t>(0, spent - allocated)},
        {"items", c.size()},
        {"within_overshoot_bound", WithinOvershootBound(c, allocated)}};
  };
  return {{"strategy", r.strategy},
          {"seed", r.seed},
          {"budget", r.budget.total},
          {"sentence_pool",
           pool(r.budget.sentence_share, r.budget.spent_sentence, sc)},
          {"phrase_pool", pool(r.budget.phrase_share, r.budget.spent_phrase, pc)},
          {"exhausted", r.exhausted},
          {"skipped", r.skipped}};
}

}  // namespace alsel

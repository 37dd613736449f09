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

#include "alsel/oracle.h"

#include <algorithm>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <unordered_map>

#include "alsel/errors.h"
#include "alsel/parallel.h"

namespace alsel {

std::vector<OracleResponse> TranslateSentences(
    std::span<const SentenceId> ids, const ParallelCorpus& reference) {
  std::set<SentenceId> seen;
  for (SentenceId id : ids) {
    if (!seen.insert(id).second) {
      throw ArgumentError("duplicate selected sentence id " +
                          std::to_string(id));
    }
  }
  std::string missing;
  for (SentenceId id : ids) {
    if (!reference.Find(id)) {
      missing += (missing.empty() ? "" : ",") + std::to_string(id);
    }
  }
  if (!missing.empty()) {
    throw OracleGapError("sentence ids missing from reference: " + missing);
  }
  std::vector<OracleResponse> out;
  out.reserve(ids.size());
  for (SentenceId id : ids) {
    const SentencePair& p = reference.At(id);
    OracleResponse r;
    r.kind = OracleResponse::Kind::kSentence;
    r.id = id;
    r.source = p.source;
    r.target = p.target;
    r.provenance = {id};
    r.votes = 1;
    out.push_back(std::move(r));
  }
  return out;
}

ReferenceAligner TableAligner(const ParallelCorpus& reference,
                              const TranslationTable& table, bool reverse) {
  return [&reference, &table, reverse](std::size_t row) {
    return AlignPair(reference.pairs()[row], table, reverse);
  };
}

ReferenceAligner FixedAligner(std::vector<AlignmentLinks> links) {
  auto shared =
      std::make_shared<const std::vector<AlignmentLinks>>(std::move(links));
  return [shared](std::size_t row) {
    if (row >= shared->size()) {
      throw LookupError("no alignment for reference row " +
                        std::to_string(row));
    }
    return (*shared)[row];
  };
}

PhraseTranslation TranslatePhrases(std::span<const Phrase> phrases,
                                   const ParallelCorpus& reference,
                                   const ReferenceAligner& aligner,
                                   int workers) {
  PhraseTranslation result;
  if (phrases.empty()) return result;
  std::size_t max_len = 1;
  for (const auto& p : phrases) {
    if (p.empty()) throw ArgumentError("empty phrase");
    max_len = std::max(max_len, p.size());
  }
  const OccurrenceIndex index = ExtractNgrams(
      reference.SourceSide(), static_cast<int>(max_len));
  std::unordered_map<SentenceId, std::size_t> row_of;
  auto pairs = reference.pairs();
  for (std::size_t r = 0; r < pairs.size(); ++r) row_of[pairs[r].id] = r;

  // Align every needed reference row once.
  std::set<std::size_t> needed;
  for (const auto& p : phrases) {
    for (const auto& occ : index.Positions(p)) needed.insert(row_of[occ.sentence]);
  }
  std::vector<std::size_t> rows(needed.begin(), needed.end());
  std::vector<AlignmentLinks> row_links(rows.size());
  ParallelFor(rows.size(), workers,
              [&](std::size_t k) { row_links[k] = aligner(rows[k]); });
  std::unordered_map<std::size_t, const AlignmentLinks*> links_of;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    links_of[rows[k]] = &row_links[k];
  }

  std::vector<std::optional<OracleResponse>> responses(phrases.size());
  std::vector<std::string> reasons(phrases.size());
  ParallelFor(phrases.size(), workers, [&](std::size_t k) {
    const Phrase& p = phrases[k];
    auto positions = index.Positions(p);
    if (positions.empty()) {
      reasons[k] = "absent-from-reference";
      return;
    }
    std::map<Tokens, std::pair<std::int64_t, std::set<SentenceId>>> votes;
    for (const auto& occ : positions) {
      const std::size_t row = row_of.at(occ.sentence);
      auto span = AlignedTargetSpan(*links_of.at(row), occ.start, p.size());
      if (!span) continue;
      const auto& tgt = pairs[row].target;
      Tokens t(tgt.begin() + span->first, tgt.begin() + span->last + 1);
      auto& v = votes[std::move(t)];
      ++v.first;
      v.second.insert(occ.sentence);
    }
    if (votes.empty()) {
      reasons[k] = "no-aligned-span";
      return;
    }
    // Map order is lexicographic, so strict comparisons keep the smallest.
    auto best = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it) {
      if (it->second.first > best->second.first ||
          (it->second.first == best->second.first &&
           it->first.size() < best->first.size())) {
        best = it;
      }
    }
    OracleResponse r;
    r.kind = OracleResponse::Kind::kPhrase;
    r.source = p.tokens;
    r.target = best->first;
    r.provenance.assign(best->second.second.begin(), best->second.second.end());
    r.votes = best->second.first;
    responses[k] = std::move(r);
  });
  for (std::size_t k = 0; k < phrases.size(); ++k) {
    if (responses[k]) {
      result.responses.push_back(std::move(*responses[k]));
    } else {
      result.dropped.push_back({phrases[k], reasons[k]});
    }
  }
  return result;
}

void WriteResponsesTsv(std::ostream& out,
                       std::span<const OracleResponse> responses) {
  for (const auto& r : responses) {
    out << JoinTokens(r.source) << '\t' << JoinTokens(r.target) << '\n';
  }
}

void WriteProvenanceJsonl(std::ostream& out,
                          std::span<const OracleResponse> responses) {
  for (const auto& r : responses) {
    nlohmann::json j;
    if (r.kind == OracleResponse::Kind::kSentence) {
      j["kind"] = "sentence";
      j["id"] = r.id;
    } else {
      j["kind"] = "phrase";
    }
    j["source"] = JoinTokens(r.source);
    j["target"] = JoinTokens(r.target);
    j["provenance"] = r.provenance;
    j["votes"] = r.votes;
    out << j.dump() << '\n';
  }
}

std::vector<OracleResponse> ReadProvenanceJsonl(std::istream& in) {
  std::vector<OracleResponse> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Tokenize(line)) continue;
    try {
      auto j = nlohmann::json::parse(line);
      OracleResponse r;
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "sentence") {
        r.kind = OracleResponse::Kind::kSentence;
        r.id = j.at("id").get<SentenceId>();
      } else if (kind == "phrase") {
        r.kind = OracleResponse::Kind::kPhrase;
      } else {
        throw ParseError("unknown kind '" + kind + "'", line_no);
      }
      r.source = Phrase::FromString(j.at("source").get<std::string>()).tokens;
      r.target = Phrase::FromString(j.at("target").get<std::string>()).tokens;
      r.provenance = j.at("provenance").get<std::vector<SentenceId>>();
      r.votes = j.at("votes").get<std::int64_t>();
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("provenance line " + std::to_string(line_no) + ": " +
                           e.what(),
                       line_no);
    }
  }
  return out;
}

nlohmann::json DroppedJson(std::span<const DroppedPhrase> dropped) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& d : dropped) {
    j.push_back({{"phrase", d.phrase.ToString()}, {"reason", d.reason}});
  }
  return j;
}

}  // namespace alsel

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

#include "alsel/ngram.h"

#include <algorithm>
#include <ostream>

#include "alsel/errors.h"

namespace alsel {

OccurrenceIndex::OccurrenceIndex(int max_n) : max_n_(max_n) {
  if (max_n < 1) throw ArgumentError("max_n must be >= 1");
}

std::int64_t OccurrenceIndex::Count(const Phrase& p) const {
  auto it = entries_.find(p);
  return it == entries_.end() ? 0
                              : static_cast<std::int64_t>(it->second.size());
}

std::span<const Occurrence> OccurrenceIndex::Positions(const Phrase& p) const {
  auto it = entries_.find(p);
  if (it == entries_.end()) return {};
  return it->second;
}

void OccurrenceIndex::Add(const Phrase& p, Occurrence where) {
  if (p.empty() || p.size() > static_cast<std::size_t>(max_n_)) {
    throw ArgumentError("phrase length " + std::to_string(p.size()) +
                        " outside [1, " + std::to_string(max_n_) + "]");
  }
  entries_[p].push_back(where);
}

std::vector<Phrase> OccurrenceIndex::SortedPhrases() const {
  std::vector<std::pair<std::int64_t, const Phrase*>> items;
  items.reserve(entries_.size());
  for (const auto& [p, pos] : entries_) {
    items.emplace_back(static_cast<std::int64_t>(pos.size()), &p);
  }
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second->tokens < b.second->tokens;
  });
  std::vector<Phrase> out;
  out.reserve(items.size());
  for (const auto& [count, p] : items) out.push_back(*p);
  return out;
}

OccurrenceIndex ExtractNgrams(std::span<const Sentence> sentences, int max_n) {
  OccurrenceIndex index(max_n);
  for (const auto& s : sentences) {
    const std::size_t len = s.tokens.size();
    for (std::size_t start = 0; start < len; ++start) {
      Phrase p;
      for (std::size_t n = 1;
           n <= static_cast<std::size_t>(max_n) && start + n <= len; ++n) {
        p.tokens.push_back(s.tokens[start + n - 1]);
        index.Add(p, {s.id, static_cast<std::uint32_t>(start)});
      }
    }
  }
  return index;
}

void WriteIndexTsv(std::ostream& out, const OccurrenceIndex& index) {
  for (const auto& p : index.SortedPhrases()) {
    out << p.ToString() << '\t' << index.Count(p) << '\n';
  }
}

bool IsStrictSubstring(std::span<const std::string> inner,
                       std::span<const std::string> outer) {
  if (inner.empty() || inner.size() >= outer.size()) return false;
  return std::search(outer.begin(), outer.end(), inner.begin(), inner.end()) !=
         outer.end();
}

bool SemiOrder(const Phrase& p, const Phrase& p_prime,
               const OccurrenceIndex& index) {
  if (!IsStrictSubstring(p.tokens, p_prime.tokens)) return false;
  return 2 * index.Count(p_prime) > index.Count(p);
}

SemiMaximalSet ComputeSemiMaximalSet(const OccurrenceIndex& index) {
  // Every strict substring of a stored phrase is itself stored (the index is
  // closed under substrings when built from a corpus), so it suffices to walk
  // each phrase's substrings instead of all phrase pairs.
  std::unordered_set<Phrase> excluded;
  for (const auto& [outer, positions] : index.entries()) {
    const auto outer_count = static_cast<std::int64_t>(positions.size());
    const std::size_t len = outer.size();
    for (std::size_t n = 1; n < len; ++n) {
      for (std::size_t start = 0; start + n <= len; ++start) {
        Phrase inner(Tokens(outer.tokens.begin() + start,
                            outer.tokens.begin() + start + n));
        if (2 * outer_count > index.Count(inner)) {
          excluded.insert(std::move(inner));
        }
      }
    }
  }
  SemiMaximalSet result;
  for (const auto& [p, positions] : index.entries()) {
    if (!excluded.contains(p)) result.Insert(p);
  }
  return result;
}

std::optional<Phrase> FindSemiOrderWitness(const Phrase& p,
                                           const OccurrenceIndex& index) {
  const Phrase* best = nullptr;
  for (const auto& [candidate, positions] : index.entries()) {
    if (!SemiOrder(p, candidate, index)) continue;
    if (!best || candidate.size() < best->size() ||
        (candidate.size() == best->size() &&
         candidate.tokens < best->tokens)) {
      best = &candidate;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

}  // namespace alsel

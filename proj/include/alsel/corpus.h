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

// Corpus data model, whitespace tokenization, file IO and the word-count
// cost model. Every budget in the toolkit is charged in tokens, punctuation
// included, and token identity is case-sensitive.

#ifndef ALSEL_CORPUS_H_
#define ALSEL_CORPUS_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace alsel {

// 0-based line index in the file a corpus was loaded from.
using SentenceId = std::uint32_t;
using Tokens = std::vector<std::string>;

struct Sentence {
  SentenceId id = 0;
  Tokens tokens;
};

struct SentencePair {
  SentenceId id = 0;
  Tokens source;
  Tokens target;
};

// A contiguous token sequence; the unit of phrase annotation.
struct Phrase {
  Tokens tokens;

  Phrase() = default;
  explicit Phrase(Tokens t) : tokens(std::move(t)) {}

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  std::string ToString() const;
  // Whitespace-tokenizes `text`; an all-blank string gives an empty phrase.
  static Phrase FromString(std::string_view text);

  friend bool operator==(const Phrase&, const Phrase&) = default;
  friend auto operator<=>(const Phrase&, const Phrase&) = default;
};

// Splits `line` into maximal runs of non-whitespace characters. Returns
// nullopt when the line is blank, which callers treat as a skipped line.
std::optional<Tokens> Tokenize(std::string_view line);

// Joins tokens with single spaces.
std::string JoinTokens(std::span<const std::string> tokens);

// Word cost of a unit: its token count.
inline std::int64_t Cost(std::span<const std::string> tokens) {
  return static_cast<std::int64_t>(tokens.size());
}
inline std::int64_t Cost(const Sentence& s) { return Cost(s.tokens); }
inline std::int64_t Cost(const Phrase& p) { return Cost(p.tokens); }

// Immutable after loading; lookups by id are O(1).
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::string name) : name_(std::move(name)) {}

  // Throws ArgumentError on an empty sentence or a duplicate id.
  void Add(Sentence sentence);

  const std::string& name() const { return name_; }
  std::span<const Sentence> sentences() const { return sentences_; }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }

  const Sentence* Find(SentenceId id) const;
  // Throws LookupError for unknown ids.
  const Sentence& At(SentenceId id) const;
  std::int64_t TotalWords() const;

 private:
  std::string name_;
  std::vector<Sentence> sentences_;
  std::unordered_map<SentenceId, std::size_t> by_id_;
};

class ParallelCorpus {
 public:
  ParallelCorpus() = default;
  explicit ParallelCorpus(std::string name) : name_(std::move(name)) {}

  void Add(SentencePair pair);

  const std::string& name() const { return name_; }
  std::span<const SentencePair> pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  const SentencePair* Find(SentenceId id) const;
  const SentencePair& At(SentenceId id) const;

  Corpus SourceSide() const;
  Corpus TargetSide() const;
  // Keeps the pairs whose ids are listed, in the listed order.
  ParallelCorpus Subset(std::span<const SentenceId> ids) const;

 private:
  std::string name_;
  std::vector<SentencePair> pairs_;
  std::unordered_map<SentenceId, std::size_t> by_id_;
};

// One sentence per line. Blank lines are skipped but still advance the id.
Corpus ParseCorpus(std::istream& in, std::string name);
Corpus LoadCorpus(const std::filesystem::path& path, std::string name);

// "source TAB target" per line. A non-blank row without exactly two columns,
// or with a blank column, raises ParseError carrying the 1-based line number.
ParallelCorpus ParseParallelCorpus(std::istream& in, std::string name);
ParallelCorpus LoadParallelCorpus(const std::filesystem::path& path,
                                  std::string name);

void WriteParallelTsv(std::ostream& out, std::span<const SentencePair> pairs);

// Reads a whole file; throws IoError when it cannot be opened.
std::string ReadFile(const std::filesystem::path& path);

}  // namespace alsel

template <>
struct std::hash<alsel::Phrase> {
  std::size_t operator()(const alsel::Phrase& p) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto& t : p.tokens) {
      h ^= std::hash<std::string>{}(t) + 0x9e3779b97f4a7c15ULL + (h << 6) +
           (h >> 2);
    }
    return h;
  }
};

#endif  // ALSEL_CORPUS_H_

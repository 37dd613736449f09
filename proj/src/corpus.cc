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

#include "alsel/corpus.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "alsel/errors.h"

namespace alsel {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

std::optional<Tokens> Tokenize(std::string_view line) {
  Tokens tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !IsSpace(line[i])) ++i;
    if (i > start) tokens.emplace_back(line.substr(start, i - start));
  }
  if (tokens.empty()) return std::nullopt;
  return tokens;
}

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string Phrase::ToString() const { return JoinTokens(tokens); }

Phrase Phrase::FromString(std::string_view text) {
  auto tokens = Tokenize(text);
  return tokens ? Phrase(std::move(*tokens)) : Phrase();
}

void Corpus::Add(Sentence sentence) {
  if (sentence.tokens.empty()) {
    throw ArgumentError("empty sentence " + std::to_string(sentence.id) +
                        " in corpus " + name_);
  }
  if (!by_id_.emplace(sentence.id, sentences_.size()).second) {
    throw ArgumentError("duplicate sentence id " +
                        std::to_string(sentence.id) + " in corpus " + name_);
  }
  sentences_.push_back(std::move(sentence));
}

const Sentence* Corpus::Find(SentenceId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &sentences_[it->second];
}

const Sentence& Corpus::At(SentenceId id) const {
  const Sentence* s = Find(id);
  if (!s) {
    throw LookupError("sentence " + std::to_string(id) + " not in corpus " +
                      name_);
  }
  return *s;
}

std::int64_t Corpus::TotalWords() const {
  std::int64_t total = 0;
  for (const auto& s : sentences_) total += Cost(s);
  return total;
}

void ParallelCorpus::Add(SentencePair pair) {
  if (pair.source.empty() || pair.target.empty()) {
    throw ArgumentError("empty side in pair " + std::to_string(pair.id) +
                        " of corpus " + name_);
  }
  if (!by_id_.emplace(pair.id, pairs_.size()).second) {
    throw ArgumentError("duplicate pair id " + std::to_string(pair.id) +
                        " in corpus " + name_);
  }
  pairs_.push_back(std::move(pair));
}

const SentencePair* ParallelCorpus::Find(SentenceId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &pairs_[it->second];
}

const SentencePair& ParallelCorpus::At(SentenceId id) const {
  const SentencePair* p = Find(id);
  if (!p) {
    throw LookupError("pair " + std::to_string(id) + " not in corpus " +
                      name_);
  }
  return *p;
}

Corpus ParallelCorpus::SourceSide() const {
  Corpus c(name_ + "-src");
  for (const auto& p : pairs_) c.Add({p.id, p.source});
  return c;
}

Corpus ParallelCorpus::TargetSide() const {
  Corpus c(name_ + "-tgt");
  for (const auto& p : pairs_) c.Add({p.id, p.target});
  return c;
}

ParallelCorpus ParallelCorpus::Subset(std::span<const SentenceId> ids) const {
  ParallelCorpus out(name_);
  for (SentenceId id : ids) out.Add(At(id));
  return out;
}

Corpus ParseCorpus(std::istream& in, std::string name) {
  Corpus corpus(std::move(name));
  std::string line;
  SentenceId id = 0;
  while (std::getline(in, line)) {
    if (auto tokens = Tokenize(line)) corpus.Add({id, std::move(*tokens)});
    ++id;
  }
  return corpus;
}

Corpus LoadCorpus(const std::filesystem::path& path, std::string name) {
  auto in = OpenOrThrow(path);
  return ParseCorpus(in, std::move(name));
}

ParallelCorpus ParseParallelCorpus(std::istream& in, std::string name) {
  ParallelCorpus corpus(std::move(name));
  std::string line;
  SentenceId id = 0;
  while (std::getline(in, line)) {
    const std::size_t line_no = static_cast<std::size_t>(id) + 1;
    if (!Tokenize(line)) {
      ++id;
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != line.npos) {
      throw ParseError(corpus.name() + ": line " + std::to_string(line_no) +
                           " does not have exactly 2 tab-separated columns",
                       line_no);
    }
    auto source = Tokenize(std::string_view(line).substr(0, tab));
    auto target = Tokenize(std::string_view(line).substr(tab + 1));
    if (!source || !target) {
      throw ParseError(corpus.name() + ": line " + std::to_string(line_no) +
                           " has an empty column",
                       line_no);
    }
    corpus.Add({id, std::move(*source), std::move(*target)});
    ++id;
  }
  return corpus;
}

ParallelCorpus LoadParallelCorpus(const std::filesystem::path& path,
                                  std::string name) {
  auto in = OpenOrThrow(path);
  return ParseParallelCorpus(in, std::move(name));
}

void WriteParallelTsv(std::ostream& out, std::span<const SentencePair> pairs) {
  for (const auto& p : pairs) {
    out << JoinTokens(p.source) << '\t' << JoinTokens(p.target) << '\n';
  }
}

std::string ReadFile(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace alsel

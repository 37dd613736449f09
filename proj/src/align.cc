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

#include "alsel/align.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "alsel/errors.h"
#include "alsel/parallel.h"

namespace alsel {

namespace {

// Pairs are split into this many contiguous shards for the E-step. Partial
// counts are merged in shard order, so the floating-point sums do not
// depend on the number of worker threads.
constexpr std::size_t kShards = 16;

const std::pair<std::int32_t, double>* FindInRow(
    const std::vector<std::pair<std::int32_t, double>>& row, std::int32_t t) {
  auto it = std::lower_bound(
      row.begin(), row.end(), t,
      [](const std::pair<std::int32_t, double>& e, std::int32_t v) {
        return e.first < v;
      });
  if (it == row.end() || it->first != t) return nullptr;
  return &*it;
}

}  // namespace

std::int32_t TranslationTable::SourceIndex(std::string_view s) const {
  auto it = source_index_.find(std::string(s));
  return it == source_index_.end() ? -1 : it->second;
}

std::int32_t TranslationTable::TargetIndex(std::string_view t) const {
  auto it = target_index_.find(std::string(t));
  return it == target_index_.end() ? -1 : it->second;
}

void TranslationTable::Set(const std::string& source,
                           const std::string& target, double p) {
  auto [sit, snew] = source_index_.emplace(
      source, static_cast<std::int32_t>(source_vocab_.size()));
  if (snew) {
    source_vocab_.push_back(source);
    rows_.emplace_back();
  }
  auto [tit, tnew] = target_index_.emplace(
      target, static_cast<std::int32_t>(target_vocab_.size()));
  if (tnew) target_vocab_.push_back(target);
  auto& row = rows_[sit->second];
  auto pos = std::lower_bound(
      row.begin(), row.end(), tit->second,
      [](const auto& e, std::int32_t v) { return e.first < v; });
  if (pos != row.end() && pos->first == tit->second) {
    pos->second = p;
  } else {
    row.insert(pos, {tit->second, p});
  }
}

double TranslationTable::Prob(std::string_view source,
                              std::string_view target) const {
  const std::int32_t s = SourceIndex(source);
  const std::int32_t t = TargetIndex(target);
  if (s < 0 || t < 0) return 0.0;
  const auto* e = FindInRow(rows_[s], t);
  return e ? e->second : 0.0;
}

bool TranslationTable::HasSource(std::string_view source) const {
  return SourceIndex(source) >= 0;
}

std::vector<std::pair<std::string, double>> TranslationTable::Row(
    std::string_view source) const {
  std::vector<std::pair<std::string, double>> out;
  const std::int32_t s = SourceIndex(source);
  if (s < 0) return out;
  for (const auto& [t, p] : rows_[s]) out.emplace_back(target_vocab_[t], p);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> TranslationTable::BestTranslation(
    std::string_view source) const {
  std::optional<std::pair<std::string, double>> best;
  for (auto& [t, p] : Row(source)) {
    if (p <= 0.0) continue;
    if (!best || p > best->second) best.emplace(t, p);
  }
  if (!best) return std::nullopt;
  return best->first;
}

void TranslationTable::WriteTsv(std::ostream& out) const {
  std::vector<std::string> sources = source_vocab_;
  std::sort(sources.begin(), sources.end());
  char buf[32];
  for (const auto& s : sources) {
    for (const auto& [t, p] : Row(s)) {
      std::snprintf(buf, sizeof(buf), "%.17g", p);
      out << s << '\t' << t << '\t' << buf << '\n';
    }
  }
}

TranslationTable TranslationTable::ReadTsv(std::istream& in) {
  TranslationTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Tokenize(line)) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == line.npos ? line.npos : line.find('\t', t1 + 1);
    if (t2 == line.npos) {
      throw ParseError("table line " + std::to_string(line_no) +
                           ": expected src TAB tgt TAB prob",
                       line_no);
    }
    std::string prob_s = line.substr(t2 + 1);
    while (!prob_s.empty() && (prob_s.back() == '\r' || prob_s.back() == ' '))
      prob_s.pop_back();
    double p = 0.0;
    auto [end, ec] =
        std::from_chars(prob_s.data(), prob_s.data() + prob_s.size(), p);
    if (ec != std::errc() || end != prob_s.data() + prob_s.size() || p < 0.0 ||
        p > 1.0) {
      throw ParseError("table line " + std::to_string(line_no) +
                           ": bad probability",
                       line_no);
    }
    table.Set(line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), p);
  }
  return table;
}

class Ibm1Trainer {
 public:
  Ibm1Trainer(const ParallelCorpus& corpus, const Ibm1Options& options)
      : options_(options) {
    table_.source_vocab_.push_back(std::string(kNullToken));
    table_.source_index_.emplace(std::string(kNullToken), 0);
    for (const auto& pair : corpus.pairs()) {
      Encoded e;
      for (const auto& w : pair.source) e.source.push_back(Intern(w, true));
      for (const auto& w : pair.target) e.target.push_back(Intern(w, false));
      encoded_.push_back(std::move(e));
    }
    // Sparse rows over co-occurring targets, uniform over the target vocab.
    std::vector<std::vector<std::int32_t>> cooc(table_.source_vocab_.size());
    for (const auto& e : encoded_) {
      for (std::int32_t t : e.target) {
        cooc[0].push_back(t);
        for (std::int32_t s : e.source) cooc[s].push_back(t);
      }
    }
    const double uniform =
        1.0 / static_cast<double>(table_.target_vocab_.size());
    table_.rows_.resize(cooc.size());
    row_offset_.resize(cooc.size() + 1, 0);
    for (std::size_t s = 0; s < cooc.size(); ++s) {
      auto& c = cooc[s];
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      for (std::int32_t t : c) table_.rows_[s].emplace_back(t, uniform);
      row_offset_[s + 1] = row_offset_[s] + c.size();
    }
  }

  Ibm1Result Run() {
    Ibm1Result result;
    std::vector<double> counts;
    for (int it = 0; it < options_.iterations; ++it) {
      result.log_likelihoods.push_back(EStep(&counts));
      MStep(counts);
    }
    result.log_likelihoods.push_back(EStep(nullptr));
    result.table = std::move(table_);
    return result;
  }

 private:
  struct Encoded {
    std::vector<std::int32_t> source;
    std::vector<std::int32_t> target;
  };

  std::int32_t Intern(const std::string& w, bool source) {
    auto& index = source ? table_.source_index_ : table_.target_index_;
    auto& vocab = source ? table_.source_vocab_ : table_.target_vocab_;
    auto [it, inserted] =
        index.emplace(w, static_cast<std::int32_t>(vocab.size()));
    if (inserted) vocab.push_back(w);
    return it->second;
  }

  std::size_t Offset(std::int32_t s, std::int32_t t) const {
    const auto& row = table_.rows_[s];
    const auto* e = FindInRow(row, t);
    return row_offset_[s] + static_cast<std::size_t>(e - row.data());
  }

  // Returns the log-likelihood under the current table; accumulates expected
  // counts into *counts when given.
  double EStep(std::vector<double>* counts) {
    const std::size_t nnz = row_offset_.back();
    const std::size_t n = encoded_.size();
    const std::size_t shards = std::min(kShards, n);
    std::vector<std::vector<double>> partial(shards);
    std::vector<double> ll(shards, 0.0);
    ParallelFor(shards, options_.workers, [&](std::size_t shard) {
      if (counts) partial[shard].assign(nnz, 0.0);
      std::vector<std::size_t> offsets;
      std::vector<double> probs;
      for (std::size_t p = shard * n / shards; p < (shard + 1) * n / shards;
           ++p) {
        const Encoded& e = encoded_[p];
        const double norm = static_cast<double>(e.source.size() + 1);
        for (std::int32_t t : e.target) {
          offsets.clear();
          probs.clear();
          offsets.push_back(Offset(0, t));
          for (std::int32_t s : e.source) offsets.push_back(Offset(s, t));
          double denom = 0.0;
          for (std::size_t i = 0; i < offsets.size(); ++i) {
            const std::int32_t s = i == 0 ? 0 : e.source[i - 1];
            const double v =
                table_.rows_[s][offsets[i] - row_offset_[s]].second;
            probs.push_back(v);
            denom += v;
          }
          ll[shard] += std::log(denom / norm);
          if (!counts) continue;
          for (std::size_t i = 0; i < offsets.size(); ++i) {
            partial[shard][offsets[i]] += probs[i] / denom;
          }
        }
      }
    });
    double total_ll = 0.0;
    for (double v : ll) total_ll += v;
    if (counts) {
      counts->assign(nnz, 0.0);
      for (const auto& part : partial) {
        for (std::size_t i = 0; i < nnz; ++i) (*counts)[i] += part[i];
      }
    }
    return total_ll;
  }

  void MStep(const std::vector<double>& counts) {
    for (std::size_t s = 0; s < table_.rows_.size(); ++s) {
      auto& row = table_.rows_[s];
      double sum = 0.0;
      for (std::size_t i = 0; i < row.size(); ++i) {
        sum += counts[row_offset_[s] + i];
      }
      if (sum <= 0.0) continue;
      for (std::size_t i = 0; i < row.size(); ++i) {
        row[i].second = counts[row_offset_[s] + i] / sum;
      }
    }
  }

  Ibm1Options options_;
  TranslationTable table_;
  std::vector<Encoded> encoded_;
  std::vector<std::size_t> row_offset_;
};

Ibm1Result TrainIbm1(const ParallelCorpus& corpus,
                     const Ibm1Options& options) {
  if (corpus.empty()) throw ArgumentError("cannot train on an empty corpus");
  if (options.iterations < 1) throw ArgumentError("iterations must be >= 1");
  return Ibm1Trainer(corpus, options).Run();
}

AlignmentLinks Align(std::span<const std::string> source,
                     std::span<const std::string> target,
                     const TranslationTable& table) {
  AlignmentLinks links;
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double null_p = table.Prob(kNullToken, target[j]);
    double best_p = 0.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < source.size(); ++i) {
      const double p = table.Prob(source[i], target[j]);
      if (p > best_p) {
        best_p = p;
        best_i = i;
      }
    }
    if (best_p > 0.0 && best_p >= null_p) {
      links.push_back({static_cast<std::uint32_t>(best_i),
                       static_cast<std::uint32_t>(j)});
    }
  }
  std::sort(links.begin(), links.end());
  return links;
}

AlignmentLinks AlignPair(const SentencePair& pair, const TranslationTable& table,
                         bool reverse) {
  if (!reverse) return Align(pair.source, pair.target, table);
  AlignmentLinks links = Align(pair.target, pair.source, table);
  for (auto& l : links) std::swap(l.source, l.target);
  std::sort(links.begin(), links.end());
  return links;
}

ParallelCorpus Swapped(const ParallelCorpus& corpus) {
  ParallelCorpus out(corpus.name() + "-swapped");
  for (const auto& p : corpus.pairs()) out.Add({p.id, p.target, p.source});
  return out;
}

std::vector<AlignmentLinks> AlignCorpus(const ParallelCorpus& corpus,
                                        const TranslationTable& table,
                                        int workers) {
  std::vector<AlignmentLinks> out(corpus.size());
  auto pairs = corpus.pairs();
  ParallelFor(pairs.size(), workers, [&](std::size_t i) {
    out[i] = Align(pairs[i].source, pairs[i].target, table);
  });
  return out;
}

AlignmentLinks ParsePharaoh(std::string_view line, std::size_t source_len,
                            std::size_t target_len) {
  AlignmentLinks links;
  std::size_t pos = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (pos < line.size()) {
    while (pos < line.size() && is_space(line[pos])) ++pos;
    if (pos >= line.size()) break;
    const std::size_t start = pos;
    while (pos < line.size() && !is_space(line[pos])) ++pos;
    std::string_view tok = line.substr(start, pos - start);
    auto fail = [&](const std::string& why) {
      throw ParseError("alignment token '" + std::string(tok) + "' at offset " +
                           std::to_string(start) + ": " + why,
                       start);
    };
    auto dash = tok.find('-');
    if (dash == tok.npos || dash == 0 || dash + 1 == tok.size()) {
      fail("expected i-j");
    }
    std::uint32_t i = 0, j = 0;
    auto r1 = std::from_chars(tok.data(), tok.data() + dash, i);
    auto r2 = std::from_chars(tok.data() + dash + 1, tok.data() + tok.size(), j);
    if (r1.ec != std::errc() || r1.ptr != tok.data() + dash ||
        r2.ec != std::errc() || r2.ptr != tok.data() + tok.size()) {
      fail("expected i-j");
    }
    if (i >= source_len || j >= target_len) fail("index out of bounds");
    links.push_back({i, j});
  }
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
  return links;
}

std::string FormatPharaoh(const AlignmentLinks& links) {
  std::string out;
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (k) out.push_back(' ');
    out += std::to_string(links[k].source) + "-" +
           std::to_string(links[k].target);
  }
  return out;
}

std::vector<AlignmentLinks> LoadPharaohFile(const std::filesystem::path& path,
                                            const ParallelCorpus& corpus) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  std::vector<AlignmentLinks> out;
  out.reserve(corpus.size());
  for (const auto& pair : corpus.pairs()) {
    // Line i of the alignment file belongs to line i of the corpus file.
    if (pair.id >= lines.size()) {
      throw ParseError(path.string() + ": no alignment line for pair " +
                           std::to_string(pair.id),
                       lines.size());
    }
    try {
      out.push_back(
          ParsePharaoh(lines[pair.id], pair.source.size(), pair.target.size()));
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ": line " + std::to_string(pair.id + 1) +
                           ": " + e.what(),
                       pair.id + 1);
    }
  }
  return out;
}

std::optional<TargetSpan> AlignedTargetSpan(const AlignmentLinks& links,
                                            std::size_t source_begin,
                                            std::size_t source_len) {
  std::optional<TargetSpan> span;
  for (const auto& l : links) {
    if (l.source < source_begin || l.source >= source_begin + source_len) {
      continue;
    }
    if (!span) {
      span = TargetSpan{l.target, l.target};
    } else {
      span->first = std::min(span->first, l.target);
      span->last = std::max(span->last, l.target);
    }
  }
  return span;
}

std::optional<TargetSpan> ConsistentTargetSpan(const AlignmentLinks& links,
                                               std::size_t source_begin,
                                               std::size_t source_len) {
  auto span = AlignedTargetSpan(links, source_begin, source_len);
  if (!span) return std::nullopt;
  for (const auto& l : links) {
    const bool inside_source =
        l.source >= source_begin && l.source < source_begin + source_len;
    if (!inside_source && l.target >= span->first && l.target <= span->last) {
      return std::nullopt;
    }
  }
  return span;
}

}  // namespace alsel

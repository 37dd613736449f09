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

// Slow reference implementations used as test oracles. They share no code
// with the library beyond the plain token types.

#ifndef ALSEL_TESTS_BRUTE_FORCE_H_
#define ALSEL_TESTS_BRUTE_FORCE_H_

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace brute {

using Words = std::vector<std::string>;
using Counts = std::map<Words, std::int64_t>;

inline Counts CountSpans(const std::vector<Words>& corpus, int max_n) {
  Counts counts;
  for (const auto& s : corpus) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (int n = 1; n <= max_n && i + n <= s.size(); ++n) {
        ++counts[Words(s.begin() + i, s.begin() + i + n)];
      }
    }
  }
  return counts;
}

// Naive contiguous-substring test, strict.
inline bool StrictlyInside(const Words& inner, const Words& outer) {
  if (inner.size() >= outer.size()) return false;
  for (std::size_t start = 0; start + inner.size() <= outer.size(); ++start) {
    bool match = true;
    for (std::size_t k = 0; k < inner.size(); ++k) {
      if (outer[start + k] != inner[k]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

// Double loop over every phrase pair.
inline std::set<Words> SemiMaximal(const Counts& counts) {
  std::set<Words> keep;
  for (const auto& [p, occ_p] : counts) {
    bool excluded = false;
    for (const auto& [q, occ_q] : counts) {
      if (StrictlyInside(p, q) && occ_q > occ_p / 2.0) {
        excluded = true;
        break;
      }
    }
    if (!excluded) keep.insert(p);
  }
  return keep;
}

// Filter, sort by count (then shorter, then lexicographic), then take the
// prefix that the "while spent < budget" loop would take.
inline std::vector<Words> FrequencyGreedy(const Counts& unlabeled,
                                          const Counts& labeled,
                                          std::int64_t budget,
                                          const std::set<Words>* only) {
  std::vector<std::pair<std::int64_t, Words>> pool;
  for (const auto& [p, c] : unlabeled) {
    if (labeled.count(p)) continue;
    if (only && !only->count(p)) continue;
    pool.push_back({c, p});
  }
  std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    if (a.second.size() != b.second.size()) {
      return a.second.size() < b.second.size();
    }
    return a.second < b.second;
  });
  std::vector<Words> out;
  std::int64_t spent = 0;
  for (const auto& [c, p] : pool) {
    if (spent >= budget) break;
    out.push_back(p);
    spent += static_cast<std::int64_t>(p.size());
  }
  return out;
}

// Percentage of distinct test n-grams of each size found in the covering
// text, by set intersection.
inline std::vector<double> TypeCoverage(const std::vector<Words>& covering,
                                        const std::vector<Words>& test,
                                        int max_n) {
  std::vector<double> out;
  for (int n = 1; n <= max_n; ++n) {
    std::set<Words> t, c;
    for (const auto& s : test) {
      for (std::size_t i = 0; i + n <= s.size(); ++i) {
        t.insert(Words(s.begin() + i, s.begin() + i + n));
      }
    }
    for (const auto& s : covering) {
      for (std::size_t i = 0; i + n <= s.size(); ++i) {
        c.insert(Words(s.begin() + i, s.begin() + i + n));
      }
    }
    std::size_t hit = 0;
    for (const auto& g : t) hit += c.count(g);
    out.push_back(t.empty() ? 0.0 : 100.0 * hit / t.size());
  }
  return out;
}

// Random corpus over the vocabulary {w0 .. w(vocab-1)}.
inline std::vector<Words> RandomCorpus(std::mt19937_64& rng,
                                       std::size_t sentences, int vocab,
                                       int max_len) {
  std::uniform_int_distribution<int> word(0, vocab - 1);
  std::uniform_int_distribution<int> len(1, max_len);
  std::vector<Words> out(sentences);
  for (auto& s : out) {
    const int n = len(rng);
    for (int i = 0; i < n; ++i) s.push_back("w" + std::to_string(word(rng)));
  }
  return out;
}

}  // namespace brute

#endif  // ALSEL_TESTS_BRUTE_FORCE_H_

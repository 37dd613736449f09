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

#include "alsel/lm.h"

#include <algorithm>
#include <cmath>

#include "alsel/errors.h"

namespace alsel {

namespace {

std::string Key(const std::vector<std::string>& words, std::size_t begin,
                std::size_t end) {
  std::string key;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) key.push_back('\x1f');
    key += words[i];
  }
  return key;
}

}  // namespace

NGramLM NGramLM::Train(const Corpus& corpus, const LmOptions& options) {
  if (options.order < 1) throw ArgumentError("lm order must be >= 1");
  if (!(options.add_k > 0.0)) throw ArgumentError("lm add_k must be > 0");
  if (corpus.empty()) throw ArgumentError("cannot train lm on empty corpus");
  NGramLM lm(options.order, options.add_k);
  for (const auto& s : corpus.sentences()) {
    for (const auto& w : s.tokens) lm.vocab_.insert(w);
  }
  const std::size_t max_hist = static_cast<std::size_t>(options.order - 1);
  for (const auto& s : corpus.sentences()) {
    std::vector<std::string> padded;
    padded.emplace_back(kBos);
    padded.insert(padded.end(), s.tokens.begin(), s.tokens.end());
    padded.emplace_back(kEos);
    for (std::size_t t = 1; t < padded.size(); ++t) {
      const std::size_t avail = std::min(max_hist, t);
      for (std::size_t h = 0; h <= avail; ++h) {
        Context& c = lm.contexts_[Key(padded, t - h, t)];
        ++c.total;
        ++c.next[padded[t]];
      }
    }
  }
  return lm;
}

std::string NGramLM::Map(std::string_view w) const {
  if (w == kBos || w == kEos) return std::string(w);
  std::string s(w);
  return vocab_.contains(s) ? s : std::string(kUnk);
}

// P(word | history[begin..]) by recursion on the history length.
double NGramLM::Prob(const std::vector<std::string>& history,
                     std::size_t begin, const std::string& word) const {
  const double kv = add_k_ * static_cast<double>(vocab_size());
  const double lower = begin == history.size()
                           ? 1.0 / static_cast<double>(vocab_size())
                           : Prob(history, begin + 1, word);
  double count = 0.0;
  double total = 0.0;
  auto it = contexts_.find(Key(history, begin, history.size()));
  if (it != contexts_.end()) {
    total = static_cast<double>(it->second.total);
    auto w = it->second.next.find(word);
    if (w != it->second.next.end()) count = static_cast<double>(w->second);
  }
  return (count + kv * lower) / (total + kv);
}

double NGramLM::ConditionalProb(std::span<const std::string> history,
                                std::string_view word) const {
  const std::size_t max_hist = static_cast<std::size_t>(order_ - 1);
  const std::size_t n = std::min(max_hist, history.size());
  std::vector<std::string> h;
  for (std::size_t i = history.size() - n; i < history.size(); ++i) {
    h.push_back(Map(history[i]));
  }
  return Prob(h, 0, Map(word));
}

double NGramLM::LogProb(std::span<const std::string> sentence) const {
  std::vector<std::string> padded;
  padded.emplace_back(kBos);
  for (const auto& w : sentence) padded.push_back(Map(w));
  padded.emplace_back(kEos);
  const std::size_t max_hist = static_cast<std::size_t>(order_ - 1);
  double lp = 0.0;
  for (std::size_t t = 1; t < padded.size(); ++t) {
    const std::size_t n = std::min(max_hist, t);
    std::vector<std::string> h(padded.begin() + (t - n), padded.begin() + t);
    lp += std::log(Prob(h, 0, padded[t]));
  }
  return lp;
}

std::vector<std::string> NGramLM::PredictableVocabulary() const {
  std::vector<std::string> out;
  out.assign(vocab_.begin(), vocab_.end());
  std::sort(out.begin(), out.end());
  out.emplace_back(kEos);
  out.emplace_back(kUnk);
  return out;
}

}  // namespace alsel

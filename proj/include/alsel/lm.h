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

// Word n-gram language model with interpolated add-k smoothing:
//
//   P_n(w | h) = (c(h w) + kV * P_{n-1}(w | h')) / (c(h .) + kV)
//   P_0(w)     = 1 / V
//
// where h' drops the oldest word of h and V counts the training words plus
// </s> and <unk>. Sentences are scored as <s> w_1 .. w_m </s>; out of
// vocabulary words are mapped to <unk>.

#ifndef ALSEL_LM_H_
#define ALSEL_LM_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "alsel/corpus.h"

namespace alsel {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

struct LmOptions {
  int order = 3;
  double add_k = 0.1;
};

class NGramLM {
 public:
  // Throws ArgumentError on order < 1, add_k <= 0 or an empty corpus.
  static NGramLM Train(const Corpus& corpus, const LmOptions& options = {});

  int order() const { return order_; }
  double add_k() const { return add_k_; }
  // V: training words plus </s> and <unk>.
  std::size_t vocab_size() const { return vocab_.size() + 2; }

  // P(word | history). Only the last order-1 history words are used; the
  // history may start with <s>.
  double ConditionalProb(std::span<const std::string> history,
                         std::string_view word) const;

  // Natural-log probability of the sentence including </s>.
  double LogProb(std::span<const std::string> sentence) const;

  // Every word that can be predicted: training words, </s> and <unk>.
  std::vector<std::string> PredictableVocabulary() const;

 private:
  struct Context {
    std::int64_t total = 0;
    std::unordered_map<std::string, std::int64_t> next;
  };

  NGramLM(int order, double add_k) : order_(order), add_k_(add_k) {}

  std::string Map(std::string_view w) const;
  double Prob(const std::vector<std::string>& history, std::size_t begin,
              const std::string& word) const;

  int order_;
  double add_k_;
  std::unordered_set<std::string> vocab_;
  // Keyed by the history words joined with '\x1f'; "" is the unigram level.
  std::unordered_map<std::string, Context> contexts_;
};

}  // namespace alsel

#endif  // ALSEL_LM_H_

#!/usr/bin/env python3
# Copyright 2026 The Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the deterministic toy fixture used by the tests.

Two pseudo-languages with a one-to-one word translation. The out-of-domain
labeled corpus only uses general words; the unlabeled pool and the test set
also contain multiword in-domain terms.

    python3 tools/make_toy_fixture.py tests/data/toy
"""

import json
import math
import os
import random
import sys

SEED = 20260
DIM = 16
N_GENERAL = 60
N_DOMAIN = 24
N_TERMS = 12
N_UNLABELED = 200
N_LABELED = 500
N_TEST = 40

ONSETS = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"]
VOWELS = ["a", "e", "i", "o", "u"]


def make_words(rng, count, syllables, taken):
  words = []
  while len(words) < count:
    w = "".join(rng.choice(ONSETS) + rng.choice(VOWELS)
                for _ in range(syllables))
    if w not in taken:
      taken.add(w)
      words.append(w)
  return words


def unit(v):
  n = math.sqrt(sum(x * x for x in v))
  return [x / n for x in v]


def main(out_dir):
  rng = random.Random(SEED)
  taken = set()
  general = make_words(rng, N_GENERAL, 2, taken)
  domain = make_words(rng, N_DOMAIN, 3, taken)
  target_taken = set()
  lexicon = {}
  for w in general + domain:
    lexicon[w] = "x" + make_words(rng, 1, 2, target_taken)[0]

  terms = []
  for i in range(N_TERMS):
    length = 2 + (i % 2)
    terms.append(rng.sample(domain, length))

  def general_words(n):
    return [rng.choice(general) for _ in range(n)]

  def in_domain_sentence():
    words = general_words(rng.randint(3, 8))
    for _ in range(rng.randint(1, 2)):
      pos = rng.randint(0, len(words))
      words[pos:pos] = rng.choice(terms)
    return words

  def translate(words):
    return [lexicon[w] for w in words]

  unlabeled = []
  for i in range(N_UNLABELED):
    if i % 4 == 3:
      unlabeled.append(general_words(rng.randint(5, 11)))
    else:
      unlabeled.append(in_domain_sentence())
  labeled = [general_words(rng.randint(4, 10)) for _ in range(N_LABELED)]
  test = [in_domain_sentence() for _ in range(N_TEST)]

  # Bag-of-words embeddings; in-domain words lean towards a shared
  # direction so that the pools separate.
  domain_axis = unit([rng.gauss(0, 1) for _ in range(DIM)])
  word_vec = {}
  for w in general:
    word_vec[w] = [rng.gauss(0, 1) for _ in range(DIM)]
  for w in domain:
    word_vec[w] = [rng.gauss(0, 1) + 3.0 * a for a in domain_axis]

  def embed(words):
    v = [0.0] * DIM
    for w in words:
      for j in range(DIM):
        v[j] += word_vec[w][j]
    return unit(v)

  os.makedirs(out_dir, exist_ok=True)

  def write(name, lines):
    with open(os.path.join(out_dir, name), "w") as f:
      for line in lines:
        f.write(line + "\n")

  write("unlabeled.txt", (" ".join(s) for s in unlabeled))
  write("labeled.tsv",
        (" ".join(s) + "\t" + " ".join(translate(s)) for s in labeled))
  write("reference.tsv",
        (" ".join(s) + "\t" + " ".join(translate(s)) for s in unlabeled))
  write("test.tsv", (" ".join(s) + "\t" + " ".join(translate(s)) for s in test))

  def embedding_lines(sentences):
    yield "dim=%d" % DIM
    for i, s in enumerate(sentences):
      yield "%d\t%s" % (i, " ".join("%.6f" % x for x in embed(s)))

  write("unlabeled.emb", embedding_lines(unlabeled))
  write("labeled.emb", embedding_lines(labeled))
  write("rttl_scores.tsv",
        ("%d\t%.4f" % (i, rng.random()) for i in range(N_UNLABELED)))

  config = {
      "unlabeled": "unlabeled.txt",
      "labeled": "labeled.tsv",
      "reference": "reference.tsv",
      "test": "test.tsv",
      "unlabeled_embeddings": "unlabeled.emb",
      "labeled_embeddings": "labeled.emb",
      "rttl_scores": "rttl_scores.tsv",
      "output_dir": "runs",
      "strategy": "hybrid",
      "sentence_strategy": "csse",
      "phrase_strategy": "ngf-smp",
      "budgets": [200],
      "seed": 1,
      "labeled_subset_size": 300,
      "augmentation": "both",
  }
  with open(os.path.join(out_dir, "config.json"), "w") as f:
    json.dump(config, f, indent=2)
    f.write("\n")


if __name__ == "__main__":
  main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/toy")

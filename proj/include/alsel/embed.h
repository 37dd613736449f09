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

// Sentence embeddings, brute-force k-nearest-neighbour search and the
// margin-normalised cosine ("ratio") score:
//
//   ratio(x, x') = cos(x, x') / (margin(x) / 2 + margin(x') / 2)
//
// where margin(v) is the mean cosine of v to its k nearest neighbours. By
// default x's neighbours are drawn from the pool x' belongs to and vice
// versa (cross-pool neighbourhoods). When a pool has fewer than k candidate
// neighbours the mean runs over the ones available.

#ifndef ALSEL_EMBED_H_
#define ALSEL_EMBED_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "alsel/corpus.h"

namespace alsel {

class EmbeddingStore {
 public:
  EmbeddingStore(int dim, std::string tag);

  // Throws ArgumentError on a dimension mismatch, a non-finite component or
  // a duplicate id.
  void Add(SentenceId id, std::span<const double> vector);

  int dim() const { return dim_; }
  const std::string& tag() const { return tag_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  bool Contains(SentenceId id) const { return row_.contains(id); }

  // Ids in insertion order.
  std::span<const SentenceId> ids() const { return ids_; }
  // Throws LookupError for unknown ids.
  std::span<const double> Vector(SentenceId id) const;
  double Norm(SentenceId id) const;
  std::span<const double> VectorAt(std::size_t row) const;
  double NormAt(std::size_t row) const { return norms_[row]; }
  std::size_t RowOf(SentenceId id) const;

  // Copy restricted to `ids`, in that order.
  EmbeddingStore Subset(std::span<const SentenceId> ids) const;

 private:
  int dim_;
  std::string tag_;
  std::vector<SentenceId> ids_;
  std::vector<double> data_;
  std::vector<double> norms_;
  std::unordered_map<SentenceId, std::size_t> row_;
};

// Header line "dim=D", then "id TAB v1 v2 ... vD" per line.
EmbeddingStore ParseEmbeddings(std::istream& in, std::string tag);
EmbeddingStore LoadEmbeddings(const std::filesystem::path& path,
                              std::string tag);
void WriteEmbeddings(std::ostream& out, const EmbeddingStore& store);
// Reads only the header of an embedding file.
int ReadEmbeddingDim(const std::filesystem::path& path);

// Clamped to [-1, 1]. Throws DegenerateError for a zero-norm vector and
// ArgumentError on a dimension mismatch.
double Cosine(std::span<const double> u, std::span<const double> v);

struct Neighbor {
  SentenceId id = 0;
  double cosine = 0.0;
};

struct NeighborList {
  std::optional<SentenceId> query;
  int k = 0;
  // Descending cosine; ties by ascending id.
  std::vector<Neighbor> neighbors;
};

// Top-k of `pool` by cosine to `query`, excluding `exclude` when given.
// Zero-norm pool vectors are never neighbours.
NeighborList Knn(std::span<const double> query, const EmbeddingStore& pool,
                 int k, std::optional<SentenceId> exclude = std::nullopt);
// Neighbours of a stored point within its own store, itself excluded.
NeighborList Knn(SentenceId query, const EmbeddingStore& pool, int k);

// Mean cosine of the (at most k) nearest neighbours; nullopt when the pool
// offers no neighbour at all.
std::optional<double> NeighborhoodMargin(
    std::span<const double> query, const EmbeddingStore& pool, int k,
    std::optional<SentenceId> exclude = std::nullopt);

enum class NeighborhoodPool {
  kCrossPool,  // x's neighbours come from x's partner pool.
  kSamePool,   // x's neighbours come from x's own pool.
};

// How a sentence's distance to a reference pool is aggregated.
enum class DistanceMode {
  kLiteral,          // min ratio over the pool; larger means more distant.
  kNearestNeighbor,  // max ratio over the pool; smaller means more distant.
};

// Ratio scores between a "left" and a "right" pool with neighbourhood margins
// precomputed once. Holds references: both stores must outlive the scorer.
class RatioScorer {
 public:
  RatioScorer(const EmbeddingStore& left, const EmbeddingStore& right, int k,
              NeighborhoodPool pool = NeighborhoodPool::kCrossPool,
              int workers = 1);

  const EmbeddingStore& left() const { return *left_; }
  const EmbeddingStore& right() const { return *right_; }
  int k() const { return k_; }

  // Throws DegenerateError when the denominator is not positive or a
  // margin is undefined.
  double Ratio(SentenceId left_id, SentenceId right_id) const;

  // Min (literal) or max (nearest-neighbour) ratio over the right pool.
  double Distance(SentenceId left_id, DistanceMode mode) const;
  double NearestSimilarity(SentenceId left_id) const {
    return Distance(left_id, DistanceMode::kNearestNeighbor);
  }

  struct Match {
    SentenceId id = 0;
    double score = 0.0;
  };
  // Argmax ratio over the right pool; ties by ascending id.
  Match BestMatch(SentenceId left_id) const;

  std::optional<double> LeftMargin(SentenceId id) const;
  std::optional<double> RightMargin(SentenceId id) const;

 private:
  double RatioRows(std::size_t left_row, std::size_t right_row) const;

  const EmbeddingStore* left_;
  const EmbeddingStore* right_;
  int k_;
  std::vector<std::optional<double>> left_margin_;
  std::vector<std::optional<double>> right_margin_;
};

// Single-pair convenience forms. Neighbourhoods of x are taken from
// pool_x_prime and those of x' from pool_x.
double RatioScore(SentenceId x, SentenceId x_prime,
                  const EmbeddingStore& pool_x,
                  const EmbeddingStore& pool_x_prime, int k);
double DistToLabeled(SentenceId x, const EmbeddingStore& pool_x,
                     const EmbeddingStore& labeled, int k, DistanceMode mode);
double NearestSimilarity(SentenceId x, const EmbeddingStore& pool_x,
                         const EmbeddingStore& pool, int k);

}  // namespace alsel

#endif  // ALSEL_EMBED_H_

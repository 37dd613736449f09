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

#include "alsel/embed.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "alsel/errors.h"
#include "alsel/parallel.h"

namespace alsel {

namespace {

double Dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double CosineWithNorms(std::span<const double> u, double nu,
                       std::span<const double> v, double nv) {
  if (nu == 0.0 || nv == 0.0) throw DegenerateError("zero-norm vector");
  return std::clamp(Dot(u, v) / (nu * nv), -1.0, 1.0);
}

bool NeighborBefore(const Neighbor& a, const Neighbor& b) {
  if (a.cosine != b.cosine) return a.cosine > b.cosine;
  return a.id < b.id;
}

int ParseDimHeader(const std::string& line) {
  int dim = 0;
  const char* begin = line.data();
  const char* end = line.data() + line.size();
  while (end > begin && (end[-1] == '\r' || end[-1] == ' ')) --end;
  if (line.rfind("dim=", 0) != 0 ||
      std::from_chars(begin + 4, end, dim).ptr != end || dim < 1) {
    throw ParseError("embedding header must be \"dim=D\" with D >= 1", 1);
  }
  return dim;
}

}  // namespace

EmbeddingStore::EmbeddingStore(int dim, std::string tag)
    : dim_(dim), tag_(std::move(tag)) {
  if (dim < 1) throw ArgumentError("embedding dimension must be >= 1");
}

void EmbeddingStore::Add(SentenceId id, std::span<const double> vector) {
  if (static_cast<int>(vector.size()) != dim_) {
    throw ArgumentError("embedding " + std::to_string(id) + " has " +
                        std::to_string(vector.size()) + " components, want " +
                        std::to_string(dim_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) {
      throw ArgumentError("non-finite component in embedding " +
                          std::to_string(id));
    }
  }
  if (!row_.emplace(id, ids_.size()).second) {
    throw ArgumentError("duplicate embedding id " + std::to_string(id));
  }
  ids_.push_back(id);
  data_.insert(data_.end(), vector.begin(), vector.end());
  norms_.push_back(std::sqrt(Dot(vector, vector)));
}

std::size_t EmbeddingStore::RowOf(SentenceId id) const {
  auto it = row_.find(id);
  if (it == row_.end()) {
    throw LookupError("no embedding for id " + std::to_string(id) + " in " +
                      tag_);
  }
  return it->second;
}

std::span<const double> EmbeddingStore::VectorAt(std::size_t row) const {
  return std::span<const double>(data_).subspan(row * dim_, dim_);
}

std::span<const double> EmbeddingStore::Vector(SentenceId id) const {
  return VectorAt(RowOf(id));
}

double EmbeddingStore::Norm(SentenceId id) const { return norms_[RowOf(id)]; }

EmbeddingStore EmbeddingStore::Subset(std::span<const SentenceId> ids) const {
  EmbeddingStore out(dim_, tag_);
  for (SentenceId id : ids) out.Add(id, Vector(id));
  return out;
}

EmbeddingStore ParseEmbeddings(std::istream& in, std::string tag) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("missing embedding header", 1);
  }
  const int dim = ParseDimHeader(line);
  EmbeddingStore store(dim, std::move(tag));
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Tokenize(line)) continue;
    auto fail = [&](const std::string& why) {
      throw ParseError("embedding line " + std::to_string(line_no) + ": " +
                           why,
                       line_no);
    };
    auto tab = line.find('\t');
    if (tab == std::string::npos) fail("missing tab after id");
    SentenceId id = 0;
    auto [id_end, id_ec] =
        std::from_chars(line.data(), line.data() + tab, id);
    if (id_ec != std::errc() || id_end != line.data() + tab) fail("bad id");
    values.clear();
    auto fields = Tokenize(std::string_view(line).substr(tab + 1));
    if (!fields) fail("no vector components");
    for (const auto& f : *fields) {
      double v = 0.0;
      auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || end != f.data() + f.size()) {
        fail("bad component '" + f + "'");
      }
      values.push_back(v);
    }
    try {
      store.Add(id, values);
    } catch (const ArgumentError& e) {
      fail(e.what());
    }
  }
  return store;
}

EmbeddingStore LoadEmbeddings(const std::filesystem::path& path,
                              std::string tag) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ParseEmbeddings(in, std::move(tag));
}

int ReadEmbeddingDim(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing embedding header", 1);
  return ParseDimHeader(line);
}

void WriteEmbeddings(std::ostream& out, const EmbeddingStore& store) {
  out << "dim=" << store.dim() << '\n';
  char buf[32];
  for (std::size_t row = 0; row < store.size(); ++row) {
    out << store.ids()[row] << '\t';
    auto v = store.VectorAt(row);
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
      out << (i ? " " : "") << buf;
    }
    out << '\n';
  }
}

double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ArgumentError("dimension mismatch");
  return CosineWithNorms(u, std::sqrt(Dot(u, u)), v, std::sqrt(Dot(v, v)));
}

NeighborList Knn(std::span<const double> query, const EmbeddingStore& pool,
                 int k, std::optional<SentenceId> exclude) {
  if (k < 1) throw ArgumentError("k must be >= 1");
  if (static_cast<int>(query.size()) != pool.dim()) {
    throw ArgumentError("dimension mismatch");
  }
  const double qn = std::sqrt(Dot(query, query));
  if (qn == 0.0) throw DegenerateError("zero-norm query vector");
  NeighborList out;
  out.query = exclude;
  out.k = k;
  out.neighbors.reserve(pool.size());
  for (std::size_t row = 0; row < pool.size(); ++row) {
    const SentenceId id = pool.ids()[row];
    if (exclude && id == *exclude) continue;
    if (pool.NormAt(row) == 0.0) continue;  // No defined cosine.
    out.neighbors.push_back(
        {id, CosineWithNorms(query, qn, pool.VectorAt(row), pool.NormAt(row))});
  }
  const std::size_t keep =
      std::min(out.neighbors.size(), static_cast<std::size_t>(k));
  std::partial_sort(out.neighbors.begin(), out.neighbors.begin() + keep,
                    out.neighbors.end(), NeighborBefore);
  out.neighbors.resize(keep);
  return out;
}

NeighborList Knn(SentenceId query, const EmbeddingStore& pool, int k) {
  return Knn(pool.Vector(query), pool, k, query);
}

std::optional<double> NeighborhoodMargin(std::span<const double> query,
                                         const EmbeddingStore& pool, int k,
                                         std::optional<SentenceId> exclude) {
  NeighborList nn = Knn(query, pool, k, exclude);
  if (nn.neighbors.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& n : nn.neighbors) sum += n.cosine;
  return sum / static_cast<double>(nn.neighbors.size());
}

RatioScorer::RatioScorer(const EmbeddingStore& left,
                         const EmbeddingStore& right, int k,
                         NeighborhoodPool pool, int workers)
    : left_(&left), right_(&right), k_(k) {
  if (k < 1) throw ArgumentError("k must be >= 1");
  if (left.dim() != right.dim()) {
    throw ArgumentError("embedding dimensions differ: " + left.tag() + "=" +
                        std::to_string(left.dim()) + ", " + right.tag() + "=" +
                        std::to_string(right.dim()));
  }
  if (left.empty() || right.empty()) {
    throw ArgumentError("ratio scoring needs two non-empty pools");
  }
  const bool same_store = &left == &right;

  auto margins = [&](const EmbeddingStore& self, const EmbeddingStore& other,
                     std::vector<std::optional<double>>& out) {
    const bool within = pool == NeighborhoodPool::kSamePool;
    const EmbeddingStore& nbrs = within ? self : other;
    const bool exclude_self = within || same_store;
    out.assign(self.size(), std::nullopt);
    ParallelFor(self.size(), workers, [&](std::size_t row) {
      const SentenceId id = self.ids()[row];
      if (self.NormAt(row) == 0.0) return;  // Reported lazily by Ratio().
      try {
        out[row] = NeighborhoodMargin(
            self.VectorAt(row), nbrs, k,
            exclude_self ? std::optional<SentenceId>(id) : std::nullopt);
      } catch (const DegenerateError&) {
        // Zero-norm neighbours leave the margin undefined.
      }
    });
  };
  margins(left, right, left_margin_);
  margins(right, left, right_margin_);
}

std::optional<double> RatioScorer::LeftMargin(SentenceId id) const {
  return left_margin_[left_->RowOf(id)];
}

std::optional<double> RatioScorer::RightMargin(SentenceId id) const {
  return right_margin_[right_->RowOf(id)];
}

double RatioScorer::RatioRows(std::size_t lrow, std::size_t rrow) const {
  const auto& lm = left_margin_[lrow];
  const auto& rm = right_margin_[rrow];
  if (!lm || !rm) {
    throw DegenerateError("undefined neighbourhood for pair (" +
                          std::to_string(left_->ids()[lrow]) + ", " +
                          std::to_string(right_->ids()[rrow]) + ")");
  }
  const double denom = *lm / 2.0 + *rm / 2.0;
  if (!(denom > 0.0)) {
    throw DegenerateError("non-positive neighbourhood denominator for pair (" +
                          std::to_string(left_->ids()[lrow]) + ", " +
                          std::to_string(right_->ids()[rrow]) + ")");
  }
  const double cos = CosineWithNorms(left_->VectorAt(lrow), left_->NormAt(lrow),
                                     right_->VectorAt(rrow),
                                     right_->NormAt(rrow));
  return cos / denom;
}

double RatioScorer::Ratio(SentenceId left_id, SentenceId right_id) const {
  return RatioRows(left_->RowOf(left_id), right_->RowOf(right_id));
}

double RatioScorer::Distance(SentenceId left_id, DistanceMode mode) const {
  const std::size_t lrow = left_->RowOf(left_id);
  const bool take_min = mode == DistanceMode::kLiteral;
  double best = take_min ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  for (std::size_t rrow = 0; rrow < right_->size(); ++rrow) {
    const double r = RatioRows(lrow, rrow);
    best = take_min ? std::min(best, r) : std::max(best, r);
  }
  return best;
}

RatioScorer::Match RatioScorer::BestMatch(SentenceId left_id) const {
  const std::size_t lrow = left_->RowOf(left_id);
  Match best{0, -std::numeric_limits<double>::infinity()};
  bool found = false;
  for (std::size_t rrow = 0; rrow < right_->size(); ++rrow) {
    const double r = RatioRows(lrow, rrow);
    const SentenceId id = right_->ids()[rrow];
    if (!found || r > best.score || (r == best.score && id < best.id)) {
      best = {id, r};
      found = true;
    }
  }
  return best;
}

double RatioScore(SentenceId x, SentenceId x_prime,
                  const EmbeddingStore& pool_x,
                  const EmbeddingStore& pool_x_prime, int k) {
  const bool same = &pool_x == &pool_x_prime;
  auto mx = NeighborhoodMargin(pool_x.Vector(x), pool_x_prime, k,
                               same ? std::optional<SentenceId>(x)
                                    : std::nullopt);
  auto mxp = NeighborhoodMargin(pool_x_prime.Vector(x_prime), pool_x, k,
                                same ? std::optional<SentenceId>(x_prime)
                                     : std::nullopt);
  if (!mx || !mxp) throw DegenerateError("empty neighbourhood");
  const double denom = *mx / 2.0 + *mxp / 2.0;
  if (!(denom > 0.0)) {
    throw DegenerateError("non-positive neighbourhood denominator");
  }
  return Cosine(pool_x.Vector(x), pool_x_prime.Vector(x_prime)) / denom;
}

double DistToLabeled(SentenceId x, const EmbeddingStore& pool_x,
                     const EmbeddingStore& labeled, int k, DistanceMode mode) {
  if (labeled.empty()) throw ArgumentError("empty labeled subset");
  RatioScorer scorer(pool_x, labeled, k);
  return scorer.Distance(x, mode);
}

double NearestSimilarity(SentenceId x, const EmbeddingStore& pool_x,
                         const EmbeddingStore& pool, int k) {
  if (pool.empty()) throw ArgumentError("empty pool");
  RatioScorer scorer(pool_x, pool, k);
  return scorer.NearestSimilarity(x);
}

}  // namespace alsel

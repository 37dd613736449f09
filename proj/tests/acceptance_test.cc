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

// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   acceptance_test                 run all criteria
//   acceptance_test --criterion N   run criterion N only

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "alsel/align.h"
#include "alsel/analyze.h"
#include "alsel/augment.h"
#include "alsel/mix.h"
#include "alsel/ngram.h"
#include "alsel/pipeline.h"
#include "alsel/select.h"
#include "brute_force.h"
#include "test_util.h"

using namespace alsel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::vector<double> AbsGaussianRows(std::mt19937_64& rng, std::size_t rows,
                                    std::size_t dim) {
  std::normal_distribution<double> g;
  std::vector<double> out(rows * dim);
  for (auto& x : out) x = std::abs(g(rng));
  return out;
}

EmbeddingStore Store(const std::vector<double>& flat, std::size_t dim,
                     double scale = 1.0) {
  EmbeddingStore s(static_cast<int>(dim), "s");
  std::vector<double> row(dim);
  for (std::size_t r = 0; r * dim < flat.size(); ++r) {
    for (std::size_t d = 0; d < dim; ++d) row[d] = flat[r * dim + d] * scale;
    s.Add(static_cast<SentenceId>(r), row);
  }
  return s;
}

std::vector<SentenceId> SentenceOrder(const SelectionResult& r) {
  std::vector<SentenceId> ids;
  for (const auto& s : r.sentences) ids.push_back(s.id);
  return ids;
}

std::vector<Phrase> PhraseOrder(const SelectionResult& r) {
  std::vector<Phrase> out;
  for (const auto& p : r.phrases) out.push_back(p.phrase);
  return out;
}

// Spend with the final item removed must be strictly below the budget.
bool LastItemInvariant(const std::vector<std::int64_t>& costs,
                       std::int64_t budget) {
  if (costs.empty()) return true;
  std::int64_t spent = 0;
  for (auto c : costs) spent += c;
  return spent - costs.back() < budget;
}

std::vector<std::int64_t> SentenceCosts(const SelectionResult& r) {
  std::vector<std::int64_t> out;
  for (const auto& s : r.sentences) out.push_back(s.cost);
  return out;
}

std::vector<std::int64_t> PhraseCosts(const SelectionResult& r) {
  std::vector<std::int64_t> out;
  for (const auto& p : r.phrases) out.push_back(p.cost);
  return out;
}

// Random corpora shared by criteria 2 and 3.
std::vector<std::vector<Tokens>> SharedCorpora() {
  std::mt19937_64 rng(20260);
  std::uniform_int_distribution<int> sentences(1, 50), vocab(1, 10);
  std::vector<std::vector<Tokens>> out;
  for (int i = 0; i < 120; ++i) {
    out.push_back(brute::RandomCorpus(rng, sentences(rng), vocab(rng), 9));
  }
  return out;
}

Outcome C1() {
  const auto t0 = Clock::now();
  std::ifstream in(testing_util::DataDir() / "table3.tsv");
  if (!in) return {false, "table3.tsv missing"};
  const auto rows = CorrelateTable(in);
  const double seconds = Seconds(t0);
  const std::map<std::string, double> target = {
      {"uni", 0.90}, {"bi", 0.83}, {"tri", 0.80}, {"4-gram", 0.78}};
  bool pass = rows.size() == target.size() && seconds < 1.0;
  std::string detail;
  for (const auto& r : rows) {
    auto it = target.find(r.column);
    const bool ok = it != target.end() && std::abs(r.r - it->second) <= 0.005;
    pass = pass && ok;
    detail += r.column + " r=" + Fmt("%.4f", r.r) +
              (it == target.end() ? "" : " (want " + Fmt("%.2f", it->second) + ")") +
              "; ";
  }
  return {pass, detail + Fmt("%.3fs", seconds)};
}

Outcome C2() {
  const auto t0 = Clock::now();
  int mismatches = 0, corpora = 0;
  for (const auto& us : SharedCorpora()) {
    ++corpora;
    const auto lib = ComputeSemiMaximalSet(ExtractNgrams(testing_util::MakeCorpus(us), 4));
    const auto oracle = brute::SemiMaximal(brute::CountSpans(us, 4));
    std::set<Tokens> got;
    for (const auto& p : lib.phrases()) got.insert(p.tokens);
    if (got != oracle) ++mismatches;
  }
  const double seconds = Seconds(t0);
  return {mismatches == 0 && corpora >= 100 && seconds < 30.0,
          std::to_string(corpora) + " corpora, " + std::to_string(mismatches) +
              " mismatches, " + Fmt("%.2fs", seconds)};
}

Outcome C3() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<std::int64_t> budget(5, 50);
  std::uniform_int_distribution<int> lsize(1, 20), vocab(1, 10);
  int checks = 0, mismatches = 0;
  for (const auto& us : SharedCorpora()) {
    const auto ls = brute::RandomCorpus(rng, lsize(rng), vocab(rng), 6);
    const auto u = ExtractNgrams(testing_util::MakeCorpus(us), 4);
    const auto l = ExtractNgrams(testing_util::MakeCorpus(ls), 4);
    const auto uc = brute::CountSpans(us, 4), lc = brute::CountSpans(ls, 4);
    const auto smp = brute::SemiMaximal(uc);
    for (int rep = 0; rep < 3; ++rep) {
      const std::int64_t b = budget(rng);
      std::vector<Phrase> e1, e2;
      for (auto& w : brute::FrequencyGreedy(uc, lc, b, nullptr)) e1.emplace_back(w);
      for (auto& w : brute::FrequencyGreedy(uc, lc, b, &smp)) e2.emplace_back(w);
      if (PhraseOrder(SelectNgf(u, l, b)) != e1) ++mismatches;
      if (PhraseOrder(SelectNgfSmp(u, l, b)) != e2) ++mismatches;
      checks += 2;
    }
  }
  return {mismatches == 0, std::to_string(checks) + " selections, " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome C4() {
  std::mt19937_64 rng(404);
  const auto us = brute::RandomCorpus(rng, 50, 10, 12);
  const Corpus u = testing_util::MakeCorpus(us);
  const auto ui = ExtractNgrams(u, 4);
  const auto li = ExtractNgrams(
      testing_util::MakeCorpus(brute::RandomCorpus(rng, 15, 10, 6)), 4);
  const std::size_t dim = 6;
  const auto ue = Store(AbsGaussianRows(rng, us.size(), dim), dim);
  const auto le = Store(AbsGaussianRows(rng, 12, dim), dim);
  const RatioScorer scorer(ue, le, 3);
  SentenceScores scores;
  std::normal_distribution<double> g;
  for (SentenceId i = 0; i < us.size(); ++i) scores[i] = g(rng);

  std::int64_t pool_words = 0;
  for (const auto& s : us) pool_words += static_cast<std::int64_t>(s.size());
  std::uniform_int_distribution<std::int64_t> budget(1, pool_words + 20);

  std::map<std::string, int> failures;
  int split_failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::int64_t B = budget(rng);
    auto check = [&](const std::string& name, bool ok) {
      if (!ok) ++failures[name];
    };
    check("random-sent", LastItemInvariant(
        SentenceCosts(SelectRandomSentences(u, B, trial)), B));
    check("csse", LastItemInvariant(SentenceCosts(SelectCsse(u, scorer, B, {})), B));
    check("csse-nn", LastItemInvariant(
        SentenceCosts(SelectCsse(u, scorer, B, {DistanceMode::kNearestNeighbor, 1})), B));
    check("rttl", LastItemInvariant(SentenceCosts(SelectRttl(u, scores, B)), B));
    check("random-phrase", LastItemInvariant(
        PhraseCosts(SelectRandomPhrases(ui, li, B, trial)), B));
    check("ngf", LastItemInvariant(PhraseCosts(SelectNgf(ui, li, B)), B));
    check("ngf-smp", LastItemInvariant(PhraseCosts(SelectNgfSmp(ui, li, B)), B));

    const auto h = SelectHybrid(
        B, [&](std::int64_t b) { return SelectCsse(u, scorer, b, {}); },
        [&](std::int64_t b, const SelectionResult&) {
          return SelectNgfSmp(ui, li, b);
        });
    if (h.budget.sentence_share != (B + 1) / 2 ||
        h.budget.phrase_share != B / 2 ||
        h.budget.sentence_share + h.budget.phrase_share != B) {
      ++split_failures;
    }
    check("hybrid", LastItemInvariant(SentenceCosts(h), h.budget.sentence_share) &&
                        LastItemInvariant(PhraseCosts(h), h.budget.phrase_share));
  }
  std::string detail = "1000 budgets x 8 strategies";
  for (const auto& [name, n] : failures) {
    detail += "; " + name + " violated " + std::to_string(n) + "x";
  }
  detail += "; split mismatches " + std::to_string(split_failures);
  return {failures.empty() && split_failures == 0, detail};
}

Outcome C5() {
  // Equal cosines: orthogonal axes plus a shared component s.
  double worst = 0.0;
  for (double s : {0.2, 1.0, 3.0}) {
    const int n = 4, dim = 2 * n + 1;
    std::vector<double> left(n * dim, 0.0), right(n * dim, 0.0);
    for (int i = 0; i < n; ++i) {
      left[i * dim + i] = 1.0;
      left[i * dim + dim - 1] = s;
      right[i * dim + n + i] = 1.0;
      right[i * dim + dim - 1] = s;
    }
    const auto ls = Store(left, dim), rs = Store(right, dim);
    for (int k : {1, 2, 4}) {
      const RatioScorer scorer(ls, rs, k);
      for (SentenceId a = 0; a < n; ++a) {
        for (SentenceId b = 0; b < n; ++b) {
          worst = std::max(worst, std::abs(scorer.Ratio(a, b) - 1.0));
        }
      }
    }
  }

  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> lambda(1e-3, 1e3);
  const auto us = brute::RandomCorpus(rng, 40, 10, 8);
  const Corpus u = testing_util::MakeCorpus(us);
  ParallelCorpus l("l");
  for (SentenceId i = 0; i < 30; ++i) {
    l.Add({i, Tokens{"w" + std::to_string(i)}, Tokens{"t" + std::to_string(i)}});
  }
  int order_changes = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 5;
    const auto a = AbsGaussianRows(rng, us.size(), dim);
    const auto b = AbsGaussianRows(rng, 30, dim);
    const double lam = lambda(rng);
    const auto ue = Store(a, dim), le = Store(b, dim);
    const auto ue2 = Store(a, dim, lam), le2 = Store(b, dim, lam);
    const RatioScorer s1(ue, le, 3), s2(ue2, le2, 3);
    for (auto mode : {DistanceMode::kLiteral, DistanceMode::kNearestNeighbor}) {
      if (SentenceOrder(SelectCsse(u, s1, 1000, {mode, 1})) !=
          SentenceOrder(SelectCsse(u, s2, 1000, {mode, 1}))) {
        ++order_changes;
      }
    }
    const RatioScorer r1(le, ue, 3), r2(le2, ue2, 3);
    auto ids = [](const RetrievalResult& r) {
      std::vector<SentenceId> out;
      for (const auto& p : r.pairs) out.push_back(p.id);
      return out;
    };
    if (ids(RetrieveSimilar(l, r1, 30)) != ids(RetrieveSimilar(l, r2, 30))) {
      ++order_changes;
    }
  }
  return {worst <= 1e-9 && order_changes == 0,
          "max |ratio-1| = " + Fmt("%.2e", worst) + "; order changes " +
              std::to_string(order_changes) + " of 60"};
}

Outcome C6() {
  std::mt19937_64 rng(606);
  int decreases = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5 + trial;
    const auto src = brute::RandomCorpus(rng, n, 7, 6);
    auto tgt = brute::RandomCorpus(rng, n, 6, 6);
    ParallelCorpus pc("r");
    for (int i = 0; i < n; ++i) {
      for (auto& w : tgt[i]) w = "t" + w;
      pc.Add({static_cast<SentenceId>(i), src[i], tgt[i]});
    }
    const auto ll = TrainIbm1(pc, {10, 1}).log_likelihoods;
    for (std::size_t i = 1; i < ll.size(); ++i) {
      if (ll[i] < ll[i - 1] - 1e-9) ++decreases;
    }
  }
  ParallelCorpus one("one");
  one.Add({0, Tokens{"hund"}, Tokens{"dog"}});
  const double t = TrainIbm1(one, {5, 1}).table.Prob("hund", "dog");
  return {decreases == 0 && t >= 1.0 - 1e-6,
          "30 corpora, " + std::to_string(decreases) +
              " decreases; t(dog|hund) = " + Fmt("%.9f", t)};
}

Outcome C7() {
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> len(1, 15), word(0, 40);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Tokens x(len(rng));
    for (auto& w : x) w = "w" + std::to_string(word(rng));
    std::uniform_int_distribution<std::size_t> plen(1, x.size());
    Phrase p;
    p.tokens.resize(plen(rng));
    for (auto& w : p.tokens) w = "p" + std::to_string(word(rng));
    std::uniform_int_distribution<std::size_t> pos(0, x.size() - p.size());
    const std::size_t i = pos(rng);
    const Tokens s = Switch(x, p, i);
    const Tokens c = Contextualize(x, p);
    const bool ok =
        s.size() == x.size() &&
        std::equal(p.tokens.begin(), p.tokens.end(), s.begin() + i) &&
        std::equal(x.begin(), x.begin() + i, s.begin()) &&
        std::equal(x.begin() + i + p.size(), x.end(), s.begin() + i + p.size()) &&
        c.size() == x.size() + p.size() &&
        std::equal(x.begin(), x.end(), c.begin()) &&
        std::equal(p.tokens.begin(), p.tokens.end(), c.end() - p.size());
    if (!ok) ++bad;
  }
  return {bad == 0, "1000 cases, " + std::to_string(bad) + " violations"};
}

Outcome C8() {
  std::mt19937_64 rng(808);
  int not_hundred = 0;
  for (const auto& s : brute::RandomCorpus(rng, 500, 12, 30)) {
    if (SentenceBleu(s, s).score != 100.0) ++not_hundred;
  }
  std::ifstream in(testing_util::DataDir() / "bleu_cases.tsv");
  int cases = 0;
  double worst = 0.0;
  for (std::string line; std::getline(in, line);) {
    std::istringstream row(line);
    std::string hyp, ref, expected;
    std::getline(row, hyp, '\t');
    std::getline(row, ref, '\t');
    std::getline(row, expected, '\t');
    const double got =
        SentenceBleu(testing_util::Toks(hyp), testing_util::Toks(ref)).score;
    worst = std::max(worst, std::abs(got - std::stod(expected)));
    ++cases;
  }
  return {not_hundred == 0 && cases == 10 && worst <= 1e-6,
          "identity failures " + std::to_string(not_hundred) + " of 500; " +
              std::to_string(cases) + " fixture cases, max diff " +
              Fmt("%.2e", worst)};
}

Outcome C9() {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> count(1, 15), vocab(2, 10);
  int decreases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int v = vocab(rng);
    const auto test = brute::RandomCorpus(rng, count(rng), v, 8);
    auto covering = brute::RandomCorpus(rng, count(rng), v, 8);
    const std::size_t before = covering.size();
    const auto extra = brute::RandomCorpus(rng, count(rng), v, 8);
    covering.insert(covering.end(), extra.begin(), extra.end());
    for (auto w : {CoverageWeighting::kTypes, CoverageWeighting::kTokens}) {
      const auto a =
          NgramCoverage(std::span(covering).first(before), test, 4, w);
      const auto b = NgramCoverage(covering, test, 4, w);
      for (int n = 0; n < 4; ++n) {
        if (b.percent[n] < a.percent[n]) ++decreases;
      }
    }
  }
  return {decreases == 0,
          "100 pairs, " + std::to_string(decreases) + " decreases"};
}

fs::path ToyCopy(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("alsel_accept_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::copy(testing_util::DataDir() / "toy", dir, fs::copy_options::recursive);
  return dir;
}

Outcome C10() {
  auto digests = [](int workers, const std::string& name, double* seconds) {
    const auto dir = ToyCopy(name);
    RunConfig c = LoadConfig(dir / "config.json");
    c.budgets = {200};
    c.workers = workers;
    const auto t0 = Clock::now();
    RunPipeline(c);
    if (seconds) *seconds = Seconds(t0);
    return DigestDirectory(fs::path(c.output_dir) / RunDirName(200));
  };
  double seconds = 0.0;
  const auto a = digests(1, "c10a", &seconds);
  const auto b = digests(1, "c10b", nullptr);
  const auto c = digests(4, "c10c", nullptr);
  const bool ok = !a.empty() && a.contains("manifest.jsonl") && a == b && a == c;
  return {ok && seconds < 10.0,
          std::to_string(a.size()) + " files; rerun " +
              (a == b ? "identical" : "DIFFERS") + "; 4 workers " +
              (a == c ? "identical" : "DIFFERS") + "; " + Fmt("%.2fs", seconds)};
}

Outcome C11() {
  const RunConfig c = LoadConfig(testing_util::DataDir() / "toy" / "config.json");
  Inputs in(c);
  const auto ui = ExtractNgrams(in.Unlabeled(), c.max_n);
  const auto& li = in.LabeledIndex();
  std::vector<Tokens> test;
  for (const auto& p : in.Test().pairs()) test.push_back(p.source);
  std::vector<Tokens> base;
  for (const auto& p : in.Labeled().pairs()) base.push_back(p.source);

  auto coverage = [&](const SelectionResult& r) {
    std::vector<Tokens> covering = base;
    for (const auto& p : r.phrases) covering.push_back(p.phrase.tokens);
    return NgramCoverage(covering, test, 4).percent;
  };
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };

  const std::int64_t budget = 100;
  const auto smp = coverage(SelectNgfSmp(ui, li, budget));
  bool pass = true;
  double best_random_uni = 0.0, best_random_mean = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto rnd = coverage(SelectRandomPhrases(ui, li, budget, seed));
    best_random_uni = std::max(best_random_uni, rnd[0]);
    best_random_mean = std::max(best_random_mean, mean(rnd));
    pass = pass && smp[0] > rnd[0] && mean(smp) > mean(rnd);
  }
  return {pass, "budget 100; ngf-smp uni " + Fmt("%.2f", smp[0]) + " mean " +
                    Fmt("%.2f", mean(smp)) + "; best of 10 random uni " +
                    Fmt("%.2f", best_random_uni) + " mean " +
                    Fmt("%.2f", best_random_mean)};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>&
Criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>>
      all = {{"coverage-correlation", C1},  {"semi-maximal-oracle", C2},
             {"greedy-oracle", C3},         {"budget-ledger", C4},
             {"ratio-algebra", C5},         {"ibm1", C6},
             {"augment-identities", C7},    {"sentence-bleu", C8},
             {"coverage-monotone", C9},     {"pipeline-determinism", C10},
             {"ngf-smp-beats-random", C11}};
  return all;
}

bool Run(std::size_t index) {
  const auto& [name, fn] = Criteria()[index];
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s C%zu %s: %s\n", o.pass ? "PASS" : "FAIL", index + 1,
              name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    const int n = std::atoi(argv[2]);
    if (n < 1 || n > static_cast<int>(Criteria().size())) {
      std::fprintf(stderr, "criterion must be 1..%zu\n", Criteria().size());
      return 2;
    }
    return Run(n - 1) ? 0 : 1;
  }
  if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
    return 2;
  }
  int failed = 0;
  for (std::size_t i = 0; i < Criteria().size(); ++i) failed += !Run(i);
  return failed == 0 ? 0 : 1;
}

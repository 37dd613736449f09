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

#include "alsel/stages.h"

#include <fstream>
#include <set>
#include <sstream>

#include "alsel/analyze.h"
#include "alsel/augment.h"
#include "alsel/errors.h"
#include "alsel/mix.h"
#include "alsel/oracle.h"

namespace alsel {

namespace fs = std::filesystem;

struct Inputs::Cache {
  std::optional<Corpus> unlabeled;
  std::optional<ParallelCorpus> labeled;
  std::optional<ParallelCorpus> labeled_prime;
  std::optional<ParallelCorpus> reference;
  std::optional<ParallelCorpus> test;
  std::optional<EmbeddingStore> unlabeled_emb;
  std::optional<EmbeddingStore> labeled_prime_emb;
  std::optional<OccurrenceIndex> labeled_index;
  std::unique_ptr<RatioScorer> selection_scorer;
  std::unique_ptr<RatioScorer> retrieval_scorer;
  std::optional<NGramLM> lm;
};

Inputs::Inputs(RunConfig config)
    : config_(std::move(config)), cache_(std::make_unique<Cache>()) {}

Inputs::~Inputs() = default;

const Corpus& Inputs::Unlabeled() {
  if (!cache_->unlabeled) {
    cache_->unlabeled = LoadCorpus(config_.unlabeled, "U");
  }
  return *cache_->unlabeled;
}

const ParallelCorpus& Inputs::Labeled() {
  if (!cache_->labeled) {
    cache_->labeled = LoadParallelCorpus(config_.labeled, "L");
  }
  return *cache_->labeled;
}

const ParallelCorpus& Inputs::LabeledPrime() {
  if (!cache_->labeled_prime) {
    std::vector<SentenceId> ids;
    for (const auto& p : Labeled().pairs()) ids.push_back(p.id);
    ids = SubsampleIds(ids, static_cast<std::size_t>(config_.labeled_subset_size),
                       config_.seed);
    cache_->labeled_prime = Labeled().Subset(ids);
  }
  return *cache_->labeled_prime;
}

const ParallelCorpus& Inputs::Reference() {
  if (!cache_->reference) {
    if (config_.reference.empty()) {
      throw ConfigError("no oracle reference configured");
    }
    cache_->reference = LoadParallelCorpus(config_.reference, "reference");
  }
  return *cache_->reference;
}

const ParallelCorpus& Inputs::Test() {
  if (!cache_->test) {
    if (config_.test.empty()) throw ConfigError("no test set configured");
    cache_->test = LoadParallelCorpus(config_.test, "test");
  }
  return *cache_->test;
}

const EmbeddingStore& Inputs::UnlabeledEmbeddings() {
  if (!cache_->unlabeled_emb) {
    cache_->unlabeled_emb = LoadEmbeddings(config_.unlabeled_embeddings, "U");
  }
  return *cache_->unlabeled_emb;
}

const EmbeddingStore& Inputs::LabeledPrimeEmbeddings() {
  if (!cache_->labeled_prime_emb) {
    EmbeddingStore all = LoadEmbeddings(config_.labeled_embeddings, "L");
    std::vector<SentenceId> ids;
    for (const auto& p : LabeledPrime().pairs()) ids.push_back(p.id);
    cache_->labeled_prime_emb = all.Subset(ids);
  }
  return *cache_->labeled_prime_emb;
}

const OccurrenceIndex& Inputs::LabeledIndex() {
  if (!cache_->labeled_index) {
    cache_->labeled_index =
        ExtractNgrams(Labeled().SourceSide(), config_.max_n);
  }
  return *cache_->labeled_index;
}

namespace {

NeighborhoodPool PoolOf(const RunConfig& c) {
  return c.neighborhood == "same" ? NeighborhoodPool::kSamePool
                                  : NeighborhoodPool::kCrossPool;
}

}  // namespace

const RatioScorer& Inputs::SelectionScorer() {
  if (!cache_->selection_scorer) {
    cache_->selection_scorer = std::make_unique<RatioScorer>(
        UnlabeledEmbeddings(), LabeledPrimeEmbeddings(), config_.k,
        PoolOf(config_), config_.workers);
  }
  return *cache_->selection_scorer;
}

const RatioScorer& Inputs::RetrievalScorer() {
  if (!cache_->retrieval_scorer) {
    cache_->retrieval_scorer = std::make_unique<RatioScorer>(
        LabeledPrimeEmbeddings(), UnlabeledEmbeddings(), config_.k,
        PoolOf(config_), config_.workers);
  }
  return *cache_->retrieval_scorer;
}

const NGramLM& Inputs::LanguageModel() {
  if (!cache_->lm) {
    cache_->lm = NGramLM::Train(Unlabeled(), {config_.lm_order, config_.lm_add_k});
  }
  return *cache_->lm;
}

void WriteTextFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

nlohmann::json ReadJsonFile(const fs::path& path) {
  try {
    return nlohmann::json::parse(ReadFile(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

namespace {

std::string Dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("missing stage input " + path.string() +
                  " (run the earlier stage first)");
  }
  return in;
}

SelectionResult SelectSentences(Inputs& in, const std::string& name,
                                std::int64_t budget) {
  const RunConfig& c = in.config();
  if (name == "random-sent") {
    return SelectRandomSentences(in.Unlabeled(), budget, c.seed);
  }
  if (name == "csse") {
    CsseOptions options;
    options.mode = c.dist_mode == "nn" ? DistanceMode::kNearestNeighbor
                                       : DistanceMode::kLiteral;
    options.workers = c.workers;
    return SelectCsse(in.Unlabeled(), in.SelectionScorer(), budget, options);
  }
  if (name == "rttl") {
    SentenceScores scores =
        c.rttl_scores.empty()
            ? RoundTripBleuScores(in.Unlabeled(),
                                  LoadCorpus(c.rttl_roundtrip, "round-trip"))
            : LoadScores(c.rttl_scores);
    return SelectRttl(in.Unlabeled(), scores, budget);
  }
  throw ConfigError("unknown sentence strategy '" + name + "'");
}

SelectionResult SelectPhrases(Inputs& in, const std::string& name,
                              const Corpus& pool, std::int64_t budget,
                              const PhraseSet* blocked) {
  const RunConfig& c = in.config();
  const OccurrenceIndex index = ExtractNgrams(pool, c.max_n);
  if (name == "random-phrase") {
    return SelectRandomPhrases(index, in.LabeledIndex(), budget, c.seed,
                               blocked);
  }
  if (name == "ngf") return SelectNgf(index, in.LabeledIndex(), budget, blocked);
  if (name == "ngf-smp") {
    return SelectNgfSmp(index, in.LabeledIndex(), budget, blocked);
  }
  throw ConfigError("unknown phrase strategy '" + name + "'");
}

std::vector<Tokens> SelectedText(Inputs& in, const SelectionResult& sel) {
  std::vector<Tokens> out;
  for (const auto& s : sel.sentences) out.push_back(in.Unlabeled().At(s.id).tokens);
  for (const auto& p : sel.phrases) out.push_back(p.phrase.tokens);
  return out;
}

SelectionResult ReadSelection(const fs::path& run_dir) {
  auto f = OpenInput(run_dir / "selection.jsonl");
  return ReadSelectionJsonl(f);
}

std::vector<OracleResponse> ReadOracle(const fs::path& run_dir) {
  auto f = OpenInput(run_dir / "oracle.jsonl");
  return ReadProvenanceJsonl(f);
}

bool PhrasePoolIsNgfSmp(const RunConfig& c) {
  return c.strategy == "ngf-smp" ||
         (c.strategy == "hybrid" && c.phrase_strategy == "ngf-smp");
}

}  // namespace

StageOutput StageExtract(Inputs& in, const fs::path& run_dir) {
  StageOutput out;
  out.stage = "extract";
  const OccurrenceIndex index = ExtractNgrams(in.Unlabeled(), in.config().max_n);
  const SemiMaximalSet smp = ComputeSemiMaximalSet(index);
  std::ostringstream ngrams, semi;
  WriteIndexTsv(ngrams, index);
  for (const auto& p : index.SortedPhrases()) {
    if (smp.Contains(p)) semi << p.ToString() << '\t' << index.Count(p) << '\n';
  }
  WriteTextFile(run_dir / "ngrams.tsv", ngrams.str());
  WriteTextFile(run_dir / "semimaximal.tsv", semi.str());
  out.files = {"ngrams.tsv", "semimaximal.tsv"};
  out.summary = {{"phrases", index.size()}, {"semi_maximal", smp.size()}};
  return out;
}

SelectionResult RunSelection(Inputs& in, std::int64_t budget,
                             const PhraseSet* blocked) {
  const RunConfig& c = in.config();
  if (c.strategy == "hybrid") {
    return SelectHybrid(
        budget,
        [&](std::int64_t b) { return SelectSentences(in, c.sentence_strategy, b); },
        [&](std::int64_t b, const SelectionResult& s) {
          // Phrases come from U with the selected sentences removed.
          std::set<SentenceId> taken;
          for (const auto& x : s.sentences) taken.insert(x.id);
          Corpus rest("U-minus-S");
          for (const auto& x : in.Unlabeled().sentences()) {
            if (!taken.contains(x.id)) rest.Add(x);
          }
          return SelectPhrases(in, c.phrase_strategy, rest, b, blocked);
        });
  }
  if (c.strategy == "random-sent" || c.strategy == "csse" ||
      c.strategy == "rttl") {
    return SelectSentences(in, c.strategy, budget);
  }
  return SelectPhrases(in, c.strategy, in.Unlabeled(), budget, blocked);
}

StageOutput StageSelect(Inputs& in, const fs::path& run_dir,
                        std::int64_t budget, const PhraseSet* blocked) {
  StageOutput out;
  out.stage = "select";
  const SelectionResult r = RunSelection(in, budget, blocked);
  std::ostringstream jsonl;
  WriteSelectionJsonl(jsonl, r);
  WriteTextFile(run_dir / "selection.jsonl", jsonl.str());
  out.summary = SelectionSummary(r);
  WriteTextFile(run_dir / "selection.json", Dump(out.summary));
  out.files = {"selection.jsonl", "selection.json"};
  return out;
}

TranslationTable TrainAlignmentTable(Inputs& in) {
  const RunConfig& c = in.config();
  ParallelCorpus joint("alignment-training");
  SentenceId next = 0;
  for (const ParallelCorpus* part : {&in.Labeled(), &in.Reference()}) {
    for (const auto& p : part->pairs()) joint.Add({next++, p.source, p.target});
  }
  if (c.alignment_direction == "target-source") joint = Swapped(joint);
  return TrainIbm1(joint, {c.ibm1_iterations, c.workers}).table;
}

StageOutput StageOracle(Inputs& in, const fs::path& run_dir,
                        std::int64_t budget) {
  const RunConfig& c = in.config();
  const bool reverse = c.alignment_direction == "target-source";
  StageOutput out;
  out.stage = "oracle";
  const TranslationTable table = TrainAlignmentTable(in);
  std::ostringstream table_tsv;
  table.WriteTsv(table_tsv);
  WriteTextFile(run_dir / "ttable.tsv", table_tsv.str());

  ReferenceAligner aligner =
      c.alignments.empty()
          ? TableAligner(in.Reference(), table, reverse)
          : FixedAligner(LoadPharaohFile(c.alignments, in.Reference()));

  PhraseSet blocked;
  std::vector<DroppedPhrase> all_dropped;
  int rounds = 0;
  SelectionResult sel = ReadSelection(run_dir);
  PhraseTranslation phrases;
  while (true) {
    std::vector<Phrase> ps;
    for (const auto& p : sel.phrases) ps.push_back(p.phrase);
    phrases = TranslatePhrases(ps, in.Reference(), aligner, c.workers);
    if (!c.refund_dropped || phrases.dropped.empty()) break;
    for (const auto& d : phrases.dropped) {
      blocked.insert(d.phrase);
      all_dropped.push_back(d);
    }
    ++rounds;
    StageSelect(in, run_dir, budget, &blocked);
    sel = ReadSelection(run_dir);
  }
  if (!c.refund_dropped) all_dropped = phrases.dropped;

  std::vector<SentenceId> ids;
  for (const auto& s : sel.sentences) ids.push_back(s.id);
  const auto sentences = TranslateSentences(ids, in.Reference());

  std::ostringstream ls, lp, prov;
  WriteResponsesTsv(ls, sentences);
  WriteResponsesTsv(lp, phrases.responses);
  WriteProvenanceJsonl(prov, sentences);
  WriteProvenanceJsonl(prov, phrases.responses);
  WriteTextFile(run_dir / "l_s.tsv", ls.str());
  WriteTextFile(run_dir / "l_p.tsv", lp.str());
  WriteTextFile(run_dir / "oracle.jsonl", prov.str());
  out.summary = {{"sentences", sentences.size()},
                 {"phrases", phrases.responses.size()},
                 {"phrases_requested", sel.phrases.size()},
                 {"dropped", DroppedJson(all_dropped)},
                 {"dropped_count", all_dropped.size()},
                 {"refund_rounds", rounds},
                 {"aligner", c.alignments.empty() ? "ibm1" : "pharaoh"}};
  WriteTextFile(run_dir / "oracle.json", Dump(out.summary));
  out.files = {"ttable.tsv", "l_s.tsv", "l_p.tsv", "oracle.jsonl",
               "oracle.json"};
  return out;
}

StageOutput StageAugment(Inputs& in, const fs::path& run_dir) {
  const RunConfig& c = in.config();
  StageOutput out;
  out.stage = "augment";
  if (c.augmentation == "none") {
    out.summary = {{"skipped", true}};
    return out;
  }
  std::vector<PhrasePair> pairs;
  for (const auto& r : ReadOracle(run_dir)) {
    if (r.kind == OracleResponse::Kind::kPhrase) {
      pairs.push_back({Phrase(r.source), Phrase(r.target)});
    }
  }
  auto table_in = OpenInput(run_dir / "ttable.tsv");
  const TranslationTable table = TranslationTable::ReadTsv(table_in);
  AugmentOptions options;
  options.do_switch = c.augmentation == "switch" || c.augmentation == "both";
  options.do_contextualize =
      c.augmentation == "contextualize" || c.augmentation == "both";
  options.separator = c.context_separator;
  options.reverse_alignment = c.alignment_direction == "target-source";
  options.workers = c.workers;
  AugmentReport report =
      pairs.empty()
          ? AugmentReport{}
          : Augment(in.Unlabeled(), pairs, in.LabeledPrime(),
                    in.SelectionScorer(), table, in.LanguageModel(), options);
  std::ostringstream tsv, jsonl;
  WriteSyntheticTsv(tsv, report.pairs);
  WriteSyntheticJsonl(jsonl, report.pairs);
  WriteTextFile(run_dir / "synthetic.tsv", tsv.str());
  WriteTextFile(run_dir / "synthetic.jsonl", jsonl.str());
  std::int64_t switched = 0;
  for (const auto& p : report.pairs) switched += p.recipe == Recipe::kSwitch;
  out.summary = {
      {"recipe", c.augmentation},
      {"sentences_with_phrases", report.sentences},
      {"synthetic_switch", switched},
      {"synthetic_context",
       static_cast<std::int64_t>(report.pairs.size()) - switched},
      {"dropped",
       {{"retrieval_failure", report.retrieval_failures},
        {"switch_without_candidate", report.switch_without_candidate},
        {"unresolved_target_span", report.unresolved_span}}}};
  WriteTextFile(run_dir / "augment.json", Dump(out.summary));
  out.files = {"synthetic.tsv", "synthetic.jsonl", "augment.json"};
  return out;
}

StageOutput StageMix(Inputs& in, const fs::path& run_dir,
                     std::int64_t budget) {
  const RunConfig& c = in.config();
  StageOutput out;
  out.stage = "mix";
  std::vector<OracleResponse> ls, lp;
  for (auto& r : ReadOracle(run_dir)) {
    (r.kind == OracleResponse::Kind::kSentence ? ls : lp).push_back(std::move(r));
  }
  std::vector<SyntheticPair> synthetic;
  if (fs::exists(run_dir / "synthetic.jsonl")) {
    auto f = OpenInput(run_dir / "synthetic.jsonl");
    std::string line;
    while (std::getline(f, line)) {
      if (Tokenize(line)) {
        synthetic.push_back(SyntheticFromJson(nlohmann::json::parse(line)));
      }
    }
  }

  std::vector<SentencePair> mixed;
  nlohmann::json mix_info = {{"policy", c.mixing}};
  const Origin origin =
      c.mixing == "sampled" ? Origin::kSampled : Origin::kRetrieved;
  if (c.mixing != "none") {
    if (!c.freeze_file.empty() && fs::exists(c.freeze_file)) {
      for (SentenceId id : ReadFreezeFile(c.freeze_file)) {
        mixed.push_back(in.Labeled().At(id));
      }
      mix_info["m_rule"] = "freeze-file";
    } else {
      std::size_t ngf_smp_size = lp.size();
      if (!PhrasePoolIsNgfSmp(c) && c.mix_size < 0) {
        const std::int64_t allowance =
            c.strategy == "hybrid" ? SplitBudget(budget).phrase_share : budget;
        ngf_smp_size = SelectNgfSmp(ExtractNgrams(in.Unlabeled(), c.max_n),
                                    in.LabeledIndex(), allowance)
                           .phrases.size();
      }
      const std::size_t m = ResolveMixSize(PhrasePoolIsNgfSmp(c), lp.size(),
                                           ngf_smp_size, c.mix_size);
      mix_info["m_rule"] = c.mix_size >= 0          ? "override"
                           : PhrasePoolIsNgfSmp(c) ? "size-of-l_p"
                                                   : "size-of-ngf-smp-selection";
      if (c.mixing == "sampled") {
        mixed = SampleRandom(in.LabeledPrime(), m, c.seed);
      } else {
        RetrievalResult rr =
            RetrieveSimilar(in.LabeledPrime(), in.RetrievalScorer(), m, c.workers);
        mixed = std::move(rr.pairs);
        mix_info["skipped_degenerate"] = rr.skipped;
      }
      if (!c.freeze_file.empty()) WriteFreezeFile(c.freeze_file, mixed);
    }
    std::ostringstream ids;
    for (const auto& p : mixed) ids << nlohmann::json{{"id", p.id}}.dump() << '\n';
    WriteTextFile(run_dir / "mixed.jsonl", ids.str());
    out.files.push_back("mixed.jsonl");
  }

  AssembleInput input;
  input.sentences = ls;
  input.phrases = lp;
  input.mixed = mixed;
  input.mixed_origin = origin;
  input.synthetic = synthetic;
  input.dedupe = c.dedupe;
  const MixManifest manifest = Assemble(input);
  std::ostringstream jsonl, tsv;
  WriteManifestJsonl(jsonl, manifest);
  WriteManifestTsv(tsv, manifest);
  WriteTextFile(run_dir / "manifest.jsonl", jsonl.str());
  WriteTextFile(run_dir / "manifest.tsv", tsv.str());
  out.summary = ManifestSummary(manifest);
  out.summary["mixing"] = mix_info;
  WriteTextFile(run_dir / "mix.json", Dump(out.summary));
  for (const char* f : {"manifest.jsonl", "manifest.tsv", "mix.json"}) {
    out.files.push_back(f);
  }
  return out;
}

StageOutput StageAnalyze(Inputs& in, const fs::path& run_dir) {
  const RunConfig& c = in.config();
  StageOutput out;
  out.stage = "analyze";
  if (c.test.empty()) {
    out.summary = {{"skipped", "no test set configured"}};
    return out;
  }
  const SelectionResult sel = ReadSelection(run_dir);
  const std::vector<Tokens> selected = SelectedText(in, sel);
  std::vector<Tokens> ood, test;
  for (const auto& p : in.Labeled().pairs()) ood.push_back(p.source);
  for (const auto& p : in.Test().pairs()) test.push_back(p.source);
  std::vector<Tokens> cumulative = ood;
  cumulative.insert(cumulative.end(), selected.begin(), selected.end());

  auto coverage = [&](const std::vector<Tokens>& covering, const char* what) {
    CoverageReport r = NgramCoverage(covering, test, c.max_n);
    r.covering_description = what;
    return ToJson(r);
  };
  out.summary = {
      {"coverage",
       {coverage(ood, "ood"), coverage(selected, "selected"),
        coverage(cumulative, "selected+ood")}},
      {"in_domain_words", ToJson(ComputeInDomainWordStats(selected, ood, test))},
      {"selected_words", sel.budget.spent_sentence + sel.budget.spent_phrase}};
  WriteTextFile(run_dir / "analysis.json", Dump(out.summary));
  out.files = {"analysis.json"};
  return out;
}

}  // namespace alsel
